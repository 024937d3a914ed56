#include "dpskit/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

namespace dpskit {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::primal_infeasible: return "primal_infeasible";
    case SolveStatus::dual_infeasible: return "dual_infeasible";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::numerical_error: return "numerical_error";
  }
  return "unknown";
}

int SdpProblem::add_block(int size) {
  require(size >= 1, "block size must be positive");
  block_sizes.push_back(size);
  if (!objective.empty()) objective.push_back(RealMatrix::Zero(size, size));
  return static_cast<int>(block_sizes.size()) - 1;
}

int SdpProblem::add_constraint(SdpConstraint c) {
  constraints.push_back(std::move(c));
  return static_cast<int>(constraints.size()) - 1;
}

void SdpProblem::validate() const {
  require(!block_sizes.empty(), "SDP has no blocks");
  for (int n : block_sizes) require(n >= 1, "block sizes must be positive");
  if (!objective.empty()) {
    require(objective.size() == block_sizes.size(), "objective needs one matrix per block");
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
      const auto& c = objective[b];
      require(c.rows() == block_sizes[b] && c.cols() == block_sizes[b], "objective block has the wrong size");
      const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
      require((c - c.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, "objective block is not symmetric");
    }
  }
  for (const auto& con : constraints)
    for (const auto& part : con.parts) {
      require(part.block >= 0 && part.block < static_cast<int>(block_sizes.size()), "constraint names a missing block");
      const int n = block_sizes[part.block];
      for (const auto& e : part.entries)
        require(e.r >= 0 && e.c >= 0 && e.r < n && e.c < n, "constraint entry outside its block");
    }
}

RealMatrix embed_complex(const Matrix& h) {
  const Eigen::Index n = h.rows();
  RealMatrix w(2 * n, 2 * n);
  w.topLeftCorner(n, n) = h.real();
  w.topRightCorner(n, n) = -h.imag();
  w.bottomLeftCorner(n, n) = h.imag();
  w.bottomRightCorner(n, n) = h.real();
  return w;
}

Matrix unembed(const RealMatrix& w) {
  require(w.rows() == w.cols() && w.rows() % 2 == 0, "unembed needs an even square matrix");
  const Eigen::Index n = w.rows() / 2;
  RealMatrix re = 0.5 * (w.topLeftCorner(n, n) + w.bottomRightCorner(n, n));
  RealMatrix im = 0.5 * (w.bottomLeftCorner(n, n) - w.topRightCorner(n, n));
  Matrix out(n, n);
  out.real() = re;
  out.imag() = im;
  return out;
}

RealMatrix adjoint_block(const SdpProblem& p, const RealVector& y, int block) {
  const int n = p.block_sizes.at(block);
  RealMatrix out = RealMatrix::Zero(n, n);
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    if (y(i) == 0.0) continue;
    for (const auto& part : p.constraints[i].parts) {
      if (part.block != block) continue;
      for (const auto& e : part.entries) {
        out(e.r, e.c) += y(i) * e.v;
        if (e.r != e.c) out(e.c, e.r) += y(i) * e.v;
      }
    }
  }
  return out;
}

RealVector apply_constraints(const SdpProblem& p, const std::vector<RealMatrix>& x) {
  RealVector out = RealVector::Zero(static_cast<Eigen::Index>(p.constraints.size()));
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    double acc = 0.0;
    for (const auto& part : p.constraints[i].parts) {
      const auto& xb = x.at(part.block);
      for (const auto& e : part.entries) acc += e.v * (e.r == e.c ? xb(e.r, e.c) : xb(e.r, e.c) + xb(e.c, e.r));
    }
    out(i) = acc;
  }
  return out;
}

namespace {

using SpRow = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Blocks = std::vector<RealMatrix>;

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

double fro(const Blocks& a) { return std::sqrt(inner(a, a)); }

RealMatrix sym(const RealMatrix& m) { return 0.5 * (m + m.transpose()); }

// Largest step keeping x + a*dx PSD, given the Cholesky factor of x.
double max_step(const Eigen::LLT<RealMatrix>& lx, const RealMatrix& dx) {
  const auto& L = lx.matrixL();
  RealMatrix t = L.solve(dx);
  RealMatrix q = L.solve(t.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym(q), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

struct Model {
  int m = 0;
  std::vector<int> n;
  std::vector<SpRow> Ab;  // per block: m x n_b^2, column-major vec, both triangles
  RealVector b;
  Blocks C;

  RealVector apply(const Blocks& z) const {
    RealVector out = RealVector::Zero(m);
    for (std::size_t k = 0; k < n.size(); ++k)
      out += Ab[k] * Eigen::Map<const RealVector>(z[k].data(), z[k].size());
    return out;
  }
  Blocks adjoint(const RealVector& y) const {
    Blocks out(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) {
      RealVector v = Ab[k].transpose() * y;
      out[k] = Eigen::Map<RealMatrix>(v.data(), n[k], n[k]);
    }
    return out;
  }
};

std::vector<SpRow> assemble(const SdpProblem& p, const std::vector<int>& rows, const std::vector<double>& scale) {
  const std::size_t nb = p.block_sizes.size();
  std::vector<std::vector<Eigen::Triplet<double>>> trip(nb);
  for (std::size_t ii = 0; ii < rows.size(); ++ii) {
    const auto& con = p.constraints[rows[ii]];
    for (const auto& part : con.parts) {
      const int n = p.block_sizes[part.block];
      for (const auto& e : part.entries) {
        const double v = e.v * scale[ii];
        trip[part.block].emplace_back(static_cast<int>(ii), e.r + e.c * n, v);
        if (e.r != e.c) trip[part.block].emplace_back(static_cast<int>(ii), e.c + e.r * n, v);
      }
    }
  }
  std::vector<SpRow> out(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    const int n = p.block_sizes[k];
    out[k].resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n) * n);
    out[k].setFromTriplets(trip[k].begin(), trip[k].end());
    out[k].makeCompressed();
  }
  return out;
}

// Rows whose Gram residual falls below this fraction of their squared norm
// are treated as linear combinations of earlier rows.
constexpr double kGramPivotTol = 1e-12;

struct Pruning {
  std::vector<int> kept;
  std::vector<int> dropped;
  // set when a dropped row is inconsistent: y over the original rows with A^T y ~ 0, b^T y = 1
  std::optional<RealVector> farkas_y;
};

Pruning prune_dependent(const std::vector<SpRow>& Ab, const RealVector& b, int m) {
  Pruning out;
  if (m == 0) return out;
  Eigen::SparseMatrix<double> gs(m, m);
  for (const auto& a : Ab) gs += (a * a.transpose()).pruned();
  RealMatrix G(gs);
  Eigen::LLT<RealMatrix> llt(G);
  bool clean = llt.info() == Eigen::Success;
  if (clean) {
    const RealMatrix& L = llt.matrixLLT();
    for (int i = 0; i < m && clean; ++i) clean = L(i, i) * L(i, i) > kGramPivotTol * G(i, i);
  }
  if (clean) {
    out.kept.resize(m);
    for (int i = 0; i < m; ++i) out.kept[i] = i;
    return out;
  }
  // Left-looking Cholesky that skips rows with a negligible pivot.
  RealMatrix L = RealMatrix::Zero(m, m);
  int r = 0;
  for (int i = 0; i < m; ++i) {
    RealVector g(r);
    for (int k = 0; k < r; ++k) g(k) = G(out.kept[k], i);
    RealVector l = r ? RealVector(L.topLeftCorner(r, r).triangularView<Eigen::Lower>().solve(g)) : RealVector();
    const double d = G(i, i) - l.squaredNorm();
    if (d > kGramPivotTol * G(i, i)) {
      L.block(r, 0, 1, r) = l.transpose();
      L(r, r) = std::sqrt(d);
      out.kept.push_back(i);
      ++r;
      continue;
    }
    out.dropped.push_back(i);
    if (out.farkas_y) continue;
    // A_i ~ sum_k w_k A_kept[k] with G_KK w = g
    RealVector w = r ? RealVector(L.topLeftCorner(r, r).transpose().triangularView<Eigen::Upper>().solve(l)) : RealVector();
    double bk = 0.0;
    for (int k = 0; k < r; ++k) bk += w(k) * b(out.kept[k]);
    const double delta = b(i) - bk;
    if (std::abs(delta) > 1e-9 * (1.0 + std::abs(b(i)))) {
      RealVector y = RealVector::Zero(m);
      y(i) = 1.0;
      for (int k = 0; k < r; ++k) y(out.kept[k]) -= w(k);
      out.farkas_y = y / delta;
    }
  }
  return out;
}

struct Iterate {
  Blocks X, S;
  RealVector y;
  double tau = 1, kappa = 1;
};

struct Direction {
  Blocks dX, dS;
  RealVector dy;
  double dtau = 0, dkappa = 0;
};

}  // namespace

SdpSolution solve(const SdpProblem& p, const SolverOptions& opts) {
  p.validate();
  require(opts.tol > 0 && opts.max_iter >= 1, "solver options out of range");
  const std::size_t nb = p.block_sizes.size();
  const int m0 = static_cast<int>(p.constraints.size());

  // Row normalization.
  std::vector<int> all(m0);
  std::vector<double> ones(m0, 1.0);
  for (int i = 0; i < m0; ++i) all[i] = i;
  auto raw = assemble(p, all, ones);
  RealVector bRaw(m0);
  for (int i = 0; i < m0; ++i) bRaw(i) = p.constraints[i].rhs;
  std::vector<double> rowScale(m0, 1.0);
  RealVector nrm2 = RealVector::Zero(m0);
  for (const auto& a : raw)
    for (int i = 0; i < m0; ++i)
      for (SpRow::InnerIterator it(a, i); it; ++it) nrm2(i) += it.value() * it.value();
  for (int i = 0; i < m0; ++i) rowScale[i] = nrm2(i) == 0.0 ? 1.0 : 1.0 / std::sqrt(nrm2(i));
  RealVector bNorm(m0);
  for (int i = 0; i < m0; ++i) bNorm(i) = bRaw(i) * rowScale[i];

  SdpSolution sol;
  const double sgn = p.sense == Sense::maximize ? -1.0 : 1.0;

  // Zero rows: consistent ones are dropped, inconsistent ones certify infeasibility.
  std::vector<int> nonzero;
  for (int i = 0; i < m0; ++i) {
    if (nrm2(i) > 0) {
      nonzero.push_back(i);
    } else if (std::abs(bRaw(i)) > 0) {
      sol.status = SolveStatus::primal_infeasible;
      RealVector y = RealVector::Zero(m0);
      y(i) = 1.0 / bRaw(i);
      sol.certificate_y = y;
      Blocks cert(nb);
      for (std::size_t k = 0; k < nb; ++k) cert[k] = RealMatrix::Zero(p.block_sizes[k], p.block_sizes[k]);
      sol.certificate = cert;
      sol.dual_multipliers = y;
      return sol;
    }
  }
  std::vector<double> scaleNz(nonzero.size());
  for (std::size_t i = 0; i < nonzero.size(); ++i) scaleNz[i] = rowScale[nonzero[i]];
  auto normed = assemble(p, nonzero, scaleNz);
  RealVector bNz(static_cast<Eigen::Index>(nonzero.size()));
  for (std::size_t i = 0; i < nonzero.size(); ++i) bNz(i) = bNorm(nonzero[i]);

  auto pr = prune_dependent(normed, bNz, static_cast<int>(nonzero.size()));
  sol.pruned_constraints = m0 - static_cast<int>(pr.kept.size());
  if (pr.farkas_y) {
    RealVector y = RealVector::Zero(m0);
    for (std::size_t i = 0; i < nonzero.size(); ++i) y(nonzero[i]) = (*pr.farkas_y)(i) * rowScale[nonzero[i]];
    sol.status = SolveStatus::primal_infeasible;
    sol.certificate_y = y;
    sol.dual_multipliers = y;
    Blocks cert(nb);
    for (std::size_t k = 0; k < nb; ++k) cert[k] = -adjoint_block(p, y, static_cast<int>(k));
    sol.certificate = cert;
    return sol;
  }

  std::vector<int> rows(pr.kept.size());
  std::vector<double> scale(pr.kept.size());
  for (std::size_t i = 0; i < pr.kept.size(); ++i) {
    rows[i] = nonzero[pr.kept[i]];
    scale[i] = rowScale[rows[i]];
  }

  Model M;
  M.m = static_cast<int>(rows.size());
  M.n = p.block_sizes;
  M.Ab = assemble(p, rows, scale);
  M.b.resize(M.m);
  for (int i = 0; i < M.m; ++i) M.b(i) = bNorm(rows[i]);
  M.C.resize(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    const int n = p.block_sizes[k];
    M.C[k] = (p.objective.empty() || p.sense == Sense::feasibility) ? RealMatrix::Zero(n, n)
                                                                    : RealMatrix(sgn * p.objective[k]);
  }
  const double bScale = std::max(1.0, M.b.norm());
  const double cScale = std::max(1.0, fro(M.C));
  M.b /= bScale;
  for (auto& c : M.C) c /= cScale;

  const int m = M.m;
  double nu = 0;
  for (int n : M.n) nu += n;

  Iterate it;
  it.X.resize(nb);
  it.S.resize(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    it.X[k] = RealMatrix::Identity(M.n[k], M.n[k]);
    it.S[k] = RealMatrix::Identity(M.n[k], M.n[k]);
  }
  it.y = RealVector::Zero(m);

  std::ofstream log;
  if (!opts.log_path.empty()) {
    log.open(opts.log_path);
    log << "iter,mu,primal_res,dual_res,gap,tau,kappa,alpha\n";
  }

  const double bn = M.b.norm();
  const double cn = fro(M.C);

  struct Measures {
    double pres, dres, gap, pobj, dobj;
    RealVector rp;
    Blocks rd;
    double rg;
  };
  auto measure = [&](const Iterate& z) {
    Measures r;
    RealVector ax = M.apply(z.X);
    r.rp = M.b * z.tau - ax;
    Blocks aty = M.adjoint(z.y);
    r.rd.resize(nb);
    for (std::size_t k = 0; k < nb; ++k) r.rd[k] = M.C[k] * z.tau - aty[k] - z.S[k];
    r.pobj = inner(M.C, z.X);
    r.dobj = M.b.dot(z.y);
    r.rg = z.kappa + r.pobj - r.dobj;
    r.pres = r.rp.norm() / (z.tau * (1.0 + bn));
    r.dres = fro(r.rd) / (z.tau * (1.0 + cn));
    r.gap = std::abs(r.pobj - r.dobj) / (z.tau + std::abs(r.pobj) + std::abs(r.dobj));
    return r;
  };

  Iterate best = it;
  double bestMerit = std::numeric_limits<double>::infinity();
  Residuals bestRes;

  auto finish = [&](const Iterate& z, SolveStatus status, const Measures& r, int iters) {
    sol.status = status;
    sol.iterations = iters;
    sol.residuals = {r.pres, r.dres, r.gap};
    sol.primal_blocks.assign(nb, RealMatrix());
    sol.dual_slack.assign(nb, RealMatrix());
    for (std::size_t k = 0; k < nb; ++k) {
      sol.primal_blocks[k] = sym(z.X[k]) * (bScale / z.tau);
      sol.dual_slack[k] = sym(z.S[k]) * (cScale / z.tau);
    }
    RealVector y = RealVector::Zero(m0);
    for (int i = 0; i < m; ++i) y(rows[i]) = z.y(i) * scale[i] * cScale / z.tau;
    sol.dual_multipliers = y;
    double obj = 0.0;
    if (p.sense != Sense::feasibility && !p.objective.empty())
      for (std::size_t k = 0; k < nb; ++k) obj += p.objective[k].cwiseProduct(sol.primal_blocks[k]).sum();
    sol.objective_value = obj;
    sol.dual_value = sgn * bRaw.dot(y);
  };

  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    Measures r = measure(it);
    const double mu = (inner(it.X, it.S) + it.tau * it.kappa) / (nu + 1.0);

    const double merit = std::max({r.pres, r.dres, r.gap});
    if (merit < bestMerit) {
      bestMerit = merit;
      best = it;
    }

    if (r.pres <= opts.tol && r.dres <= opts.tol && r.gap <= opts.tol) {
      finish(it, SolveStatus::optimal, r, iter);
      return sol;
    }
    // Infeasibility certificates (scaled problem).
    if (r.dobj > 0) {
      Blocks aty = M.adjoint(it.y);
      for (std::size_t k = 0; k < nb; ++k) aty[k] += it.S[k];
      if (fro(aty) / r.dobj <= opts.tol) {
        RealVector y = RealVector::Zero(m0);
        for (int i = 0; i < m; ++i) y(rows[i]) = it.y(i) * scale[i];
        const double by = bRaw.dot(y);
        y /= by;
        sol.status = SolveStatus::primal_infeasible;
        sol.iterations = iter;
        sol.residuals = {r.pres, r.dres, r.gap};
        sol.certificate_y = y;
        sol.dual_multipliers = y;
        Blocks cert(nb);
        for (std::size_t k = 0; k < nb; ++k) cert[k] = -adjoint_block(p, y, static_cast<int>(k));
        sol.certificate = cert;
        return sol;
      }
    }
    if (r.pobj < 0) {
      const double ax = M.apply(it.X).norm();
      if (ax / -r.pobj <= opts.tol) {
        sol.status = SolveStatus::dual_infeasible;
        sol.iterations = iter;
        sol.residuals = {r.pres, r.dres, r.gap};
        Blocks ray(nb);
        for (std::size_t k = 0; k < nb; ++k) ray[k] = sym(it.X[k]) / -r.pobj;
        sol.certificate = ray;
        return sol;
      }
    }
    if (iter == opts.max_iter) break;

    if (log.is_open())
      log << iter << ',' << mu << ',' << r.pres << ',' << r.dres << ',' << r.gap << ',' << it.tau << ','
          << it.kappa << ',';

    // Factorizations.
    std::vector<Eigen::LLT<RealMatrix>> lx(nb), ls(nb);
    Blocks Sinv(nb);
    bool ok = true;
    for (std::size_t k = 0; k < nb && ok; ++k) {
      lx[k].compute(it.X[k]);
      ls[k].compute(it.S[k]);
      ok = lx[k].info() == Eigen::Success && ls[k].info() == Eigen::Success;
      if (ok) Sinv[k] = ls[k].solve(RealMatrix::Identity(M.n[k], M.n[k]));
    }
    if (!ok) {
      if (log.is_open()) log << "nan\n";
      finish(best, SolveStatus::numerical_error, measure(best), iter);
      return sol;
    }

    // Schur complement M_ij = <A_j, X A_i S^-1>.
    RealMatrix Msc = RealMatrix::Zero(m, m);
    {
      std::vector<std::vector<int>> slot(nb);
      for (std::size_t k = 0; k < nb; ++k) slot[k].assign(M.n[k], -1);
      std::vector<int> cols;
      for (int i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < nb; ++k) {
          const auto& A = M.Ab[k];
          if (A.outerIndexPtr()[i] == A.outerIndexPtr()[i + 1]) continue;
          const int n = M.n[k];
          cols.clear();
          for (SpRow::InnerIterator e(A, i); e; ++e) {
            const int c = static_cast<int>(e.col() / n);
            if (slot[k][c] < 0) {
              slot[k][c] = static_cast<int>(cols.size());
              cols.push_back(c);
            }
          }
          RealMatrix T = RealMatrix::Zero(n, static_cast<Eigen::Index>(cols.size()));
          for (SpRow::InnerIterator e(A, i); e; ++e) {
            const int rr = static_cast<int>(e.col() % n);
            const int c = static_cast<int>(e.col() / n);
            T.col(slot[k][c]) += e.value() * it.X[k].col(rr);
          }
          RealMatrix Srows(cols.size(), n);
          for (std::size_t j = 0; j < cols.size(); ++j) Srows.row(j) = Sinv[k].row(cols[j]);
          RealMatrix G = T * Srows;
          Msc.col(i) += A * Eigen::Map<const RealVector>(G.data(), G.size());
          for (int c : cols) slot[k][c] = -1;
        }
      }
    }
    Msc = 0.5 * (Msc + Msc.transpose()).eval();
    Eigen::LLT<RealMatrix> schur(Msc);
    if (schur.info() != Eigen::Success) {
      const double reg = 1e-12 * std::max(1.0, Msc.diagonal().maxCoeff());
      Msc.diagonal().array() += reg;
      schur.compute(Msc);
      if (schur.info() != Eigen::Success) {
        if (log.is_open()) log << "nan\n";
        finish(best, SolveStatus::numerical_error, measure(best), iter);
        return sol;
      }
    }

    // Refine against the unassembled operator y -> A(X A^T(y) S^-1); the dense
    // Schur matrix loses accuracy as S approaches the boundary.
    auto schur_solve = [&](const RealVector& rhs) {
      RealVector x = schur.solve(rhs);
      for (int round = 0; round < 2; ++round) {
        Blocks t = M.adjoint(x);
        for (std::size_t k = 0; k < nb; ++k) t[k] = it.X[k] * t[k] * Sinv[k];
        const RealVector res = rhs - M.apply(t);
        if (!res.allFinite()) break;
        x += schur.solve(res);
      }
      return x;
    };

    Blocks XCSi(nb), XrdSi(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      XCSi[k] = it.X[k] * M.C[k] * Sinv[k];
      XrdSi[k] = it.X[k] * r.rd[k] * Sinv[k];
    }
    const RealVector v = M.apply(XCSi);
    const double cc = inner(M.C, XCSi);
    const RealVector q = schur_solve(RealVector(v + M.b));
    const RealVector bmv = M.b - v;
    const double den = bmv.dot(q) + cc + it.kappa / it.tau;
    const RealVector aXrdSi = M.apply(XrdSi);
    const double cXrdSi = inner(M.C, XrdSi);

    auto direction = [&](double eta, double smu, const Direction* corr) {
      Direction d;
      Blocks Rc(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        Rc[k] = smu * Sinv[k] - it.X[k];
        if (corr) Rc[k] -= sym(corr->dX[k] * corr->dS[k] * Sinv[k]);
      }
      double rtk = smu - it.tau * it.kappa;
      if (corr) rtk -= corr->dtau * corr->dkappa;
      RealVector rhs1 = eta * r.rp - M.apply(Rc) + eta * aXrdSi;
      RealVector pv = schur_solve(rhs1);
      const double num = eta * r.rg + inner(M.C, Rc) - eta * cXrdSi + rtk / it.tau - bmv.dot(pv);
      d.dtau = num / den;
      d.dy = pv + q * d.dtau;
      Blocks atdy = M.adjoint(d.dy);
      d.dS.resize(nb);
      d.dX.resize(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        d.dS[k] = eta * r.rd[k] - atdy[k] + M.C[k] * d.dtau;
        d.dS[k] = sym(d.dS[k]);
        d.dX[k] = Rc[k] - sym(it.X[k] * d.dS[k] * Sinv[k]);
      }
      // dS is a cancelling sum that S^-1 amplifies near the boundary; push the
      // leftover primal residual of the direction back through the Schur system.
      const RealVector e = eta * r.rp + M.b * d.dtau - M.apply(d.dX);
      if (e.allFinite()) {
        const RealVector w = schur_solve(e);
        const Blocks atw = M.adjoint(w);
        d.dy += w;
        for (std::size_t k = 0; k < nb; ++k) {
          d.dS[k] -= sym(atw[k]);
          d.dX[k] += sym(it.X[k] * atw[k] * Sinv[k]);
        }
      }
      d.dkappa = (rtk - it.kappa * d.dtau) / it.tau;
      return d;
    };
    auto step_to_boundary = [&](const Direction& d) {
      double a = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < nb; ++k) {
        a = std::min(a, max_step(lx[k], d.dX[k]));
        a = std::min(a, max_step(ls[k], d.dS[k]));
      }
      if (d.dtau < 0) a = std::min(a, -it.tau / d.dtau);
      if (d.dkappa < 0) a = std::min(a, -it.kappa / d.dkappa);
      return a;
    };

    Direction aff = direction(1.0, 0.0, nullptr);
    const double aAff = std::min(1.0, step_to_boundary(aff));
    double gapAff = (it.tau + aAff * aff.dtau) * (it.kappa + aAff * aff.dkappa);
    for (std::size_t k = 0; k < nb; ++k)
      gapAff += (it.X[k] + aAff * aff.dX[k]).cwiseProduct(it.S[k] + aAff * aff.dS[k]).sum();
    const double muAff = std::max(0.0, gapAff / (nu + 1.0));
    const double sigma = std::clamp(std::pow(muAff / mu, 3.0), 0.0, 1.0);

    Direction d = direction(1.0 - sigma, sigma * mu, &aff);
    const double alpha = std::min(1.0, opts.step_fraction * step_to_boundary(d));
    if (log.is_open()) log << alpha << '\n';
    if (!(alpha > 1e-12)) {
      finish(best, SolveStatus::numerical_error, measure(best), iter);
      return sol;
    }

    for (std::size_t k = 0; k < nb; ++k) {
      it.X[k] = sym(it.X[k] + alpha * d.dX[k]);
      it.S[k] = sym(it.S[k] + alpha * d.dS[k]);
    }
    it.y += alpha * d.dy;
    it.tau += alpha * d.dtau;
    it.kappa += alpha * d.dkappa;
  }
  finish(best, SolveStatus::max_iter, measure(best), opts.max_iter);
  return sol;
}

}  // namespace dpskit
