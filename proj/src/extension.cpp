#include "dpskit/extension.hpp"

#include <cmath>
#include <map>
#include <string>

namespace dpskit {

Matrix SuperOp::apply(const Matrix& x) const {
  require(x.rows() == in_side && x.cols() == in_side, "superoperator input has the wrong side");
  Matrix out = Matrix::Zero(out_side, out_side);
  for (const auto& t : terms) out(t.out_r, t.out_c) += t.coef * x(t.in_r, t.in_c);
  return out;
}

Matrix SuperOp::adjoint(const Matrix& y) const {
  require(y.rows() == out_side && y.cols() == out_side, "superoperator adjoint input has the wrong side");
  Matrix out = Matrix::Zero(in_side, in_side);
  for (const auto& t : terms) out(t.in_r, t.in_c) += t.coef * y(t.out_r, t.out_c);
  return out;
}

SuperOp identity_superop(int d) {
  SuperOp s{d, d, {}};
  s.terms.reserve(static_cast<std::size_t>(d) * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) s.terms.push_back({a, b, a, b, 1.0});
  return s;
}

SuperOp trace_superop(int d) {
  SuperOp s{d, 1, {}};
  for (int a = 0; a < d; ++a) s.terms.push_back({0, 0, a, a, 1.0});
  return s;
}

SuperOp tensor(const SuperOp& a, const SuperOp& b) {
  SuperOp s{a.in_side * b.in_side, a.out_side * b.out_side, {}};
  s.terms.reserve(a.terms.size() * b.terms.size());
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms)
      s.terms.push_back({ta.out_r * b.out_side + tb.out_r, ta.out_c * b.out_side + tb.out_c,
                         ta.in_r * b.in_side + tb.in_r, ta.in_c * b.in_side + tb.in_c, ta.coef * tb.coef});
  return s;
}

namespace {

Occupation add(const Occupation& a, const Occupation& b) {
  Occupation s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
  return s;
}

std::vector<double> multinomials(const SymmetricIndex& idx) {
  std::vector<double> m(idx.size());
  for (int i = 0; i < idx.size(); ++i) m[i] = multinomial(idx[i]);
  return m;
}

}  // namespace

SuperOp reduce_map(int d, int N, int K) {
  require(d >= 1 && K >= 0 && K <= N, "reduce_map needs 0 <= K <= N");
  SymmetricIndex in(d, N), kept(d, K), traced(d, N - K);
  const auto mi = multinomials(in), mk = multinomials(kept), ml = multinomials(traced);
  SuperOp s{in.size(), kept.size(), {}};
  for (int l = 0; l < traced.size(); ++l) {
    std::vector<int> pos(kept.size());
    std::vector<double> c(kept.size());
    for (int k = 0; k < kept.size(); ++k) {
      pos[k] = in.find(add(kept[k], traced[l]));
      c[k] = std::sqrt(mk[k] * ml[l] / mi[pos[k]]);
    }
    for (int k = 0; k < kept.size(); ++k)
      for (int k2 = 0; k2 < kept.size(); ++k2) s.terms.push_back({k, k2, pos[k], pos[k2], c[k] * c[k2]});
  }
  return s;
}

SuperOp ppt_split_map(int d, int N, int j) {
  require(d >= 1 && j >= 0 && j <= N, "ppt_split_map needs 0 <= j <= N");
  SymmetricIndex in(d, N), left(d, N - j), right(d, j);
  const auto mi = multinomials(in), mL = multinomials(left), mR = multinomials(right);
  const int DL = left.size(), DR = right.size();
  // pos[k][r] = index of k + r in Sym^N, coef[k][r] the splitting coefficient
  std::vector<int> pos(static_cast<std::size_t>(DL) * DR);
  std::vector<double> coef(pos.size());
  for (int k = 0; k < DL; ++k)
    for (int r = 0; r < DR; ++r) {
      const int p = in.find(add(left[k], right[r]));
      pos[k * DR + r] = p;
      coef[k * DR + r] = std::sqrt(mL[k] * mR[r] / mi[p]);
    }
  SuperOp s{in.size(), DL * DR, {}};
  s.terms.reserve(static_cast<std::size_t>(DL * DR) * (DL * DR));
  // Y[(k,r),(k',s)] = X[k+s, k'+r] c(k,s) c(k',r)
  for (int k = 0; k < DL; ++k)
    for (int r = 0; r < DR; ++r)
      for (int k2 = 0; k2 < DL; ++k2)
        for (int t = 0; t < DR; ++t)
          s.terms.push_back({k * DR + r, k2 * DR + t, pos[k * DR + t], pos[k2 * DR + r],
                             coef[k * DR + t] * coef[k2 * DR + r]});
  return s;
}

CompressedMaps compressed_maps(int dA, int dB, int N, bool ppt) {
  require(dA >= 1 && dB >= 1 && N >= 1, "compressed_maps needs positive dimensions and N");
  CompressedMaps out;
  out.trace_map = tensor(identity_superop(dA), reduce_map(dB, N, 1));
  if (ppt && N / 2 >= 1) out.ppt_map = tensor(identity_superop(dA), ppt_split_map(dB, N, N / 2));
  return out;
}

ExtensionQuery ExtensionQuery::membership(HermitianOperator rho, int N, bool ppt) {
  ExtensionQuery q;
  q.rho = std::move(rho);
  q.N = N;
  q.ppt = ppt;
  return q;
}

ExtensionQuery ExtensionQuery::cone(HermitianOperator objective, int N, bool ppt, MarginalConstraint c) {
  ExtensionQuery q;
  q.N = N;
  q.ppt = ppt;
  q.mode = QueryMode::cone_optimize;
  q.reduced_constraint = c;
  q.rho = objective;
  q.objective = std::move(objective);
  return q;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::feasible: return "feasible";
    case Verdict::infeasible: return "infeasible";
    case Verdict::undecided: return "undecided";
  }
  return "unknown";
}

void check_budget(int dA, int dB, int N, std::int64_t budget_dim) {
  const auto side = static_cast<std::int64_t>(dA) * sym_dim(dB, N);
  if (side > budget_dim)
    fail(ErrorCode::budget_exceeded, "extension side dA*sym_dim(dB,N) = " + std::to_string(side) +
                                         " exceeds the budget " + std::to_string(budget_dim));
}

std::vector<Matrix> hermitian_basis(int n) {
  std::vector<Matrix> out;
  const double r = 1.0 / std::sqrt(2.0);
  for (int p = 0; p < n; ++p) {
    Matrix e = Matrix::Zero(n, n);
    e(p, p) = 1.0;
    out.push_back(e);
  }
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      Matrix s = Matrix::Zero(n, n);
      s(p, q) = r;
      s(q, p) = r;
      out.push_back(s);
      Matrix a = Matrix::Zero(n, n);
      a(p, q) = Complex(0, r);
      a(q, p) = Complex(0, -r);
      out.push_back(a);
    }
  return out;
}

namespace {

using Entry = std::tuple<int, int, Complex>;  // full Hermitian matrix entries

// Entries of emb(M)/2 (upper triangle) for a Hermitian M given by its full entry list.
std::vector<SymEntry> embed_entries(int n, const std::vector<Entry>& full) {
  std::map<std::pair<int, int>, double> acc;
  auto put = [&](int r, int c, double v) {
    if (v != 0.0 && r <= c) acc[{r, c}] += v;
  };
  for (const auto& [r, c, v] : full) {
    put(r, c, 0.5 * v.real());
    put(n + r, n + c, 0.5 * v.real());
    put(n + r, c, 0.5 * v.imag());
    put(r, n + c, -0.5 * v.imag());
  }
  std::vector<SymEntry> out;
  out.reserve(acc.size());
  for (const auto& [k, v] : acc)
    if (v != 0.0) out.push_back({k.first, k.second, v});
  return out;
}

// Terms of a superoperator grouped by output position.
struct OutIndex {
  std::vector<std::vector<int>> at;
  int side;
  explicit OutIndex(const SuperOp& s) : at(static_cast<std::size_t>(s.out_side) * s.out_side), side(s.out_side) {
    for (std::size_t t = 0; t < s.terms.size(); ++t)
      at[static_cast<std::size_t>(s.terms[t].out_r) * side + s.terms[t].out_c].push_back(static_cast<int>(t));
  }
  const std::vector<int>& operator()(int r, int c) const { return at[static_cast<std::size_t>(r) * side + c]; }
};

// Adjoint of a sparse Hermitian element given as full entries of the output space.
std::vector<Entry> adjoint_entries(const SuperOp& s, const OutIndex& idx, const std::vector<Entry>& elem) {
  std::vector<Entry> out;
  for (const auto& [p, q, beta] : elem)
    for (int t : idx(p, q)) {
      const auto& term = s.terms[t];
      out.emplace_back(term.in_r, term.in_c, term.coef * beta);
    }
  return out;
}

// Full entries of the k-th element of the orthonormal Hermitian basis, enumerated
// in the same order as hermitian_basis().
struct HermElem {
  int p, q, kind;  // kind 0 diagonal, 1 symmetric, 2 antisymmetric
};

std::vector<HermElem> herm_elems(int n) {
  std::vector<HermElem> out;
  for (int p = 0; p < n; ++p) out.push_back({p, p, 0});
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      out.push_back({p, q, 1});
      out.push_back({p, q, 2});
    }
  return out;
}

std::vector<Entry> elem_entries(const HermElem& e) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (e.kind) {
    case 0: return {{e.p, e.p, 1.0}};
    case 1: return {{e.p, e.q, r}, {e.q, e.p, r}};
    default: return {{e.p, e.q, Complex(0, r)}, {e.q, e.p, Complex(0, -r)}};
  }
}

Matrix elem_dense(const HermElem& e, int n) {
  Matrix m = Matrix::Zero(n, n);
  for (const auto& [r, c, v] : elem_entries(e)) m(r, c) = v;
  return m;
}

// tr(B rho) for a basis element.
double elem_value(const HermElem& e, const Matrix& rho) {
  const double s2 = std::sqrt(2.0);
  switch (e.kind) {
    case 0: return rho(e.p, e.p).real();
    case 1: return s2 * rho(e.p, e.q).real();
    default: return s2 * rho(e.p, e.q).imag();
  }
}

struct Assembly {
  const SuperOp* trace_map;
  std::vector<SuperOp> ppt_maps;
  int x_side;
  Dims in_dims;
  int first_side;  // dimension of the untouched first factor (for identity_marginal)
};

ExtensionSdp assemble(Assembly a, MarginalConstraint mc, const HermitianOperator* rho,
                      const HermitianOperator* objective) {
  ExtensionSdp out;
  out.in_dims = a.in_dims;
  out.x_side = a.x_side;
  out.trace_map = *a.trace_map;
  out.ppt_maps = std::move(a.ppt_maps);
  SdpProblem& p = out.problem;
  out.x_block = p.add_block(2 * a.x_side);
  for (const auto& m : out.ppt_maps) out.y_blocks.push_back(p.add_block(2 * m.out_side));

  const int nx = a.x_side;
  switch (mc) {
    case MarginalConstraint::trace_match: {
      require(rho != nullptr, "trace_match needs a target operator");
      const int n = out.trace_map.out_side;
      OutIndex idx(out.trace_map);
      for (const auto& e : herm_elems(n)) {
        SdpConstraint c;
        c.parts.push_back({out.x_block, embed_entries(nx, adjoint_entries(out.trace_map, idx, elem_entries(e)))});
        c.rhs = elem_value(e, rho->matrix());
        p.add_constraint(std::move(c));
        out.marginal_basis.push_back(elem_dense(e, n));
      }
      break;
    }
    case MarginalConstraint::identity_marginal: {
      // tr_B(Lambda) = I_A, i.e. <G (x) I_sym, X> = tr G for a basis of H_A
      const int dA = a.first_side;
      const int rest = nx / dA;
      for (const auto& e : herm_elems(dA)) {
        std::vector<Entry> full;
        for (const auto& [r, c, v] : elem_entries(e))
          for (int s = 0; s < rest; ++s) full.emplace_back(r * rest + s, c * rest + s, v);
        SdpConstraint c;
        c.parts.push_back({out.x_block, embed_entries(nx, full)});
        c.rhs = e.kind == 0 ? 1.0 : 0.0;
        p.add_constraint(std::move(c));
        out.marginal_basis.push_back(elem_dense(e, dA));
      }
      break;
    }
    case MarginalConstraint::unit_trace: {
      std::vector<Entry> full;
      for (int s = 0; s < nx; ++s) full.emplace_back(s, s, 1.0);
      SdpConstraint c;
      c.parts.push_back({out.x_block, embed_entries(nx, full)});
      c.rhs = 1.0;
      p.add_constraint(std::move(c));
      out.marginal_basis.push_back(Matrix::Identity(1, 1));
      break;
    }
  }
  out.marginal_count = static_cast<int>(p.constraints.size());

  // Y_k = ppt_map_k(X): <B, Y_k> - <ppt_map_k^dagger(B), X> = 0 for every basis element B.
  for (std::size_t k = 0; k < out.ppt_maps.size(); ++k) {
    const SuperOp& m = out.ppt_maps[k];
    OutIndex idx(m);
    for (const auto& e : herm_elems(m.out_side)) {
      const auto be = elem_entries(e);
      auto adj = adjoint_entries(m, idx, be);
      for (auto& [r, c, v] : adj) v = -v;
      SdpConstraint c;
      c.parts.push_back({out.y_blocks[k], embed_entries(m.out_side, be)});
      c.parts.push_back({out.x_block, embed_entries(nx, adj)});
      c.rhs = 0.0;
      p.add_constraint(std::move(c));
    }
  }

  if (objective) {
    p.sense = Sense::maximize;
    p.objective.clear();
    for (int n : p.block_sizes) p.objective.push_back(RealMatrix::Zero(n, n));
    const Matrix q = out.trace_map.adjoint(objective->matrix());
    p.objective[out.x_block] = 0.5 * embed_complex(Matrix(0.5 * (q + q.adjoint())));
  } else {
    p.sense = Sense::feasibility;
  }
  return out;
}

void check_bipartite(const HermitianOperator& x, const char* what) {
  require(x.num_factors() == 2, std::string(what) + " must be bipartite (two factors)");
}

std::vector<SuperOp> ppt_maps_for(int dA, int dB, int N, bool ppt, bool all_cuts) {
  std::vector<SuperOp> maps;
  if (!ppt || N / 2 < 1) return maps;
  if (all_cuts) {
    for (int j = 1; j <= N / 2; ++j) maps.push_back(tensor(identity_superop(dA), ppt_split_map(dB, N, j)));
  } else {
    maps.push_back(tensor(identity_superop(dA), ppt_split_map(dB, N, N / 2)));
  }
  return maps;
}

}  // namespace

ExtensionSdp build_bse_sdp(const ExtensionQuery& q, const ExtensionOptions& opts) {
  require(q.N >= 1, "extension size N must be >= 1");
  const HermitianOperator* target = nullptr;
  const HermitianOperator* objective = nullptr;
  Dims dims;
  if (q.mode == QueryMode::membership) {
    check_bipartite(q.rho, "membership target");
    require(q.reduced_constraint == MarginalConstraint::trace_match, "membership queries use trace_match");
    target = &q.rho;
    dims = q.rho.dims();
  } else {
    require(q.objective.has_value(), "cone_optimize needs an objective");
    require(q.reduced_constraint != MarginalConstraint::trace_match, "cone_optimize uses a marginal constraint");
    check_bipartite(*q.objective, "cone objective");
    objective = &*q.objective;
    dims = q.objective->dims();
  }
  const int dA = dims[0], dB = dims[1];
  check_budget(dA, dB, q.N, opts.budget_dim);
  const SuperOp tm = tensor(identity_superop(dA), reduce_map(dB, q.N, 1));
  Assembly a{&tm, ppt_maps_for(dA, dB, q.N, q.ppt, q.all_cuts), static_cast<int>(dA * sym_dim(dB, q.N)), dims, dA};
  return assemble(std::move(a), q.reduced_constraint, target, objective);
}

ExtensionSdp build_tripartite_sdp(const HermitianOperator& rho, int N, bool ppt, const ExtensionOptions& opts) {
  require(rho.num_factors() == 3, "tripartite extension needs a three-factor operator");
  require(N >= 1, "extension size N must be >= 1");
  const int d1 = rho.dims()[0], d2 = rho.dims()[1], d3 = rho.dims()[2];
  const auto side = static_cast<std::int64_t>(d1) * sym_dim(d2, N) * sym_dim(d3, N);
  if (side > opts.budget_dim)
    fail(ErrorCode::budget_exceeded, "tripartite extension side " + std::to_string(side) + " exceeds the budget " +
                                         std::to_string(opts.budget_dim));
  const SuperOp tm = tensor(tensor(identity_superop(d1), reduce_map(d2, N, 1)), reduce_map(d3, N, 1));
  std::vector<SuperOp> maps;
  if (ppt && N / 2 >= 1)
    maps.push_back(tensor(tensor(identity_superop(d1), ppt_split_map(d2, N, N / 2)), ppt_split_map(d3, N, N / 2)));
  Assembly a{&tm, std::move(maps), static_cast<int>(side), rho.dims(), d1};
  return assemble(std::move(a), MarginalConstraint::trace_match, &rho, nullptr);
}

namespace {

MembershipResult decode_membership(const ExtensionSdp& sdp, const HermitianOperator& rho, const SdpSolution& sol) {
  MembershipResult res;
  res.solver_status = sol.status;
  res.residuals = sol.residuals;
  res.iterations = sol.iterations;
  if (sol.status == SolveStatus::optimal) {
    res.verdict = Verdict::feasible;
    Matrix x = unembed(sol.primal_blocks[sdp.x_block]);
    res.extension = Matrix(0.5 * (x + x.adjoint()));
    return res;
  }
  if (sol.status != SolveStatus::primal_infeasible || !sol.certificate_y) return res;

  const RealVector& y = *sol.certificate_y;
  const int n = sdp.trace_map.out_side;
  // W0 = -sum_k y_k B_k over the marginal constraints; tr(W0 rho) = -b^T y = -1.
  Matrix w0 = Matrix::Zero(n, n);
  for (int k = 0; k < sdp.marginal_count; ++k) w0 -= y(k) * sdp.marginal_basis[k];
  // Dual slacks in complex form; their negative parts bound how far W0 is from
  // being nonnegative on the cone.
  Matrix sx = sdp.trace_map.adjoint(w0);
  double shift = 0.0;
  int row = sdp.marginal_count;
  for (const auto& m : sdp.ppt_maps) {
    const auto elems = herm_elems(m.out_side);
    Matrix z = Matrix::Zero(m.out_side, m.out_side);
    for (const auto& e : elems) {
      const double yk = y(row++);
      if (yk != 0.0) z += yk * elem_dense(e, m.out_side);
    }
    sx += m.adjoint(z);
    shift += std::max(0.0, -min_eigenvalue(Matrix(-0.5 * (z + z.adjoint()))));
  }
  shift += std::max(0.0, -min_eigenvalue(Matrix(0.5 * (sx + sx.adjoint()))));
  Matrix w = w0 + shift * Matrix::Identity(n, n);
  w = 0.5 * (w + w.adjoint());
  HermitianOperator W = make_hermitian_unchecked(rho.dims(), w);
  const double opn = norm(W, NormKind::operator_norm);
  if (!(opn > 0)) return res;
  W = W * (1.0 / opn);
  res.witness_value = (W.matrix() * rho.matrix()).trace().real();
  if (res.witness_value < 0) {
    res.verdict = Verdict::infeasible;
    res.witness = std::move(W);
  }
  return res;
}

}  // namespace

MembershipResult check_membership(const ExtensionQuery& q, const ExtensionOptions& opts) {
  require(q.mode == QueryMode::membership, "check_membership needs a membership query");
  const auto sdp = build_bse_sdp(q, opts);
  const auto sol = solve(sdp.problem, opts.solver);
  return decode_membership(sdp, q.rho, sol);
}

MembershipResult check_tripartite_membership(const HermitianOperator& rho, int N, bool ppt,
                                             const ExtensionOptions& opts) {
  const auto sdp = build_tripartite_sdp(rho, N, ppt, opts);
  const auto sol = solve(sdp.problem, opts.solver);
  return decode_membership(sdp, rho, sol);
}

ConeResult optimize_over_cone(const ExtensionQuery& q, const ExtensionOptions& opts) {
  require(q.mode == QueryMode::cone_optimize, "optimize_over_cone needs a cone_optimize query");
  const auto sdp = build_bse_sdp(q, opts);
  const auto sol = solve(sdp.problem, opts.solver);
  ConeResult res;
  res.status = sol.status;
  res.residuals = sol.residuals;
  if (sol.primal_blocks.empty()) return res;
  Matrix x = unembed(sol.primal_blocks[sdp.x_block]);
  res.extension = 0.5 * (x + x.adjoint());
  res.optimizer = make_hermitian_unchecked(q.objective->dims(), sdp.trace_map.apply(res.extension));
  res.value = (q.objective->matrix() * res.optimizer.matrix()).trace().real();
  return res;
}

double verify_witness(const HermitianOperator& w, int N, bool ppt, const ExtensionOptions& opts) {
  auto q = ExtensionQuery::cone(w * -1.0, N, ppt, MarginalConstraint::unit_trace);
  const auto r = optimize_over_cone(q, opts);
  if (r.status != SolveStatus::optimal)
    fail(ErrorCode::solver_failure, std::string("witness verification SDP ended with status ") + to_string(r.status));
  return -r.value;
}

double extension_violation(const Matrix& x, const HermitianOperator& rho, int N, bool ppt, bool all_cuts) {
  check_bipartite(rho, "extension target");
  const int dA = rho.dims()[0], dB = rho.dims()[1];
  const auto maps = compressed_maps(dA, dB, N, false);
  require(x.rows() == maps.trace_map.in_side, "extension has the wrong side");
  Matrix diff = maps.trace_map.apply(x) - rho.matrix();
  double v = make_hermitian_unchecked(rho.dims(), diff).matrix().cwiseAbs().maxCoeff();
  v = std::max(v, -min_eigenvalue(Matrix(0.5 * (x + x.adjoint()))));
  for (const auto& m : ppt_maps_for(dA, dB, N, ppt, all_cuts)) {
    Matrix y = m.apply(x);
    v = std::max(v, -min_eigenvalue(Matrix(0.5 * (y + y.adjoint()))));
  }
  return v;
}

}  // namespace dpskit
