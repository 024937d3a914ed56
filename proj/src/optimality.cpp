#include "dpskit/optimality.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dpskit {

int numerical_rank(const Matrix& hermitian, double tol) {
  require(hermitian.rows() == hermitian.cols(), "rank needs a square matrix");
  if (hermitian.rows() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (hermitian + hermitian.adjoint())),
                                           Eigen::EigenvaluesOnly);
  const RealVector& ev = es.eigenvalues();
  const double cut = tol * std::max(ev.maxCoeff(), 1.0);
  return static_cast<int>((ev.array() > cut).count());
}

RankLoop rank_loop_check(const Matrix& extension, int dA, int dB, int N, int K, double tol) {
  require(K >= 1 && K < N, "rank loop needs 1 <= K < N");
  const auto side = dA * sym_dim(dB, N);
  require(extension.rows() == side && extension.cols() == side, "extension has the wrong side for dA, dB, N");
  RankLoop out;
  out.profile.K = K;
  out.profile.tol = tol;
  out.profile.rank_full = numerical_rank(extension, tol);
  out.profile.rank_left = numerical_rank(tensor(identity_superop(dA), reduce_map(dB, N, K)).apply(extension), tol);
  const Matrix b_only = tensor(trace_superop(dA), identity_superop(static_cast<int>(sym_dim(dB, N)))).apply(extension);
  out.profile.rank_right = numerical_rank(reduce_map(dB, N, N - K).apply(b_only), tol);
  out.loop = out.profile.rank_full <= std::max(out.profile.rank_left, out.profile.rank_right);
  return out;
}

RankLoop rank_loop_check(const Matrix& extension, int dA, const SymmetricBasis& basis, int K, double tol) {
  return rank_loop_check(extension, dA, basis.d, basis.N, K, tol);
}

namespace {

std::vector<SymEntry> dense_upper(const RealMatrix& m) {
  std::vector<SymEntry> out;
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r <= c; ++r)
      if (m(r, c) != 0.0) out.push_back({r, c, m(r, c)});
  return out;
}

double constraint_residual(const SdpProblem& p, const std::vector<RealMatrix>& x) {
  const RealVector ax = apply_constraints(p, x);
  double r = 0;
  for (std::size_t i = 0; i < p.constraints.size(); ++i) r = std::max(r, std::abs(ax(i) - p.constraints[i].rhs));
  for (const auto& b : x) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(b, Eigen::EigenvaluesOnly);
    r = std::max(r, -es.eigenvalues().minCoeff());
  }
  return r;
}

}  // namespace

RankMinResult rank_min_heuristic(const ExtensionQuery& q, std::optional<double> objective_floor,
                                 const RankMinOptions& rm, const ExtensionOptions& opts) {
  require(rm.rounds >= 1 && rm.eps > 0, "rank heuristic needs rounds >= 1 and eps > 0");
  require(!objective_floor || q.mode == QueryMode::cone_optimize, "an objective floor needs a cone query");
  ExtensionSdp sdp = build_bse_sdp(q, opts);
  SdpProblem& p = sdp.problem;
  if (objective_floor) {
    // <C_obj, X> - s = floor with a scalar slack block s >= 0
    const RealMatrix c_obj = p.objective[sdp.x_block];
    const int slack = p.add_block(1);
    SdpConstraint c;
    c.parts.push_back({sdp.x_block, dense_upper(c_obj)});
    c.parts.push_back({slack, {{0, 0, -1.0}}});
    c.rhs = *objective_floor;
    p.add_constraint(std::move(c));
  }
  p.sense = Sense::minimize;
  p.objective.assign(p.block_sizes.size(), RealMatrix());
  for (std::size_t b = 0; b < p.block_sizes.size(); ++b)
    p.objective[b] = RealMatrix::Zero(p.block_sizes[b], p.block_sizes[b]);

  const int n = sdp.x_side;
  Matrix weight = Matrix::Identity(n, n);
  RankMinResult best;
  best.rank = -1;
  for (int round = 0; round < rm.rounds; ++round) {
    const double scale = 1.0 / weight.cwiseAbs().maxCoeff();
    p.objective[sdp.x_block] = 0.5 * embed_complex(Matrix(scale * weight));
    const auto sol = solve(p, opts.solver);
    best.rounds_run = round + 1;
    if (sol.status != SolveStatus::optimal || constraint_residual(p, sol.primal_blocks) > rm.feas_tol) {
      if (round == 0)
        fail(ErrorCode::solver_failure, std::string("rank heuristic: feasibility solve ended with status ") +
                                            to_string(sol.status));
      break;
    }
    Matrix x = unembed(sol.primal_blocks[sdp.x_block]);
    x = 0.5 * (x + x.adjoint());
    const int r = numerical_rank(x, rm.rank_tol);
    best.rank_history.push_back(r);
    if (best.rank < 0 || r < best.rank) {
      best.rank = r;
      best.extension = x;
    }
    if (r <= 1) break;
    weight = (x + rm.eps * Matrix::Identity(n, n)).inverse();
    weight = 0.5 * (weight + weight.adjoint());
  }
  return best;
}

const char* to_string(CertifyVerdict v) {
  switch (v) {
    case CertifyVerdict::entangled: return "entangled";
    case CertifyVerdict::separable: return "separable";
    case CertifyVerdict::undecided: return "undecided";
  }
  return "unknown";
}

CertifyResult certify(const HermitianOperator& rho, int maxN, double delta, const ExtensionOptions& opts,
                      bool all_cuts) {
  require(rho.num_factors() == 2, "certify needs a bipartite state");
  require(maxN >= 2, "certify needs maxN >= 2");
  require(delta > 0, "delta must be positive");
  const int dA = rho.dims()[0], dB = rho.dims()[1];
  CertifyResult out;
  for (int N = 2; N <= maxN; ++N) {
    out.N = N;
    auto q = ExtensionQuery::membership(rho, N, true);
    q.all_cuts = all_cuts;
    const auto m = check_membership(q, opts);
    if (m.verdict == Verdict::infeasible) {
      out.verdict = CertifyVerdict::entangled;
      out.witness = m.witness;
      out.witness_value = m.witness_value;
      return out;
    }
    if (m.verdict != Verdict::feasible) continue;

    RankMinOptions rm;
    rm.eps = delta;
    const auto low = rank_min_heuristic(q, std::nullopt, rm, opts);
    // Cuts AB^K | B^{N-K} that carry a PPT constraint.
    std::vector<int> ks = {N - N / 2};
    if (all_cuts)
      for (int j = 1; j < N / 2; ++j) ks.push_back(N - j);
    for (int K : ks) {
      const auto loop = rank_loop_check(low.extension, dA, dB, N, K);
      if (loop.loop) {
        out.verdict = CertifyVerdict::separable;
        out.extension = low.extension;
        out.profile = loop.profile;
        return out;
      }
    }
  }
  out.N = maxN;
  return out;
}

}  // namespace dpskit
