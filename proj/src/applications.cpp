#include "dpskit/applications.hpp"

#include <cmath>
#include <numbers>

#include "dpskit/bounds.hpp"

namespace dpskit {

int EstimationProblem::dim_A() const {
  require(!ensemble.empty(), "estimation problem has no entries");
  return ensemble.front().encoded.side();
}

int EstimationProblem::dim_B() const {
  require(!ensemble.empty(), "estimation problem has no entries");
  return static_cast<int>(ensemble.front().source.size());
}

void EstimationProblem::validate() const {
  const int dA = dim_A(), dB = dim_B();
  double total = 0;
  for (const auto& e : ensemble) {
    require(e.p >= 0, "ensemble probabilities must be nonnegative");
    require(e.encoded.side() == dA, "encoded states must share one dimension");
    require(e.source.size() == dB, "source states must share one dimension");
    require(std::abs(e.source.squaredNorm() - 1.0) <= 1e-10, "source states must be unit vectors");
    total += e.p;
  }
  require(std::abs(total - 1.0) <= 1e-10, "ensemble probabilities must sum to 1");
}

HermitianOperator estimation_operator(const EstimationProblem& p) {
  p.validate();
  const int dA = p.dim_A(), dB = p.dim_B();
  Matrix acc = Matrix::Zero(dA * dB, dA * dB);
  for (const auto& e : p.ensemble) {
    acc += e.p * kron(e.encoded, HermitianOperator::projector({dB}, e.source)).matrix();
  }
  return make_hermitian_unchecked({dA, dB}, std::move(acc));
}

double sym_lower_bound(double upper, int d, int N, double c) {
  return (N * upper + c) / (N + d);
}

double ppt_lower_bound(double upper, int d, int N, double c) {
  const double q = g_N(d, N) / (2.0 * (d - 1));
  return (1.0 - d * q) * upper + c * q;
}

namespace {

BoundPair cone_bounds(const HermitianOperator& objective, MarginalConstraint mc, int N, bool ppt, double c,
                      const ExtensionOptions& opts) {
  const auto r = optimize_over_cone(ExtensionQuery::cone(objective, N, ppt, mc), opts);
  BoundPair out;
  out.N = N;
  out.ppt = ppt;
  out.status = r.status;
  out.upper = r.value;
  const int d = objective.dims()[1];
  out.lower = ppt ? ppt_lower_bound(r.value, d, N, c) : sym_lower_bound(r.value, d, N, c);
  return out;
}

}  // namespace

BoundPair fidelity_bounds(const EstimationProblem& p, int N, bool ppt, const ExtensionOptions& opts) {
  return cone_bounds(estimation_operator(p), MarginalConstraint::identity_marginal, N, ppt, 1.0, opts);
}

HermitianOperator depolarize_channel(const HermitianOperator& rho, double eps) {
  require(eps >= 0 && eps <= 1, "depolarizing parameter must lie in [0,1]");
  const int d = rho.side();
  return rho * (1.0 - eps) + HermitianOperator::identity(rho.dims()) * (eps * rho.trace() / d);
}

EstimationProblem bb84_two_copy_problem(double eps) {
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<Vector> states = {
      (Vector(2) << 1, 0).finished(),
      (Vector(2) << 0, 1).finished(),
      (Vector(2) << s, s).finished(),
      (Vector(2) << s, -s).finished(),
  };
  EstimationProblem p;
  for (const auto& v : states) {
    const auto one = depolarize_channel(HermitianOperator::projector({2}, v), eps);
    p.ensemble.push_back({0.25, kron(one, one).with_dims({4}), v});
  }
  return p;
}

EstimationProblem qutrit_grid_problem(double eps) {
  EstimationProblem p;
  const double step = std::numbers::pi / 6.0;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      Vector v(3);
      v << std::cos(j * step), std::sin(j * step) * std::cos(i * step), std::sin(j * step) * std::sin(i * step);
      p.ensemble.push_back({1.0 / 36.0, depolarize_channel(HermitianOperator::projector({3}, v), eps), v});
    }
  }
  return p;
}

HermitianOperator choi_identity(int d) {
  require(d >= 1, "dimension must be positive");
  Vector phi = Vector::Zero(d * d);
  for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0;
  return HermitianOperator::projector({d, d}, phi);
}

HermitianOperator choi_depolarizing(int d, double p) {
  require(p >= 0 && p <= 1, "depolarizing parameter must lie in [0,1]");
  return choi_identity(d) * (1.0 - p) + HermitianOperator::identity({d, d}) * (p / d);
}

HermitianOperator apply_channel(const HermitianOperator& choi, const HermitianOperator& rho) {
  require(choi.num_factors() == 2 && choi.dims()[0] == rho.side(), "input does not match the Choi operator");
  const int dB = choi.dims()[1];
  const auto rho_t = make_hermitian_unchecked({rho.side()}, rho.matrix().transpose());
  const Matrix lifted = kron(rho_t, HermitianOperator::identity({dB})).matrix();
  Matrix out = partial_trace(Matrix(choi.matrix() * lifted), choi.dims(), {0});
  return make_hermitian_unchecked({dB}, std::move(out));
}

BoundPair output_purity_bounds(const HermitianOperator& choi, int N, bool ppt, const ExtensionOptions& opts) {
  require(choi.num_factors() == 2, "Choi operator must be bipartite");
  const int dA = choi.dims()[0];
  const auto marginal = partial_trace(choi, {1});
  const double dev = (marginal.matrix() - Matrix::Identity(dA, dA)).cwiseAbs().maxCoeff();
  require(dev <= 1e-8, "Choi operator must satisfy tr_B(Omega) = I_A");
  return cone_bounds(choi, MarginalConstraint::unit_trace, N, ppt, 1.0, opts);
}

Vector ghz_state() {
  Vector v = Vector::Zero(8);
  v(0) = v(7) = 1.0 / std::sqrt(2.0);
  return v;
}

Vector w_state() {
  Vector v = Vector::Zero(8);
  v(1) = v(2) = v(4) = 1.0 / std::sqrt(3.0);
  return v;
}

Vector product_state_000() {
  Vector v = Vector::Zero(8);
  v(0) = 1.0;
  return v;
}

BoundPair geometric_entanglement_bounds(const Vector& psi, const Dims& dims, int N, bool ppt,
                                        const ExtensionOptions& opts) {
  require(dims.size() == 3, "geometric entanglement needs a tripartite state");
  require(psi.size() == product(dims), "state size does not match dims");
  require(std::abs(psi.squaredNorm() - 1.0) <= 1e-10, "state must be normalized");
  const auto full = HermitianOperator::projector(dims, psi);
  const auto rho_ab = partial_trace(full, {2});
  const double lambda_a = min_eigenvalue(partial_trace(full, {1, 2}));
  return cone_bounds(rho_ab, MarginalConstraint::unit_trace, N, ppt, std::max(lambda_a, 0.0), opts);
}

}  // namespace dpskit
