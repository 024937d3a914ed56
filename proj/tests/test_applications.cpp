#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dpskit/applications.hpp"
#include "dpskit/bounds.hpp"
#include "oracles.hpp"

using namespace dpskit;

namespace {

// Choi operator of rho -> sum_m K_m rho K_m^dagger for a random isometry d -> d*k.
HermitianOperator random_channel_choi(int d, int k, std::uint64_t seed, std::vector<Matrix>& kraus) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  Matrix z(d * k, d);
  for (int r = 0; r < d * k; ++r)
    for (int c = 0; c < d; ++c) z(r, c) = Complex(g(gen), g(gen));
  Eigen::HouseholderQR<Matrix> qr(z);
  const Matrix v = qr.householderQ() * Matrix::Identity(d * k, d);
  kraus.clear();
  for (int m = 0; m < k; ++m) kraus.push_back(v.block(m * d, 0, d, d));
  Matrix choi = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Matrix eij = Matrix::Zero(d, d);
      eij(i, j) = 1;
      Matrix out = Matrix::Zero(d, d);
      for (const auto& km : kraus) out += km * eij * km.adjoint();
      choi.block(i * d, j * d, d, d) = out;
    }
  return make_hermitian_unchecked({d, d}, choi);
}

EstimationProblem single_state(const Vector& psi) {
  EstimationProblem p;
  p.ensemble.push_back({1.0, HermitianOperator::projector({static_cast<int>(psi.size())}, psi), psi});
  return p;
}

}  // namespace

TEST(Estimation, OperatorIsWeightedSum) {
  const Vector a = (Vector(2) << 1, 0).finished(), b = (Vector(2) << 0, 1).finished();
  EstimationProblem p;
  p.ensemble.push_back({0.3, HermitianOperator::projector({2}, a), a});
  p.ensemble.push_back({0.7, HermitianOperator::identity({2}) * 0.5, b});
  const auto op = estimation_operator(p);
  EXPECT_EQ(op.dims(), (Dims{2, 2}));
  std::vector<double> diag = {0.3, 0, 0, 0};
  Matrix expect = HermitianOperator::diagonal({2, 2}, diag).matrix();
  expect(1, 1) += 0.35;
  expect(3, 3) += 0.35;
  EXPECT_LT(oracle::max_abs(op.matrix() - expect), 1e-15);
}

TEST(Estimation, ValidateRejectsBadEnsembles) {
  EstimationProblem p;
  p.ensemble.push_back({0.5, HermitianOperator::identity({2}) * 0.5, (Vector(2) << 1, 0).finished()});
  EXPECT_THROW(p.validate(), Error);
  p.ensemble[0].p = 1.0;
  p.ensemble[0].source = (Vector(2) << 1, 1).finished();
  EXPECT_THROW(p.validate(), Error);
}

TEST(Estimation, Bb84Shape) {
  const auto p = bb84_two_copy_problem(0.3);
  ASSERT_EQ(p.ensemble.size(), 4u);
  EXPECT_EQ(p.dim_A(), 4);
  EXPECT_EQ(p.dim_B(), 2);
  const auto op = estimation_operator(p);
  EXPECT_NEAR(op.trace(), 1.0, 1e-14);
  int rank = 0;
  for (double e : eigenvalues(op)) rank += e > 1e-12;
  EXPECT_LE(rank, 8);
  // Encoded copies are the clean state depolarized on each copy.
  const auto one = depolarize_channel(HermitianOperator::projector({2}, p.ensemble[2].source), 0.3);
  EXPECT_LT(oracle::max_abs(p.ensemble[2].encoded.matrix() - kron(one, one).matrix()), 1e-15);
}

TEST(Estimation, QutritGrid) {
  const auto p = qutrit_grid_problem(0.2);
  ASSERT_EQ(p.ensemble.size(), 36u);
  double total = 0;
  for (const auto& e : p.ensemble) {
    total += e.p;
    EXPECT_NEAR(e.source.norm(), 1.0, 1e-14);
    EXPECT_NEAR(e.encoded.trace(), 1.0, 1e-14);
  }
  EXPECT_NEAR(total, 1.0, 1e-14);
  // The zero polar angle gives |0> for every azimuth.
  for (int i = 0; i < 6; ++i) EXPECT_LT(oracle::max_abs(p.ensemble[6 * i].source - Vector::Unit(3, 0)), 1e-15);
}

TEST(Fidelity, SingleStateIsPerfect) {
  const auto r = fidelity_bounds(single_state(Vector::Unit(2, 0)), 2, false);
  ASSERT_EQ(r.status, SolveStatus::optimal);
  EXPECT_NEAR(r.upper, 1.0, 1e-7);
  EXPECT_NEAR(r.lower, 0.75, 1e-7);
}

TEST(Fidelity, LowerBoundFormulas) {
  EXPECT_DOUBLE_EQ(sym_lower_bound(0.8, 2, 3), (3 * 0.8 + 1) / 5);
  const double q = g_N(3, 4) / 4;
  EXPECT_NEAR(ppt_lower_bound(0.8, 3, 4, 0.5), (1 - 3 * q) * 0.8 + 0.5 * q, 1e-15);
}

TEST(Fidelity, Bb84SequencesMonotone) {
  const auto p = bb84_two_copy_problem(0.3);
  double prev_sym = 2, prev_ppt = 2;
  for (int N = 1; N <= 3; ++N) {
    const auto s = fidelity_bounds(p, N, false);
    ASSERT_EQ(s.status, SolveStatus::optimal);
    EXPECT_LE(s.upper, prev_sym + 1e-7);
    EXPECT_LE(s.lower, s.upper + 1e-9);
    prev_sym = s.upper;
    if (N >= 2) {
      const auto t = fidelity_bounds(p, N, true);
      ASSERT_EQ(t.status, SolveStatus::optimal);
      EXPECT_LE(t.upper, s.upper + 1e-7);
      EXPECT_LE(t.upper, prev_ppt + 1e-7);
      EXPECT_LE(t.lower, t.upper + 1e-9);
      prev_ppt = t.upper;
    }
  }
}

TEST(Fidelity, EnsembleOrderIrrelevant) {
  auto p = bb84_two_copy_problem(0.25);
  const double a = fidelity_bounds(p, 2, true).upper;
  std::reverse(p.ensemble.begin(), p.ensemble.end());
  EXPECT_NEAR(fidelity_bounds(p, 2, true).upper, a, 1e-7);
}

TEST(Channel, ChoiConventions) {
  const auto rho = random_state({2}, 2, 4);
  EXPECT_LT(oracle::max_abs(apply_channel(choi_identity(2), rho).matrix() - rho.matrix()), 1e-14);
  const auto dep = apply_channel(choi_depolarizing(2, 0.3), rho);
  EXPECT_LT(oracle::max_abs(dep.matrix() - (0.7 * rho.matrix() + 0.15 * Matrix::Identity(2, 2))), 1e-14);
  std::vector<Matrix> kraus;
  const auto choi = random_channel_choi(3, 2, 9, kraus);
  const auto in = random_state({3}, 3, 5);
  Matrix expect = Matrix::Zero(3, 3);
  for (const auto& k : kraus) expect += k * in.matrix() * k.adjoint();
  EXPECT_LT(oracle::max_abs(apply_channel(choi, in).matrix() - expect), 1e-13);
}

TEST(Purity, DepolarizingAndIdentity) {
  for (double p : {0.2, 0.5}) {
    const auto r = output_purity_bounds(choi_depolarizing(2, p), 2, true);
    ASSERT_EQ(r.status, SolveStatus::optimal);
    EXPECT_NEAR(r.upper, 1 - p / 2, 1e-6);
  }
  EXPECT_NEAR(output_purity_bounds(choi_identity(2), 2, true).upper, 1.0, 1e-6);
}

TEST(Purity, RejectsNonTracePreserving) {
  EXPECT_THROW(output_purity_bounds(choi_identity(2) * 0.5, 2, true), Error);
}

TEST(Purity, SandwichesBruteForceOnRandomChannels) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    std::vector<Matrix> kraus;
    const auto choi = random_channel_choi(2, 2, seed, kraus);
    const double truth = oracle::max_product_overlap(choi.matrix(), 2, 2, seed);
    for (bool ppt : {false, true}) {
      const auto r = output_purity_bounds(choi, 2, ppt);
      ASSERT_EQ(r.status, SolveStatus::optimal);
      EXPECT_GE(r.upper, truth - 1e-6) << seed;
      EXPECT_LE(r.lower, truth + 1e-6) << seed;
    }
  }
}

TEST(Geometric, NamedStates) {
  const Dims q3 = {2, 2, 2};
  EXPECT_NEAR(geometric_entanglement_bounds(ghz_state(), q3, 2, true).upper, 0.5, 1e-6);
  EXPECT_NEAR(geometric_entanglement_bounds(w_state(), q3, 2, true).upper, 4.0 / 9.0, 1e-6);
  EXPECT_NEAR(geometric_entanglement_bounds(product_state_000(), q3, 2, true).upper, 1.0, 1e-6);
}

TEST(Geometric, BruteForceOracleAgrees) {
  const Dims q3 = {2, 2, 2};
  for (const Vector& psi : {ghz_state(), w_state()}) {
    const auto rho_ab = partial_trace(HermitianOperator::projector(q3, psi), {2});
    const double truth = oracle::max_product_overlap(rho_ab.matrix(), 2, 2, 17);
    const auto r = geometric_entanglement_bounds(psi, q3, 2, true);
    EXPECT_NEAR(r.upper, truth, 1e-6);
    EXPECT_LE(r.lower, truth + 1e-9);
  }
  EXPECT_NEAR(oracle::max_product_overlap(partial_trace(HermitianOperator::projector(q3, w_state()), {2}).matrix(), 2, 2, 3),
              4.0 / 9.0, 1e-9);
}

TEST(Geometric, RandomStatesSandwiched) {
  const Dims q3 = {2, 2, 2};
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Vector psi = random_unit_vector(8, seed);
    const auto rho_ab = partial_trace(HermitianOperator::projector(q3, psi), {2});
    const double truth = oracle::max_product_overlap(rho_ab.matrix(), 2, 2, seed);
    for (int N : {1, 2, 3}) {
      const auto r = geometric_entanglement_bounds(psi, q3, N, false);
      EXPECT_GE(r.upper, truth - 1e-6) << seed << " " << N;
      EXPECT_LE(r.lower, truth + 1e-6) << seed << " " << N;
    }
  }
}

TEST(Geometric, RejectsBadInput) {
  EXPECT_THROW(geometric_entanglement_bounds(Vector::Unit(4, 0), {2, 2}, 2, true), Error);
  EXPECT_THROW(geometric_entanglement_bounds(2.0 * ghz_state(), {2, 2, 2}, 2, true), Error);
}
