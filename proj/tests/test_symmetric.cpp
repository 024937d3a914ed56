#include <gtest/gtest.h>

#include <cmath>

#include "dpskit/bounds.hpp"
#include "dpskit/symmetric.hpp"
#include "oracles.hpp"

using namespace dpskit;

TEST(SymDim, Binomials) {
  EXPECT_EQ(sym_dim(2, 1), 2);
  EXPECT_EQ(sym_dim(2, 6), 7);
  EXPECT_EQ(sym_dim(3, 4), 15);
  EXPECT_EQ(sym_dim(4, 0), 1);
}

TEST(Multinomial, SmallCases) {
  EXPECT_DOUBLE_EQ(multinomial({2, 1}), 3.0);
  EXPECT_DOUBLE_EQ(multinomial({1, 1, 1}), 6.0);
  EXPECT_DOUBLE_EQ(multinomial({4, 0}), 1.0);
  // sqrt(mult(1,0) mult(0,1) / mult(1,1)) = sqrt(1/2)
  EXPECT_NEAR(split_coefficient({1, 0}, {0, 1}), std::sqrt(0.5), 1e-15);
}

TEST(SymmetricIndex, ReverseLexicographicOrder) {
  SymmetricIndex idx(3, 2);
  ASSERT_EQ(idx.size(), 6);
  const std::vector<Occupation> expect = {{2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(idx[i], expect[i]);
    EXPECT_EQ(idx.find(expect[i]), i);
  }
  EXPECT_EQ(idx.find({3, 0, 0}), -1);
}

TEST(BuildBasis, QubitPairColumns) {
  const auto b = build_basis(2, 2);
  ASSERT_EQ(b.size(), 3);
  RealMatrix expect = RealMatrix::Zero(4, 3);
  expect(0, 0) = 1;
  expect(1, 1) = expect(2, 1) = 1 / std::sqrt(2.0);
  expect(3, 2) = 1;
  EXPECT_LT((b.isometry - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BuildBasis, OrthonormalAndRank) {
  const auto b23 = build_basis(2, 3);
  EXPECT_LT((b23.isometry.transpose() * b23.isometry - RealMatrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
  const auto b32 = build_basis(3, 2);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(b32.projector());
  int rank = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) rank += es.eigenvalues()(i) > 0.5;
  EXPECT_EQ(rank, 6);
}

TEST(BuildBasis, ProjectorMatchesPermutationAverage) {
  for (int d = 2; d <= 3; ++d)
    for (int N = 1; N <= 4; ++N) {
      if (std::pow(d, N) > 81) continue;
      const auto b = build_basis(d, N);
      EXPECT_LT((b.projector() - oracle::permutation_projector(d, N)).cwiseAbs().maxCoeff(), 1e-10)
          << "d=" << d << " N=" << N;
    }
}

TEST(BuildBasis, BudgetExceeded) {
  try {
    build_basis(4, 7, 4096);
    FAIL() << "expected budget_exceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::budget_exceeded);
  }
}

TEST(Lift, IdentityRankAndRoundTrip) {
  const auto b = build_basis(2, 3);
  const int dA = 2, side = dA * b.size();
  const auto id = lift(Matrix::Identity(side, side), b, dA);
  EXPECT_EQ(id.dims(), (Dims{2, 2, 2, 2}));
  const Matrix expect = kron(HermitianOperator::identity({2}), make_hermitian_unchecked({8}, b.projector().cast<Complex>()))
                            .matrix();
  EXPECT_LT(oracle::max_abs(id.matrix() - expect), 1e-12);

  const Matrix x = oracle::random_psd(side, 3, 8);
  const auto lx = lift(x, b, dA);
  Eigen::SelfAdjointEigenSolver<Matrix> es(lx.matrix());
  int rank = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) rank += es.eigenvalues()(i) > 1e-9;
  EXPECT_EQ(rank, 3);
  EXPECT_GT(oracle::min_eig(lx.matrix()), -1e-10);
  EXPECT_LT(oracle::max_abs(compress(lx, b, dA) - x), 1e-12);
}

TEST(Lift, RejectsWrongSide) { EXPECT_THROW(lift(Matrix::Identity(5, 5), build_basis(2, 2), 2), Error); }

TEST(Dicke, KOneIsTripletState) {
  const auto s = dicke_overlap_state(1);
  Vector v = Vector::Zero(4);
  v(1) = v(2) = 1 / std::sqrt(2.0);
  EXPECT_LT(oracle::max_abs(s.matrix() - v * v.adjoint()), 1e-12);
}

TEST(Dicke, ReductionIsExampleState) {
  for (int K = 1; K <= 4; ++K) {
    const auto s = dicke_overlap_state(K);
    EXPECT_NEAR((s.matrix() * s.matrix()).trace().real(), 1.0, 1e-12);
    std::vector<int> traced;
    for (int f = 2; f < 2 * K; ++f) traced.push_back(f);
    const auto red = traced.empty() ? s : partial_trace(s, traced);
    EXPECT_LT(oracle::max_abs(red.matrix() - example_state(K).matrix()), 1e-12) << "K=" << K;
  }
}

TEST(Dicke, PermutationSymmetric) {
  const auto s = dicke_overlap_state(2);
  const RealMatrix p = oracle::permutation_projector(2, 4);
  EXPECT_LT(oracle::max_abs(p.cast<Complex>() * s.matrix() - s.matrix()), 1e-12);
}
