#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "dpskit/sdp.hpp"
#include "oracles.hpp"
#include "sdp_instances.hpp"

using namespace dpskit;

namespace {

SdpConstraint trace_row(int n, double rhs, double scale = 1.0) {
  SdpConstraint c;
  std::vector<SymEntry> e;
  for (int i = 0; i < n; ++i) e.push_back({i, i, scale});
  c.parts.push_back({0, e});
  c.rhs = rhs;
  return c;
}

}  // namespace

TEST(EmbedComplex, RealInputIsBlockDuplicate) {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = 1;
  h(0, 1) = h(1, 0) = 2;
  const RealMatrix e = embed_complex(h);
  EXPECT_EQ(e.rows(), 4);
  EXPECT_LT((e.topLeftCorner(2, 2) - h.real()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((e.bottomRightCorner(2, 2) - h.real()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(e.topRightCorner(2, 2).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EmbedComplex, PauliYSpectrum) {
  Matrix y = Matrix::Zero(2, 2);
  y(0, 1) = Complex(0, -1);
  y(1, 0) = Complex(0, 1);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(embed_complex(y));
  EXPECT_NEAR(es.eigenvalues()(0), -1, 1e-14);
  EXPECT_NEAR(es.eigenvalues()(1), -1, 1e-14);
  EXPECT_NEAR(es.eigenvalues()(2), 1, 1e-14);
  EXPECT_NEAR(es.eigenvalues()(3), 1, 1e-14);
}

TEST(EmbedComplex, SpectrumDoubledAndUnembedInverts) {
  const Matrix h = oracle::random_hermitian(5, 3);
  Eigen::SelfAdjointEigenSolver<Matrix> eh(h, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<RealMatrix> ee(embed_complex(h), Eigen::EigenvaluesOnly);
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(ee.eigenvalues()(2 * i), eh.eigenvalues()(i), 1e-10);
    EXPECT_NEAR(ee.eigenvalues()(2 * i + 1), eh.eigenvalues()(i), 1e-10);
  }
  EXPECT_LT(oracle::max_abs(unembed(embed_complex(h)) - h), 1e-15);
}

TEST(Solve, SmallestEigenvalueProgram) {
  SdpProblem p;
  p.add_block(2);
  p.add_constraint(trace_row(2, 1.0));
  RealMatrix c = RealMatrix::Zero(2, 2);
  c(0, 0) = 1;
  c(1, 1) = 2;
  p.objective = {c};
  p.sense = Sense::minimize;
  const auto s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::optimal);
  EXPECT_NEAR(s.objective_value, 1.0, 1e-7);
  EXPECT_NEAR(s.primal_blocks[0](0, 0), 1.0, 1e-6);
  EXPECT_NEAR(s.primal_blocks[0](1, 1), 0.0, 1e-6);
}

TEST(Solve, MaximizeFlipsSense) {
  SdpProblem p;
  p.add_block(2);
  p.add_constraint(trace_row(2, 1.0));
  RealMatrix c = RealMatrix::Zero(2, 2);
  c(0, 0) = 1;
  c(1, 1) = 2;
  p.objective = {c};
  p.sense = Sense::maximize;
  const auto s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::optimal);
  EXPECT_NEAR(s.objective_value, 2.0, 1e-7);
}

TEST(Solve, ContradictoryEqualitiesGiveCertificate) {
  SdpProblem p;
  p.add_block(3);
  p.add_constraint(trace_row(3, 1.0));
  p.add_constraint(trace_row(3, 2.0));
  const auto s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::primal_infeasible);
  ASSERT_TRUE(s.certificate_y.has_value());
  EXPECT_LT(instances::farkas_violation(p, *s.certificate_y), 1e-7);
}

TEST(Solve, InconsistentZeroRow) {
  SdpProblem p;
  p.add_block(2);
  p.add_constraint(trace_row(2, 1.0));
  SdpConstraint zero;
  zero.rhs = 1.0;
  p.add_constraint(zero);
  EXPECT_EQ(solve(p).status, SolveStatus::primal_infeasible);
}

TEST(Solve, DependentRowsArePruned) {
  SdpProblem p;
  p.add_block(2);
  p.add_constraint(trace_row(2, 1.0));
  p.add_constraint(trace_row(2, 3.0, 3.0));
  const auto s = solve(p);
  EXPECT_EQ(s.status, SolveStatus::optimal);
  EXPECT_EQ(s.pruned_constraints, 1);
}

TEST(Solve, NegativeTraceIsInfeasible) {
  SdpProblem p;
  p.add_block(4);
  p.add_constraint(trace_row(4, -1.0));
  const auto s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::primal_infeasible);
  EXPECT_LT(instances::farkas_violation(p, *s.certificate_y), 1e-7);
}

TEST(Solve, UnboundedIsDualInfeasible) {
  // min -X_00 s.t. X_11 = 1: X_00 can grow without bound.
  SdpProblem p;
  p.add_block(2);
  SdpConstraint c;
  c.parts.push_back({0, {{1, 1, 1.0}}});
  c.rhs = 1;
  p.add_constraint(c);
  RealMatrix obj = RealMatrix::Zero(2, 2);
  obj(0, 0) = -1;
  p.objective = {obj};
  p.sense = Sense::minimize;
  const auto s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::dual_infeasible);
  ASSERT_TRUE(s.certificate.has_value());
  const RealMatrix& ray = (*s.certificate)[0];
  EXPECT_LT(ray(0, 0) * obj(0, 0), 0.0);
  EXPECT_NEAR(ray(1, 1), 0.0, 1e-7);
}

TEST(Solve, ConstructedOptimaMultiBlock) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto inst = instances::constructed_optimum({6, 3, 4}, 12, seed);
    const auto s = solve(inst.problem);
    ASSERT_EQ(s.status, SolveStatus::optimal) << "seed " << seed;
    EXPECT_NEAR(s.objective_value, inst.optimum, 1e-6 * (1 + std::abs(inst.optimum))) << "seed " << seed;
    EXPECT_LE(s.residuals.primal, 1e-8);
    EXPECT_LE(s.residuals.dual, 1e-8);
    // Weak duality within residuals.
    EXPECT_GE(s.objective_value - s.dual_value, -1e-6 * (1 + std::abs(inst.optimum)));
  }
}

TEST(Solve, Deterministic) {
  const auto inst = instances::constructed_optimum({6}, 8, 99);
  const auto a = solve(inst.problem), b = solve(inst.problem);
  EXPECT_NEAR(a.objective_value, b.objective_value, 1e-9);
}

TEST(Solve, FeasibleAnswerIsPsdAndSatisfiesEqualities) {
  const auto inst = instances::constructed_optimum({5, 5}, 6, 7);
  SdpProblem p = inst.problem;
  p.sense = Sense::feasibility;
  p.objective.clear();
  const auto s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::optimal);
  const RealVector ax = apply_constraints(p, s.primal_blocks);
  for (std::size_t i = 0; i < p.constraints.size(); ++i)
    EXPECT_NEAR(ax(i), p.constraints[i].rhs, 1e-8 * (1 + std::abs(p.constraints[i].rhs)));
  for (const auto& b : s.primal_blocks) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(b, Eigen::EigenvaluesOnly);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
  }
}

TEST(Solve, ConstructedInfeasibleCertificates) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = instances::constructed_infeasible({5, 3}, 6, seed);
    const auto s = solve(p);
    ASSERT_EQ(s.status, SolveStatus::primal_infeasible) << "seed " << seed;
    EXPECT_LT(instances::farkas_violation(p, *s.certificate_y), 1e-7) << "seed " << seed;
  }
}

TEST(Solve, MaxIterReturnsBestIterate) {
  const auto inst = instances::constructed_optimum({8}, 10, 3);
  SolverOptions o;
  o.max_iter = 2;
  const auto s = solve(inst.problem, o);
  EXPECT_EQ(s.status, SolveStatus::max_iter);
  EXPECT_FALSE(s.primal_blocks.empty());
}

TEST(Solve, WritesIterationLog) {
  const std::string path = testing::TempDir() + "dpskit_solver_log.csv";
  SolverOptions o;
  o.log_path = path;
  solve(instances::constructed_optimum({4}, 3, 5).problem, o);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "iter,mu,primal_res,dual_res,gap,tau,kappa,alpha");
  std::string row;
  EXPECT_TRUE(static_cast<bool>(std::getline(in, row)));
  std::remove(path.c_str());
}

TEST(SdpProblem, ValidateRejectsOutOfRangeEntries) {
  SdpProblem p;
  p.add_block(2);
  SdpConstraint c;
  c.parts.push_back({0, {{0, 2, 1.0}}});
  p.add_constraint(c);
  EXPECT_THROW(p.validate(), Error);
}
