#include <gtest/gtest.h>

#include <functional>

#include <json.hpp>

#include "dpskit/json_io.hpp"
#include "oracles.hpp"

using namespace dpskit;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

}  // namespace

TEST(OperatorJson, RoundTrip) {
  const auto rho = random_state({2, 3}, 2, 8);
  const auto back = operator_from_json(operator_to_json(rho));
  EXPECT_EQ(back.dims(), rho.dims());
  EXPECT_LT(oracle::max_abs(back.matrix() - rho.matrix()), 1e-15);
}

TEST(OperatorJson, ImaginaryPartOptional) {
  const auto x = operator_from_json(R"({"dims":[2],"re":[[1,0.5],[0.5,0]]})");
  EXPECT_EQ(x.dims(), (Dims{2}));
  EXPECT_DOUBLE_EQ(x(0, 1).real(), 0.5);
  EXPECT_DOUBLE_EQ(x(0, 1).imag(), 0.0);
}

TEST(OperatorJson, Errors) {
  EXPECT_EQ(code_of([] { operator_from_json("{\"dims\": [2, 2], \"re\": [[1"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { operator_from_json(R"({"dims":[3],"re":[[1,0],[0,1]]})"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { operator_from_json(R"({"dims":[2],"re":[[1,0],[0]]})"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { operator_from_json(R"({"dims":[2],"re":[[1,1],[0,1]]})"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { operator_from_json(R"({"re":[[1]]})"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { operator_from_json(R"({"dims":[0],"re":[]})"); }), ErrorCode::parse_error);
}

TEST(ProblemJson, RoundTrip) {
  const auto p = bb84_two_copy_problem(0.1);
  const auto back = problem_from_json(problem_to_json(p));
  ASSERT_EQ(back.ensemble.size(), p.ensemble.size());
  for (std::size_t i = 0; i < p.ensemble.size(); ++i) {
    EXPECT_DOUBLE_EQ(back.ensemble[i].p, p.ensemble[i].p);
    EXPECT_LT(oracle::max_abs(back.ensemble[i].encoded.matrix() - p.ensemble[i].encoded.matrix()), 1e-15);
    EXPECT_LT(oracle::max_abs(back.ensemble[i].source - p.ensemble[i].source), 1e-15);
  }
}

TEST(ProblemJson, RejectsInconsistentEnsemble) {
  const std::string bad = R"({"ensemble":[{"p":0.5,"encoded":{"dims":[1],"re":[[1]]},"source":{"re":[1,0]}}]})";
  EXPECT_THROW(problem_from_json(bad), Error);
}

TEST(CertifyJson, Fields) {
  CertifyResult r;
  r.verdict = CertifyVerdict::separable;
  r.N = 2;
  r.profile = RankProfile{1, 1, 1, 1, kRankTol};
  const auto j = nlohmann::json::parse(certify_to_json(r));
  EXPECT_EQ(j["verdict"], "separable");
  EXPECT_EQ(j["N"], 2);
  EXPECT_EQ(j["ranks"], nlohmann::json::array({1, 1, 1}));
  EXPECT_TRUE(j["witness"].is_null());

  CertifyResult e;
  e.verdict = CertifyVerdict::entangled;
  e.N = 2;
  e.witness = HermitianOperator::identity({2, 2});
  e.witness_value = -0.1;
  const auto k = nlohmann::json::parse(certify_to_json(e));
  EXPECT_EQ(k["verdict"], "entangled");
  EXPECT_TRUE(k["ranks"].empty());
  EXPECT_EQ(operator_from_json(k["witness"].dump()).dims(), (Dims{2, 2}));
}
