#pragma once

#include <optional>
#include <vector>

#include "dpskit/extension.hpp"
#include "dpskit/symmetric.hpp"

namespace dpskit {

inline constexpr double kRankTol = 1e-7;

/// Eigenvalues above tol * max(lambda_max, 1).
int numerical_rank(const Matrix& hermitian, double tol = kRankTol);
inline int numerical_rank(const HermitianOperator& x, double tol = kRankTol) {
  return numerical_rank(x.matrix(), tol);
}

struct RankProfile {
  int rank_full = 0;   // Lambda_{AB^N}
  int rank_left = 0;   // Lambda_{AB^K}
  int rank_right = 0;  // Lambda_{B^{N-K}}
  int K = 0;
  double tol = kRankTol;
};

struct RankLoop {
  bool loop = false;
  RankProfile profile;
};

/// Compressed extension on H_A (x) Sym^N; the reductions are taken in the
/// occupation basis, which has the same ranks as lifting and tracing.
RankLoop rank_loop_check(const Matrix& extension, int dA, const SymmetricBasis& basis, int K, double tol = kRankTol);
RankLoop rank_loop_check(const Matrix& extension, int dA, int dB, int N, int K, double tol = kRankTol);

struct RankMinOptions {
  int rounds = 10;
  double eps = 1e-3;  // W_{k+1} = (X_k + eps I)^{-1}
  double rank_tol = kRankTol;
  /// Iterates whose constraint residual exceeds this are discarded.
  double feas_tol = 1e-7;
};

struct RankMinResult {
  Matrix extension;
  int rank = 0;
  int rounds_run = 0;
  std::vector<int> rank_history;  // one entry per accepted solve
};

/// Log-det reweighting over the feasible set of q. For cone queries the
/// floor adds tr(objective * Lambda) >= objective_floor.
RankMinResult rank_min_heuristic(const ExtensionQuery& q, std::optional<double> objective_floor = std::nullopt,
                                 const RankMinOptions& rm = {}, const ExtensionOptions& opts = {});

enum class CertifyVerdict { entangled, separable, undecided };
const char* to_string(CertifyVerdict v);

struct CertifyResult {
  CertifyVerdict verdict = CertifyVerdict::undecided;
  int N = 0;
  std::optional<HermitianOperator> witness;
  double witness_value = 0;
  std::optional<Matrix> extension;  // separable: the low-rank PPT extension
  std::optional<RankProfile> profile;
};

/// PPT membership for N = 2..maxN; feasible levels go through the rank
/// heuristic (delta is its reweighting epsilon) and a rank-loop check.
CertifyResult certify(const HermitianOperator& rho, int maxN, double delta, const ExtensionOptions& opts = {},
                      bool all_cuts = false);

}  // namespace dpskit
