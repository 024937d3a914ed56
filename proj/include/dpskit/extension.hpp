#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dpskit/hermitian.hpp"
#include "dpskit/sdp.hpp"
#include "dpskit/symmetric.hpp"

namespace dpskit {

/// Linear map on matrices with real coefficients, stored as a term list:
/// out(out_r, out_c) += coef * in(in_r, in_c).
struct SuperOp {
  struct Term {
    int out_r, out_c, in_r, in_c;
    double coef;
  };
  int in_side = 0;
  int out_side = 0;
  std::vector<Term> terms;

  Matrix apply(const Matrix& x) const;
  /// Hilbert-Schmidt adjoint under the pairing tr(Y * apply(X)) = tr(adjoint(Y) * X).
  Matrix adjoint(const Matrix& y) const;
};

SuperOp identity_superop(int d);
/// Kronecker product of maps: (a (x) b)(X (x) Y) = a(X) (x) b(Y).
SuperOp tensor(const SuperOp& a, const SuperOp& b);

/// Sym^N(C^d) -> Sym^K(C^d): trace over the last N-K copies, in occupation bases.
SuperOp reduce_map(int d, int N, int K);
/// Sym^N(C^d) -> Sym^{N-j} (x) Sym^j with the last j copies transposed.
SuperOp ppt_split_map(int d, int N, int j);
/// Full trace of a dA-dimensional factor, as a map to 1x1.
SuperOp trace_superop(int d);

struct CompressedMaps {
  SuperOp trace_map;               // H_A (x) Sym^N -> H_A (x) H_B
  std::optional<SuperOp> ppt_map;  // H_A (x) Sym^N -> H_A (x) Sym^{ceil(N/2)} (x) Sym^{floor(N/2)}
};

CompressedMaps compressed_maps(int dA, int dB, int N, bool ppt);
inline CompressedMaps compressed_maps(int dA, const SymmetricBasis& basis, bool ppt) {
  return compressed_maps(dA, basis.d, basis.N, ppt);
}

enum class QueryMode { membership, cone_optimize };
enum class MarginalConstraint { trace_match, identity_marginal, unit_trace };

struct ExtensionQuery {
  HermitianOperator rho;  // membership target; dims {dA, dB}
  int N = 1;
  bool ppt = false;
  QueryMode mode = QueryMode::membership;
  std::optional<HermitianOperator> objective;  // cone_optimize: maximize tr(objective * Lambda)
  MarginalConstraint reduced_constraint = MarginalConstraint::trace_match;
  /// Impose PPT on every cut AB^{N-j} | B^j, j = 1..floor(N/2).
  bool all_cuts = false;

  static ExtensionQuery membership(HermitianOperator rho, int N, bool ppt);
  static ExtensionQuery cone(HermitianOperator objective, int N, bool ppt,
                             MarginalConstraint c = MarginalConstraint::identity_marginal);
};

inline constexpr std::int64_t kDefaultBudgetDim = 128;

struct ExtensionOptions {
  SolverOptions solver;
  /// Cap on dA * sym_dim(dB, N) (complex side of the extension variable).
  std::int64_t budget_dim = kDefaultBudgetDim;
};

/// Compiled program plus the bookkeeping needed to decode it.
struct ExtensionSdp {
  SdpProblem problem;
  Dims in_dims;      // dims of the bipartite/tripartite operator being extended
  int x_side = 0;    // complex side of the compressed extension
  int x_block = 0;
  std::vector<int> y_blocks;
  SuperOp trace_map;
  std::vector<SuperOp> ppt_maps;
  int marginal_count = 0;  // leading constraints that encode the marginal condition
  std::vector<Matrix> marginal_basis;  // Hermitian basis element of each leading constraint
};

ExtensionSdp build_bse_sdp(const ExtensionQuery& q, const ExtensionOptions& opts = {});

/// Locally Bose-symmetric extension of a tripartite rho on H1 (x) Sym^N(H2) (x) Sym^N(H3).
ExtensionSdp build_tripartite_sdp(const HermitianOperator& rho, int N, bool ppt, const ExtensionOptions& opts = {});

enum class Verdict { feasible, infeasible, undecided };
const char* to_string(Verdict v);

struct MembershipResult {
  Verdict verdict = Verdict::undecided;
  std::optional<Matrix> extension;            // compressed, on H_A (x) Sym^N
  std::optional<HermitianOperator> witness;   // operator norm 1
  double witness_value = 0.0;                 // tr(W rho) when a witness exists
  SolveStatus solver_status = SolveStatus::numerical_error;
  Residuals residuals;
  int iterations = 0;
};

MembershipResult check_membership(const ExtensionQuery& q, const ExtensionOptions& opts = {});
MembershipResult check_tripartite_membership(const HermitianOperator& rho, int N, bool ppt,
                                             const ExtensionOptions& opts = {});

struct ConeResult {
  double value = 0.0;
  HermitianOperator optimizer;  // Lambda_AB
  Matrix extension;             // compressed
  SolveStatus status = SolveStatus::numerical_error;
  Residuals residuals;
};

ConeResult optimize_over_cone(const ExtensionQuery& q, const ExtensionOptions& opts = {});

/// min tr(W sigma) over unit-trace members of the tested cone. A valid witness
/// gives a value >= 0 up to solver tolerance.
double verify_witness(const HermitianOperator& w, int N, bool ppt, const ExtensionOptions& opts = {});

/// Largest violation of the extension conditions for a compressed candidate:
/// marginal mismatch (operator norm), negative eigenvalues of X and of its PPT images.
double extension_violation(const Matrix& x, const HermitianOperator& rho, int N, bool ppt, bool all_cuts = false);

/// Orthonormal Hermitian basis of n x n matrices: E_pp, (E_pq+E_qp)/sqrt2, i(E_pq-E_qp)/sqrt2.
std::vector<Matrix> hermitian_basis(int n);

/// Throws budget_exceeded when dA * sym_dim(dB, N) exceeds the cap.
void check_budget(int dA, int dB, int N, std::int64_t budget_dim);

}  // namespace dpskit
