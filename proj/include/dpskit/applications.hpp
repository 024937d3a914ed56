#pragma once

#include <vector>

#include "dpskit/extension.hpp"
#include "dpskit/hermitian.hpp"

namespace dpskit {

struct EnsembleEntry {
  double p = 0;
  HermitianOperator encoded;  // Psi'_i on H_A
  Vector source;              // pure Psi_i on H_B, unit norm
};

struct EstimationProblem {
  std::vector<EnsembleEntry> ensemble;

  int dim_A() const;
  int dim_B() const;
  /// Probabilities sum to 1, sources are unit vectors of a common size,
  /// encoded states share one size.
  void validate() const;
};

/// sum_i p_i Psi'_i (x) |Psi_i><Psi_i|, dims {dA, dB}.
HermitianOperator estimation_operator(const EstimationProblem& p);

struct BoundPair {
  double upper = 0, lower = 0;
  int N = 0;
  bool ppt = false;
  SolveStatus status = SolveStatus::numerical_error;
};

/// Lower bounds obtained by disentangling the optimizer of the relaxation:
/// N/(N+d) v + c/(N+d) and (1 - d g_N/(2(d-1))) v + c g_N/(2(d-1)).
double sym_lower_bound(double upper, int d, int N, double c = 1.0);
double ppt_lower_bound(double upper, int d, int N, double c = 1.0);

BoundPair fidelity_bounds(const EstimationProblem& p, int N, bool ppt, const ExtensionOptions& opts = {});

/// Qubit depolarizing channel (1-eps) rho + eps I/2.
HermitianOperator depolarize_channel(const HermitianOperator& rho, double eps);

/// Four BB84 states, two depolarized copies encoded on A, the clean state on B.
EstimationProblem bb84_two_copy_problem(double eps);
/// 36 qutrit states on a 6x6 angular grid, one depolarized copy on A.
EstimationProblem qutrit_grid_problem(double eps);

/// Choi operator sum_ij |i><j| (x) w(|i><j|), input factor first.
HermitianOperator choi_identity(int d);
HermitianOperator choi_depolarizing(int d, double p);
/// w(rho) = tr_A(Omega (rho^T (x) I)).
HermitianOperator apply_channel(const HermitianOperator& choi, const HermitianOperator& rho);

BoundPair output_purity_bounds(const HermitianOperator& choi, int N, bool ppt, const ExtensionOptions& opts = {});

Vector ghz_state();
Vector w_state();
Vector product_state_000();

/// Bipartition A|B of |psi><psi| with the third factor traced out.
BoundPair geometric_entanglement_bounds(const Vector& psi, const Dims& dims, int N, bool ppt,
                                        const ExtensionOptions& opts = {});

}  // namespace dpskit
