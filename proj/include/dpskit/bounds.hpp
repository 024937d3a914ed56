#pragma once

#include <vector>

#include "dpskit/hermitian.hpp"

namespace dpskit {

/// P_n^{(alpha,beta)}(x) by the standard three-term recurrence.
double jacobi_eval(int n, double alpha, double beta, double x);

/// Recurrence (1-y) p_n = alpha_n p_n + beta_n p_{n+1} + gamma_n p_{n-1} for the
/// orthonormal Jacobi polynomials that define g_N, truncated at the designated degree.
struct JacobiRecurrence {
  double alpha = 0, beta = 0;  // Jacobi parameters
  int degree = 0;              // designated polynomial degree = matrix size
  RealVector a;                // alpha_n, n = 0..degree-1
  RealVector b;                // beta_n,  n = 0..degree-2 (gamma_{n+1} = beta_n)
};

/// Even N: P^{(d-2,0)} of degree N/2+1. Odd N: P^{(d-2,1)} of degree (N+1)/2.
JacobiRecurrence jacobi_recurrence(int d, int N);

/// Symmetric tridiagonal matrix whose spectrum is {1 - x : P(x) = 0}.
RealMatrix tridiagonal_C(int d, int N);

/// 1 minus the largest root of the designated Jacobi polynomial (tridiagonal route).
double g_N(int d, int N);
/// Same quantity by bracketing and bisecting jacobi_eval.
double g_N_root_refinement(int d, int N);
/// Same quantity from the factorial-ratio Hankel pencil, in exact rational arithmetic.
double g_N_via_pencil(int d, int N);

/// First positive zero of J_nu, 0 <= nu <= 50.
double bessel_zero_first(double nu);

/// 2 (j_{d-2,1} / N)^2.
double g_N_asymptotic(int d, int N);

/// N/(N+d) rho + 1/(N+d) rho_A (x) I_B.
HermitianOperator disentangle_sym(const HermitianOperator& rho, int N);
/// (1 - p) rho + p rho_A (x) I_B / d with p = d g_N / (2(d-1)).
HermitianOperator disentangle_ppt(const HermitianOperator& rho, int N);

struct BoundReport {
  int d_A = 0, d_B = 0, N = 0;
  double g_N = 0;
  double p_c_sym = 0, p_c_ppt = 0;
  double robustness_sym = 0, robustness_ppt = 0;
  double dist_trace_sym = 0, dist_op_sym = 0;
  double dist_trace_ppt = 0, dist_op_ppt = 0;
  double g_N_asymptotic = 0;
  double bessel_zero = 0;  // j_{d_B-2,1}
  /// The PPT distance bounds only hold for N >= 2.
  bool ppt_distance_valid = false;
};

BoundReport bound_report(int d_A, int d_B, int N);

/// Closed form of ||rho - disentangle(rho)||_F.
double frobenius_distance_exact(const HermitianOperator& rho, int N, bool ppt);

int required_N(double delta, int d_B, bool ppt);

/// Natural logarithms of the dominant operation counts.
struct ComplexityEstimate {
  int N_sym = 0, N_ppt = 0;
  double sym_ops = 0, ppt_ops = 0;
  double sym_simplified = 0, ppt_simplified = 0;
};

ComplexityEstimate complexity_estimate(int d_A, int d_B, double delta);

struct PptAloneResult {
  double p_A = 0, p_B = 0;
  HermitianOperator tilde;
  double rg_bound = 0, trace_bound = 0;
};

/// Local depolarizing probabilities that make any PPT state separable.
PptAloneResult ppt_alone(const HermitianOperator& rho);
double ppt_alone_rg_bound(int d_A, int d_B);
double ppt_alone_trace_bound(int d_A, int d_B);

std::vector<double> multipartite_probs(const std::vector<int>& dims, int N, bool ppt);

/// Two-qubit reduction of the symmetric 2K-qubit state with K excitations.
HermitianOperator example_state(int K);

}  // namespace dpskit
