#include "dpskit/bounds.hpp"

#include "dpskit/symmetric.hpp"

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numbers>

namespace dpskit {

double jacobi_eval(int n, double alpha, double beta, double x) {
  require(n >= 0, "jacobi_eval needs n >= 0");
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0;
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + alpha + beta;
    const double a1 = 2.0 * (k + 1) * (k + alpha + beta + 1) * s;
    const double a2 = (s + 1) * (alpha * alpha - beta * beta);
    const double a3 = s * (s + 1) * (s + 2);
    const double a4 = 2.0 * (k + alpha) * (k + beta) * (s + 2);
    const double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// Orthonormal Jacobi recurrence x p_n = b_{n+1} p_{n+1} + a_n p_n + b_n p_{n-1}:
//   a_n = (beta^2 - alpha^2) / ((2n+alpha+beta)(2n+alpha+beta+2)),  a_0 = (beta-alpha)/(alpha+beta+2)
//   b_n^2 = 4n(n+alpha)(n+beta)(n+alpha+beta) / ((2n+alpha+beta)^2 (2n+alpha+beta+1)(2n+alpha+beta-1))
// Substituting x = y gives the (1-y) form with alpha_n = 1 - a_n, beta_n = -b_{n+1}.
JacobiRecurrence jacobi_recurrence(int d, int N) {
  require(d >= 2 && N >= 1, "jacobi_recurrence needs d >= 2, N >= 1");
  JacobiRecurrence r;
  r.alpha = d - 2;
  r.beta = N % 2 == 0 ? 0.0 : 1.0;
  r.degree = N % 2 == 0 ? N / 2 + 1 : (N + 1) / 2;
  const double al = r.alpha, be = r.beta;
  r.a.resize(r.degree);
  r.b.resize(std::max(0, r.degree - 1));
  for (int n = 0; n < r.degree; ++n) {
    const double s = 2.0 * n + al + be;
    const double an = n == 0 ? (be - al) / (al + be + 2.0) : (be * be - al * al) / (s * (s + 2.0));
    r.a(n) = 1.0 - an;
  }
  for (int n = 1; n < r.degree; ++n) {
    const double s = 2.0 * n + al + be;
    const double b2 = 4.0 * n * (n + al) * (n + be) * (n + al + be) / (s * s * (s + 1.0) * (s - 1.0));
    r.b(n - 1) = -std::sqrt(b2);
  }
  return r;
}

RealMatrix tridiagonal_C(int d, int N) {
  const auto r = jacobi_recurrence(d, N);
  RealMatrix c = RealMatrix::Zero(r.degree, r.degree);
  for (int n = 0; n < r.degree; ++n) c(n, n) = r.a(n);
  for (int n = 0; n + 1 < r.degree; ++n) c(n, n + 1) = c(n + 1, n) = r.b(n);
  return c;
}

double g_N(int d, int N) {
  const auto r = jacobi_recurrence(d, N);
  if (r.degree == 1) return r.a(0);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es;
  es.computeFromTridiagonal(r.a, r.b, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::internal, "tridiagonal eigensolver did not converge");
  return es.eigenvalues()(0);
}

double g_N_root_refinement(int d, int N) {
  require(d >= 2 && N >= 1, "g_N needs d >= 2, N >= 1");
  const double al = d - 2, be = N % 2 == 0 ? 0.0 : 1.0;
  const int n = N % 2 == 0 ? N / 2 + 1 : (N + 1) / 2;
  auto f = [&](double x) { return jacobi_eval(n, al, be, x); };
  // P_n(1) > 0; the first sign change below 1 brackets the largest root.
  const double h = 1.0 / (4.0 * n * n);
  double hi = 1.0, fhi = f(hi);
  double lo = hi - h;
  while (lo > -1.0 && (f(lo) > 0) == (fhi > 0)) {
    hi = lo;
    fhi = f(hi);
    lo -= h;
  }
  lo = std::max(lo, -1.0);
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) > 0) == (fhi > 0)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 1.0 - 0.5 * (lo + hi);
}

double g_N_via_pencil(int d, int N) {
  require(d >= 2 && N >= 1, "g_N needs d >= 2, N >= 1");
  using boost::multiprecision::cpp_int;
  using Q = boost::multiprecision::cpp_rational;
  const bool odd = N % 2 == 1;
  const int n = odd ? (N - 1) / 2 + 1 : N / 2 + 1;
  // (s)! / (s+k)! = 1 / ((s+1)...(s+k))
  auto ratio = [](int s, int k) {
    cpp_int den = 1;
    for (int t = 1; t <= k; ++t) den *= s + t;
    return Q(cpp_int(1), den);
  };
  const int shift = odd ? 1 : 0;
  std::vector<std::vector<Q>> A(n, std::vector<Q>(n)), B(n, std::vector<Q>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      B[i][j] = ratio(i + j + shift, d - 1);
      A[i][j] = ratio(i + j + shift, d);
    }
  // B = L D L^T, exactly.
  std::vector<std::vector<Q>> L(n, std::vector<Q>(n, Q(0)));
  std::vector<Q> D(n);
  for (int j = 0; j < n; ++j) {
    Q s = B[j][j];
    for (int k = 0; k < j; ++k) s -= L[j][k] * L[j][k] * D[k];
    D[j] = s;
    if (D[j] <= 0) fail(ErrorCode::internal, "pencil matrix B is not positive definite");
    L[j][j] = 1;
    for (int i = j + 1; i < n; ++i) {
      Q t = B[i][j];
      for (int k = 0; k < j; ++k) t -= L[i][k] * L[j][k] * D[k];
      L[i][j] = t / D[j];
    }
  }
  // M = L^{-1} A L^{-T}: forward substitution on columns, then on rows.
  auto forward = [&](std::vector<std::vector<Q>>& m) {
    for (int c = 0; c < n; ++c)
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < i; ++k) m[i][c] -= L[i][k] * m[k][c];
  };
  forward(A);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) std::swap(A[i][j], A[j][i]);
  forward(A);
  // D^{-1/2} M D^{-1/2} is symmetric and well conditioned; finish in double.
  RealMatrix S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double dij = std::sqrt(static_cast<double>(D[i]) * static_cast<double>(D[j]));
      S(i, j) = static_cast<double>(A[i][j]) / dij;
    }
  S = 0.5 * (S + S.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(S, Eigen::EigenvaluesOnly);
  return 2.0 * (d - 1) * es.eigenvalues()(0);
}

double bessel_zero_first(double nu) {
  require(nu >= 0.0 && nu <= 50.0, "bessel_zero_first needs 0 <= nu <= 50");
  auto J = [nu](double x) { return std::cyl_bessel_j(nu, x); };
  // J_nu > 0 on (0, j_{nu,1}) and j_{nu,1} > nu.
  double lo = nu > 0 ? nu : 0.1;
  const double step = 0.05;
  double hi = lo + step;
  while (J(hi) > 0) {
    lo = hi;
    hi += step;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (J(mid) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double g_N_asymptotic(int d, int N) {
  const double j = bessel_zero_first(d - 2);
  return 2.0 * (j / N) * (j / N);
}

namespace {

void require_bipartite(const HermitianOperator& rho) {
  require(rho.num_factors() == 2, "operator must be bipartite (two factors)");
}

// (1-p) rho + p rho_A (x) I_B / d_B
HermitianOperator mix_with_marginal(const HermitianOperator& rho, double p) { return depolarize(rho, p, 1); }

}  // namespace

HermitianOperator disentangle_sym(const HermitianOperator& rho, int N) {
  require(N >= 1, "N must be >= 1");
  require_bipartite(rho);
  const int d = rho.dims()[1];
  return mix_with_marginal(rho, static_cast<double>(d) / (N + d));
}

HermitianOperator disentangle_ppt(const HermitianOperator& rho, int N) {
  require(N >= 1, "N must be >= 1");
  require_bipartite(rho);
  const int d = rho.dims()[1];
  require(d >= 2, "disentangle_ppt needs d_B >= 2");
  return mix_with_marginal(rho, d * g_N(d, N) / (2.0 * (d - 1)));
}

BoundReport bound_report(int d_A, int d_B, int N) {
  require(d_A >= 1 && d_B >= 2 && N >= 1, "bound_report needs d_A >= 1, d_B >= 2, N >= 1");
  BoundReport r;
  const double d = d_B;
  r.d_A = d_A;
  r.d_B = d_B;
  r.N = N;
  r.g_N = g_N(d_B, N);
  r.p_c_sym = d / (N + d);
  r.p_c_ppt = d * r.g_N / (2.0 * (d - 1));
  r.robustness_sym = (d - 1) / N;
  r.robustness_ppt = r.g_N / (2.0 - d / (d - 1) * r.g_N);
  r.dist_trace_sym = 2.0 * (d - 1) / (N + d - 1);
  r.dist_op_sym = (d - 1) / (N + d - 1);
  r.dist_trace_ppt = r.g_N;
  r.dist_op_ppt = r.g_N / 2.0;
  r.bessel_zero = bessel_zero_first(d - 2);
  r.g_N_asymptotic = 2.0 * (r.bessel_zero / N) * (r.bessel_zero / N);
  r.ppt_distance_valid = N >= 2;
  return r;
}

double frobenius_distance_exact(const HermitianOperator& rho, int N, bool ppt) {
  require_bipartite(rho);
  const int d = rho.dims()[1];
  const double purity = (rho.matrix() * rho.matrix()).trace().real();
  const auto rA = partial_trace(rho, {1});
  const double purityA = (rA.matrix() * rA.matrix()).trace().real();
  const double pref = ppt ? d * g_N(d, N) / (2.0 * d - 2.0) : static_cast<double>(d) / (N + d);
  return pref * std::sqrt(std::max(0.0, purity - purityA / d));
}

int required_N(double delta, int d_B, bool ppt) {
  require(delta > 0 && delta < 2, "delta must lie in (0, 2)");
  require(d_B >= 2, "required_N needs d_B >= 2");
  // Guard the ceiling against representation error in exact-integer cases.
  auto ceil_safe = [](double x) { return static_cast<int>(std::ceil(x - 1e-9 * std::max(1.0, std::abs(x)))); };
  if (!ppt) return std::max(0, ceil_safe((2.0 - delta) * (d_B - 1) / delta));
  int N = std::max(1, ceil_safe(std::numbers::sqrt2 * bessel_zero_first(d_B - 2) / std::sqrt(delta)));
  while (g_N(d_B, N) > delta) ++N;
  return N;
}

ComplexityEstimate complexity_estimate(int d_A, int d_B, double delta) {
  require(d_A >= 1 && d_B >= 2, "complexity_estimate needs d_A >= 1, d_B >= 2");
  ComplexityEstimate c;
  c.N_sym = required_N(delta, d_B, false);
  c.N_ppt = required_N(delta, d_B, true);
  const double la = std::log(static_cast<double>(d_A));
  auto lsym = [&](int N) { return std::log(static_cast<double>(sym_dim(d_B, N))); };
  c.sym_ops = 6 * la + 6 * lsym(c.N_sym);
  c.ppt_ops = 6 * la + 4 * lsym(c.N_ppt) + 4 * lsym((c.N_ppt + 1) / 2);
  c.sym_simplified = 6 * la + 6.0 * d_B * std::log(2.0 * std::numbers::e / delta);
  c.ppt_simplified = 6 * la + 4.0 * d_B * std::log(std::numbers::e * std::numbers::e / delta);
  return c;
}

double ppt_alone_rg_bound(int d_A, int d_B) { return (d_A + 1.0) * (d_B + 1.0) / 12.0 - 1.0; }
double ppt_alone_trace_bound(int d_A, int d_B) { return 2.0 - 24.0 / ((d_A + 1.0) * (d_B + 1.0)); }

PptAloneResult ppt_alone(const HermitianOperator& rho) {
  require_bipartite(rho);
  const int dA = rho.dims()[0], dB = rho.dims()[1];
  require(dA >= 3 && dB >= 2, "ppt_alone needs d_A >= 3 and d_B >= 2");
  if (!is_ppt(rho, {1})) fail(ErrorCode::not_ppt, "ppt_alone input is not PPT");
  PptAloneResult r;
  r.p_A = dA * (dA - 3.0) / (dA * dA - 1.0);
  r.p_B = dB * (dB - 2.0) / (dB * dB - 1.0);
  r.tilde = depolarize(depolarize(rho, r.p_A, 0), r.p_B, 1);
  r.rg_bound = ppt_alone_rg_bound(dA, dB);
  r.trace_bound = ppt_alone_trace_bound(dA, dB);
  return r;
}

std::vector<double> multipartite_probs(const std::vector<int>& dims, int N, bool ppt) {
  require(N >= 1, "N must be >= 1");
  std::vector<double> p;
  for (int d : dims) {
    require(d >= 2, "all party dimensions must be >= 2");
    p.push_back(ppt ? d * g_N(d, N) / (2.0 * (d - 1)) : static_cast<double>(d) / (N + d));
  }
  return p;
}

HermitianOperator example_state(int K) {
  require(K >= 1, "example_state needs K >= 1");
  const double diag = (K - 1.0) / (2.0 * (2 * K - 1));
  const double off = K / (2.0 * (2 * K - 1));
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(3, 3) = diag;
  m(1, 1) = m(2, 2) = m(1, 2) = m(2, 1) = off;
  return HermitianOperator(Dims{2, 2}, m);
}

}  // namespace dpskit
