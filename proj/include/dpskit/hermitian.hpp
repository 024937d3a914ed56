#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "dpskit/error.hpp"

namespace dpskit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<int>;

inline constexpr double kHermitianTol = 1e-10;

/// Dense Hermitian matrix acting on a tensor product of factors with the
/// given dimensions. Factor order is positional; subsystems are always
/// referred to by index.
///
/// Construction symmetrizes (M + M^dagger)/2 and rejects inputs whose
/// anti-Hermitian part exceeds the tolerance.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  HermitianOperator(Dims dims, Matrix entries, double hermitian_tol = kHermitianTol);

  /// Single-factor convenience constructor.
  explicit HermitianOperator(Matrix entries, double hermitian_tol = kHermitianTol);

  static HermitianOperator identity(Dims dims);
  static HermitianOperator zero(Dims dims);
  /// |psi><psi| (not normalized).
  static HermitianOperator projector(Dims dims, const Vector& psi);
  static HermitianOperator diagonal(Dims dims, std::span<const double> diag);

  const Dims& dims() const noexcept { return dims_; }
  int num_factors() const noexcept { return static_cast<int>(dims_.size()); }
  int side() const noexcept { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  double trace() const { return m_.trace().real(); }

  /// Same entries, different factorization of the space.
  HermitianOperator with_dims(Dims dims) const;

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;
  friend HermitianOperator operator*(double s, const HermitianOperator& x) { return x * s; }

 private:
  struct Unchecked {};
  HermitianOperator(Dims dims, Matrix entries, Unchecked);

  Dims dims_;
  Matrix m_;

  friend HermitianOperator make_hermitian_unchecked(Dims, Matrix);
};

/// Builds from a matrix the caller knows is Hermitian up to rounding; only
/// symmetrizes.
HermitianOperator make_hermitian_unchecked(Dims dims, Matrix entries);

enum class NormKind { trace, operator_norm, frobenius };

struct Eigensystem {
  RealVector values;  // descending
  Matrix vectors;     // unitary, columns match values
};

std::int64_t product(std::span<const int> dims);

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

HermitianOperator partial_trace(const HermitianOperator& x, const std::vector<int>& traced_factors);
HermitianOperator partial_transpose(const HermitianOperator& x, const std::vector<int>& transposed_factors);

/// Raw-matrix versions used on intermediate (possibly non-Hermitian) data.
Matrix partial_trace(const Matrix& x, const Dims& dims, const std::vector<int>& traced_factors);
Matrix partial_transpose(const Matrix& x, const Dims& dims, const std::vector<int>& transposed_factors);

Eigensystem eig_hermitian(const HermitianOperator& x);
RealVector eigenvalues(const HermitianOperator& x);  // descending
double min_eigenvalue(const HermitianOperator& x);
double min_eigenvalue(const Matrix& hermitian);

double norm(const HermitianOperator& x, NormKind kind);

/// Minus the sum of negative eigenvalues of the partial transpose.
double negativity(const HermitianOperator& rho, const std::vector<int>& cut_factors);

/// (1-p) rho + p tr_f(rho) (x) I/d_f, with the identity placed in slot f.
HermitianOperator depolarize(const HermitianOperator& rho, double p, int factor);

bool is_ppt(const HermitianOperator& rho, const std::vector<int>& cut_factors, double tol = 1e-9);

/// Random density matrix G G^dagger / tr with G a dims x rank complex
/// Gaussian matrix drawn from a seeded mt19937_64.
HermitianOperator random_state(Dims dims, int rank, std::uint64_t seed);

/// Haar-ish random unit vector from the same generator family.
Vector random_unit_vector(int dim, std::uint64_t seed);

}  // namespace dpskit
