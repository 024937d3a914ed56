#include "dpskit/hermitian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

namespace dpskit {

namespace {

void check_dims(const Dims& dims, Eigen::Index side) {
  require(!dims.empty(), "operator needs at least one factor");
  for (int d : dims) require(d >= 1, "factor dimensions must be positive");
  require(product(dims) == side, "matrix side " + std::to_string(side) +
                                     " does not match product of factor dims");
}

std::vector<std::int64_t> strides_of(const Dims& dims) {
  std::vector<std::int64_t> s(dims.size());
  std::int64_t acc = 1;
  for (std::size_t k = dims.size(); k-- > 0;) {
    s[k] = acc;
    acc *= dims[k];
  }
  return s;
}

std::vector<bool> factor_mask(const Dims& dims, const std::vector<int>& factors) {
  std::vector<bool> mask(dims.size(), false);
  for (int f : factors) {
    require(f >= 0 && f < static_cast<int>(dims.size()),
            "factor index " + std::to_string(f) + " out of range");
    mask[f] = true;
  }
  return mask;
}

// Offsets of the full index contributed by the digits of the selected factors,
// enumerated in row-major order of those factors.
std::vector<std::int64_t> offsets_for(const Dims& dims, const std::vector<bool>& select) {
  auto strides = strides_of(dims);
  std::vector<std::int64_t> out{0};
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (!select[k]) continue;
    std::vector<std::int64_t> next;
    next.reserve(out.size() * dims[k]);
    for (auto base : out)
      for (int v = 0; v < dims[k]; ++v) next.push_back(base + v * strides[k]);
    out = std::move(next);
  }
  return out;
}

}  // namespace

std::int64_t product(std::span<const int> dims) {
  std::int64_t p = 1;
  for (int d : dims) p *= d;
  return p;
}

HermitianOperator::HermitianOperator(Dims dims, Matrix entries, double hermitian_tol)
    : dims_(std::move(dims)), m_(std::move(entries)) {
  require(m_.rows() == m_.cols(), "operator matrix must be square");
  check_dims(dims_, m_.rows());
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double skew = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  require(skew <= hermitian_tol * scale,
          "matrix is not Hermitian (max |M - M^dagger| = " + std::to_string(skew) + ")");
  Matrix sym = (m_ + m_.adjoint()) * 0.5;
  m_ = std::move(sym);
}

HermitianOperator::HermitianOperator(Matrix entries, double hermitian_tol)
    : HermitianOperator(Dims{static_cast<int>(entries.rows())}, std::move(entries), hermitian_tol) {}

HermitianOperator::HermitianOperator(Dims dims, Matrix entries, Unchecked)
    : dims_(std::move(dims)), m_(std::move(entries)) {
  check_dims(dims_, m_.rows());
  Matrix sym = (m_ + m_.adjoint()) * 0.5;
  m_ = std::move(sym);
}

HermitianOperator make_hermitian_unchecked(Dims dims, Matrix entries) {
  return HermitianOperator(std::move(dims), std::move(entries), HermitianOperator::Unchecked{});
}

HermitianOperator HermitianOperator::identity(Dims dims) {
  const auto n = product(dims);
  return make_hermitian_unchecked(std::move(dims), Matrix::Identity(n, n));
}

HermitianOperator HermitianOperator::zero(Dims dims) {
  const auto n = product(dims);
  return make_hermitian_unchecked(std::move(dims), Matrix::Zero(n, n));
}

HermitianOperator HermitianOperator::projector(Dims dims, const Vector& psi) {
  return make_hermitian_unchecked(std::move(dims), psi * psi.adjoint());
}

HermitianOperator HermitianOperator::diagonal(Dims dims, std::span<const double> diag) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(diag.size()), static_cast<Eigen::Index>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return make_hermitian_unchecked(std::move(dims), std::move(m));
}

HermitianOperator HermitianOperator::with_dims(Dims dims) const {
  return make_hermitian_unchecked(std::move(dims), m_);
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  require(side() == o.side(), "operator sizes differ");
  return make_hermitian_unchecked(dims_, m_ + o.m_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  require(side() == o.side(), "operator sizes differ");
  return make_hermitian_unchecked(dims_, m_ - o.m_);
}

HermitianOperator HermitianOperator::operator*(double s) const {
  return make_hermitian_unchecked(dims_, m_ * s);
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  const auto& am = a.matrix();
  const auto& bm = b.matrix();
  const Eigen::Index nb = bm.rows();
  Matrix out(am.rows() * nb, am.cols() * nb);
  for (Eigen::Index i = 0; i < am.rows(); ++i)
    for (Eigen::Index j = 0; j < am.cols(); ++j) out.block(i * nb, j * nb, nb, nb) = am(i, j) * bm;
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return make_hermitian_unchecked(std::move(dims), std::move(out));
}

Matrix partial_trace(const Matrix& x, const Dims& dims, const std::vector<int>& traced_factors) {
  auto traced = factor_mask(dims, traced_factors);
  std::vector<bool> kept(traced.size());
  for (std::size_t k = 0; k < traced.size(); ++k) kept[k] = !traced[k];
  const auto keep_off = offsets_for(dims, kept);
  const auto trace_off = offsets_for(dims, traced);
  const auto n = static_cast<Eigen::Index>(keep_off.size());
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) {
      Complex acc = 0;
      for (auto t : trace_off) acc += x(keep_off[r] + t, keep_off[c] + t);
      out(r, c) = acc;
    }
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& x, const std::vector<int>& traced_factors) {
  auto traced = factor_mask(x.dims(), traced_factors);
  Dims kept;
  for (std::size_t k = 0; k < traced.size(); ++k)
    if (!traced[k]) kept.push_back(x.dims()[k]);
  if (kept.empty()) kept.push_back(1);
  return make_hermitian_unchecked(std::move(kept), partial_trace(x.matrix(), x.dims(), traced_factors));
}

Matrix partial_transpose(const Matrix& x, const Dims& dims, const std::vector<int>& transposed_factors) {
  auto mask = factor_mask(dims, transposed_factors);
  const auto strides = strides_of(dims);
  const Eigen::Index n = x.rows();
  // digits of the transposed factors, as a contribution to the flat index
  std::vector<std::int64_t> part(n, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::int64_t p = 0;
    for (std::size_t k = 0; k < dims.size(); ++k)
      if (mask[k]) p += ((i / strides[k]) % dims[k]) * strides[k];
    part[i] = p;
  }
  Matrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto i2 = i - part[i] + part[j];
      const auto j2 = j - part[j] + part[i];
      out(i2, j2) = x(i, j);
    }
  return out;
}

HermitianOperator partial_transpose(const HermitianOperator& x, const std::vector<int>& transposed_factors) {
  return make_hermitian_unchecked(x.dims(), partial_transpose(x.matrix(), x.dims(), transposed_factors));
}

Eigensystem eig_hermitian(const HermitianOperator& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x.matrix());
  if (es.info() != Eigen::Success) fail(ErrorCode::internal, "Hermitian eigensolver did not converge");
  const Eigen::Index n = x.side();
  Eigensystem out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = es.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return out;
}

RealVector eigenvalues(const HermitianOperator& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::internal, "Hermitian eigensolver did not converge");
  return es.eigenvalues().reverse();
}

double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::internal, "Hermitian eigensolver did not converge");
  return es.eigenvalues()(0);
}

double min_eigenvalue(const HermitianOperator& x) { return min_eigenvalue(x.matrix()); }

double norm(const HermitianOperator& x, NormKind kind) {
  switch (kind) {
    case NormKind::frobenius:
      return x.matrix().norm();
    case NormKind::trace:
      return eigenvalues(x).cwiseAbs().sum();
    case NormKind::operator_norm:
      return eigenvalues(x).cwiseAbs().maxCoeff();
  }
  return 0.0;
}

double negativity(const HermitianOperator& rho, const std::vector<int>& cut_factors) {
  const auto ev = eigenvalues(partial_transpose(rho, cut_factors));
  double neg = 0.0;
  for (double v : ev)
    if (v < 0) neg -= v;
  return neg;
}

HermitianOperator depolarize(const HermitianOperator& rho, double p, int factor) {
  require(p >= 0.0 && p <= 1.0, "depolarizing probability must lie in [0,1]");
  require(factor >= 0 && factor < rho.num_factors(), "depolarized factor out of range");
  if (p == 0.0) return rho;
  const Dims& dims = rho.dims();
  const int d = dims[factor];
  const auto reduced = partial_trace(rho.matrix(), dims, {factor});
  // re-insert I/d in slot `factor`: out(i,j) = reduced(i\f, j\f) * delta(i_f, j_f) / d
  const auto strides = strides_of(dims);
  const auto n = static_cast<Eigen::Index>(rho.side());
  const std::int64_t sf = strides[factor];
  Matrix noise = Matrix::Zero(n, n);
  auto drop = [&](Eigen::Index i) {
    const std::int64_t hi = i / (sf * d), lo = i % sf;
    return hi * sf + lo;
  };
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if ((i / sf) % d == (j / sf) % d) noise(i, j) = reduced(drop(i), drop(j)) / static_cast<double>(d);
  return make_hermitian_unchecked(dims, (1.0 - p) * rho.matrix() + p * noise);
}

bool is_ppt(const HermitianOperator& rho, const std::vector<int>& cut_factors, double tol) {
  return min_eigenvalue(partial_transpose(rho, cut_factors)) >= -tol;
}

HermitianOperator random_state(Dims dims, int rank, std::uint64_t seed) {
  const auto n = product(dims);
  require(rank >= 1 && rank <= n, "rank must be in [1, total dimension]");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, rank);
  for (Eigen::Index c = 0; c < rank; ++c)
    for (Eigen::Index r = 0; r < n; ++r) {
      const double re = normal(gen);
      const double im = normal(gen);
      g(r, c) = Complex(re, im);
    }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return make_hermitian_unchecked(std::move(dims), std::move(rho));
}

Vector random_unit_vector(int dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = normal(gen);
    const double im = normal(gen);
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

}  // namespace dpskit
