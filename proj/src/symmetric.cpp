#include "dpskit/symmetric.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace dpskit {

std::int64_t sym_dim(int d, int N) {
  require(d >= 1 && N >= 0, "sym_dim needs d >= 1, N >= 0");
  // C(N+d-1, d-1) built incrementally; each partial product is an integer.
  std::int64_t r = 1;
  for (int i = 1; i <= d - 1; ++i) r = r * (N + i) / i;
  return r;
}

double multinomial(const Occupation& n) {
  double lg = 0.0;
  int total = 0;
  for (int v : n) {
    lg -= std::lgamma(v + 1.0);
    total += v;
  }
  lg += std::lgamma(total + 1.0);
  return std::round(std::exp(lg));
}

double split_coefficient(const Occupation& k, const Occupation& l) {
  Occupation n(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) n[i] = k[i] + l[i];
  return std::sqrt(multinomial(k) * multinomial(l) / multinomial(n));
}

namespace {

void enumerate(int d, int N, Occupation& cur, int slot, std::vector<Occupation>& out) {
  if (slot == d - 1) {
    cur[slot] = N;
    out.push_back(cur);
    return;
  }
  for (int v = N; v >= 0; --v) {
    cur[slot] = v;
    enumerate(d, N - v, cur, slot + 1, out);
  }
}

}  // namespace

SymmetricIndex::SymmetricIndex(int d, int N) : d_(d), N_(N) {
  require(d >= 1 && N >= 0, "symmetric index needs d >= 1, N >= 0");
  require(std::pow(static_cast<double>(N + 1), d) < 1.8e19, "symmetric index too large");
  Occupation cur(d, 0);
  enumerate(d, N, cur, 0, occ_);
  pos_.reserve(occ_.size());
  for (std::size_t i = 0; i < occ_.size(); ++i) pos_.emplace(key(occ_[i]), static_cast<int>(i));
}

std::uint64_t SymmetricIndex::key(const Occupation& n) const {
  std::uint64_t k = 0;
  for (int v : n) k = k * static_cast<std::uint64_t>(N_ + 1) + static_cast<std::uint64_t>(v);
  return k;
}

int SymmetricIndex::find(const Occupation& n) const {
  if (static_cast<int>(n.size()) != d_) return -1;
  int total = 0;
  for (int v : n) {
    if (v < 0) return -1;
    total += v;
  }
  if (total != N_) return -1;
  auto it = pos_.find(key(n));
  return it == pos_.end() ? -1 : it->second;
}

SymmetricBasis build_basis(int d, int N, std::int64_t cap) {
  require(d >= 1 && N >= 1, "build_basis needs d >= 1, N >= 1");
  const double full = std::pow(static_cast<double>(d), N);
  if (full > static_cast<double>(cap))
    fail(ErrorCode::budget_exceeded,
         "symmetric basis needs d^N = " + std::to_string(static_cast<long long>(full)) +
             " rows, cap is " + std::to_string(cap));
  SymmetricIndex idx(d, N);
  const auto rows = static_cast<Eigen::Index>(full);
  SymmetricBasis b;
  b.d = d;
  b.N = N;
  b.multi_indices = idx.occupations();
  b.isometry = RealMatrix::Zero(rows, idx.size());
  Occupation counts(d);
  for (Eigen::Index s = 0; s < rows; ++s) {
    std::fill(counts.begin(), counts.end(), 0);
    for (Eigen::Index t = s, k = 0; k < N; ++k, t /= d) ++counts[t % d];
    b.isometry(s, idx.find(counts)) = 1.0;
  }
  for (int c = 0; c < idx.size(); ++c) b.isometry.col(c) /= std::sqrt(multinomial(idx[c]));
  return b;
}

HermitianOperator lift(const Matrix& x, const SymmetricBasis& basis, int dA) {
  const Eigen::Index D = basis.size();
  require(x.rows() == dA * D && x.cols() == dA * D, "lift: compressed operator has the wrong side");
  const Eigen::Index R = basis.isometry.rows();
  // (I_A (x) V): block-diagonal with dA copies of V
  Matrix big = Matrix::Zero(dA * R, dA * D);
  for (int a = 0; a < dA; ++a) big.block(a * R, a * D, R, D) = basis.isometry.cast<Complex>();
  Dims dims{dA};
  for (int k = 0; k < basis.N; ++k) dims.push_back(basis.d);
  return make_hermitian_unchecked(std::move(dims), big * x * big.adjoint());
}

Matrix compress(const HermitianOperator& x, const SymmetricBasis& basis, int dA) {
  const Eigen::Index D = basis.size();
  const Eigen::Index R = basis.isometry.rows();
  require(x.side() == dA * R, "compress: operator side does not match dA * d^N");
  Matrix big = Matrix::Zero(dA * R, dA * D);
  for (int a = 0; a < dA; ++a) big.block(a * R, a * D, R, D) = basis.isometry.cast<Complex>();
  return big.adjoint() * x.matrix() * big;
}

HermitianOperator dicke_overlap_state(int K) {
  require(K >= 1, "dicke_overlap_state needs K >= 1");
  if (K > 6) fail(ErrorCode::budget_exceeded, "dicke_overlap_state limited to K <= 6");
  const int n = 2 * K;
  const std::uint32_t size = 1u << n;
  Vector psi = Vector::Zero(size);
  for (std::uint32_t s = 0; s < size; ++s)
    if (std::popcount(s) == K) psi(s) = 1.0;
  psi /= psi.norm();
  return HermitianOperator::projector(Dims(n, 2), psi);
}

}  // namespace dpskit
