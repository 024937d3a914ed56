#pragma once

// Independent reference implementations used only by the tests. Everything
// here is written with explicit index loops over the full tensor space.

#include <algorithm>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include "dpskit/hermitian.hpp"

namespace oracle {

using dpskit::Complex;
using dpskit::Dims;
using dpskit::Matrix;
using dpskit::RealMatrix;

inline std::vector<int> digits(long idx, const Dims& dims) {
  std::vector<int> out(dims.size());
  for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
    out[f] = static_cast<int>(idx % dims[f]);
    idx /= dims[f];
  }
  return out;
}

inline long index_of(const std::vector<int>& dig, const Dims& dims) {
  long idx = 0;
  for (std::size_t f = 0; f < dims.size(); ++f) idx = idx * dims[f] + dig[f];
  return idx;
}

inline long total(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1L, std::multiplies<long>());
}

inline Matrix partial_trace(const Matrix& x, const Dims& dims, const std::vector<int>& traced) {
  Dims kept_dims;
  std::vector<bool> is_traced(dims.size(), false);
  for (int t : traced) is_traced[t] = true;
  for (std::size_t f = 0; f < dims.size(); ++f)
    if (!is_traced[f]) kept_dims.push_back(dims[f]);
  const long n = total(dims), k = total(kept_dims);
  Matrix out = Matrix::Zero(k, k);
  for (long r = 0; r < n; ++r)
    for (long c = 0; c < n; ++c) {
      const auto dr = digits(r, dims), dc = digits(c, dims);
      bool diag = true;
      std::vector<int> kr, kc;
      for (std::size_t f = 0; f < dims.size(); ++f) {
        if (is_traced[f]) {
          diag = diag && dr[f] == dc[f];
        } else {
          kr.push_back(dr[f]);
          kc.push_back(dc[f]);
        }
      }
      if (diag) out(index_of(kr, kept_dims), index_of(kc, kept_dims)) += x(r, c);
    }
  return out;
}

inline Matrix partial_transpose(const Matrix& x, const Dims& dims, const std::vector<int>& factors) {
  const long n = total(dims);
  Matrix out(n, n);
  for (long r = 0; r < n; ++r)
    for (long c = 0; c < n; ++c) {
      auto dr = digits(r, dims), dc = digits(c, dims);
      for (int f : factors) std::swap(dr[f], dc[f]);
      out(index_of(dr, dims), index_of(dc, dims)) = x(r, c);
    }
  return out;
}

/// Average of all N! permutation operators on (C^d)^{(x)N}.
inline RealMatrix permutation_projector(int d, int N) {
  const Dims dims(N, d);
  const long n = total(dims);
  std::vector<int> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  RealMatrix acc = RealMatrix::Zero(n, n);
  long count = 0;
  do {
    for (long c = 0; c < n; ++c) {
      const auto dc = digits(c, dims);
      std::vector<int> dr(N);
      for (int i = 0; i < N; ++i) dr[perm[i]] = dc[i];
      acc(index_of(dr, dims), c) += 1.0;
    }
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc / static_cast<double>(count);
}

inline Matrix random_hermitian(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = Complex(g(gen), g(gen));
  return 0.5 * (m + m.adjoint());
}

inline Matrix random_psd(int n, int rank, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  Matrix m(n, rank);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < rank; ++c) m(r, c) = Complex(g(gen), g(gen));
  return m * m.adjoint();
}

inline double min_eig(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (h + h.adjoint())), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline dpskit::Vector random_vec(int n, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  dpskit::Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(g(gen), g(gen));
  return v.normalized();
}

inline dpskit::Vector top_eigvec(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  return es.eigenvectors().col(h.rows() - 1);
}

// max over unit a, b of <a b| M |a b>, by alternating top-eigenvector updates from random starts.
inline double max_product_overlap(const Matrix& m, int dA, int dB, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  double best = -1e9;
  for (int start = 0; start < 40; ++start) {
    dpskit::Vector a = random_vec(dA, gen), b;
    double val = 0;
    for (int it = 0; it < 200; ++it) {
      Matrix mb = Matrix::Zero(dB, dB), ma = Matrix::Zero(dA, dA);
      for (int i = 0; i < dA; ++i)
        for (int j = 0; j < dA; ++j) mb += std::conj(a(i)) * a(j) * m.block(i * dB, j * dB, dB, dB);
      b = top_eigvec(mb);
      for (int i = 0; i < dA; ++i)
        for (int j = 0; j < dA; ++j) ma(i, j) = (b.adjoint() * m.block(i * dB, j * dB, dB, dB) * b)(0, 0);
      a = top_eigvec(ma);
      dpskit::Vector ab(dA * dB);
      for (int i = 0; i < dA; ++i) ab.segment(i * dB, dB) = a(i) * b;
      const double nv = (ab.adjoint() * m * ab)(0, 0).real();
      if (std::abs(nv - val) < 1e-14) break;
      val = nv;
    }
    best = std::max(best, val);
  }
  return best;
}

}  // namespace oracle
