#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "dpskit/hermitian.hpp"

namespace dpskit {

using Occupation = std::vector<int>;

/// C(N+d-1, d-1).
std::int64_t sym_dim(int d, int N);

/// N! / prod n_i!  (as a double; exact for the sizes used here).
double multinomial(const Occupation& n);

/// Occupation vectors of Sym^N(C^d) in reverse-lexicographic order
/// (first component descending). Cheap: no isometry is built.
class SymmetricIndex {
 public:
  SymmetricIndex(int d, int N);

  int d() const noexcept { return d_; }
  int N() const noexcept { return N_; }
  int size() const noexcept { return static_cast<int>(occ_.size()); }
  const Occupation& operator[](int i) const { return occ_[i]; }
  const std::vector<Occupation>& occupations() const noexcept { return occ_; }

  /// Position of an occupation vector, -1 when absent.
  int find(const Occupation& n) const;

 private:
  int d_, N_;
  std::vector<Occupation> occ_;
  std::unordered_map<std::uint64_t, int> pos_;
  std::uint64_t key(const Occupation& n) const;
};

/// Splitting coefficient of |k+l> into |k>|l>: sqrt(mult(k) mult(l) / mult(k+l)).
double split_coefficient(const Occupation& k, const Occupation& l);

inline constexpr std::int64_t kDefaultBasisCap = 4096;

struct SymmetricBasis {
  int d = 0;
  int N = 0;
  std::vector<Occupation> multi_indices;
  RealMatrix isometry;  // d^N x sym_dim, orthonormal columns

  int size() const { return static_cast<int>(multi_indices.size()); }
  RealMatrix projector() const { return isometry * isometry.transpose(); }
};

/// Throws budget_exceeded when d^N > cap.
SymmetricBasis build_basis(int d, int N, std::int64_t cap = kDefaultBasisCap);

/// (I_A (x) V) x (I_A (x) V)^dagger; result dims {dA, d, ..., d}.
HermitianOperator lift(const Matrix& x, const SymmetricBasis& basis, int dA);

/// Inverse of lift on operators supported on H_A (x) Sym^N.
Matrix compress(const HermitianOperator& x, const SymmetricBasis& basis, int dA);

/// Pure 2K-qubit state with K zeros and K ones, symmetrized.
HermitianOperator dicke_overlap_state(int K);

}  // namespace dpskit
