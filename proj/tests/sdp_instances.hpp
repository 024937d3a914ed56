#pragma once

// Random SDP instances with a known answer, built in test code.

#include <random>
#include <vector>

#include "dpskit/sdp.hpp"

namespace instances {

using dpskit::RealMatrix;
using dpskit::RealVector;
using dpskit::SdpConstraint;
using dpskit::SdpProblem;
using dpskit::SymEntry;

inline std::vector<SymEntry> upper(const RealMatrix& m) {
  std::vector<SymEntry> out;
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r <= c; ++r)
      if (m(r, c) != 0.0) out.push_back({r, c, m(r, c)});
  return out;
}

inline RealMatrix random_sym(int n, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  RealMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = g(gen);
  return 0.5 * (m + m.transpose());
}

inline RealMatrix random_orthogonal(int n, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  RealMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = g(gen);
  Eigen::HouseholderQR<RealMatrix> qr(m);
  return qr.householderQ() * RealMatrix::Identity(n, n);
}

inline double frob(const RealMatrix& a, const RealMatrix& b) { return (a.array() * b.array()).sum(); }

struct Constructed {
  SdpProblem problem;
  double optimum = 0;
  std::vector<RealMatrix> x_star;
};

/// min <C,X> with a strictly complementary optimal pair (X*, Z*) planted.
inline Constructed constructed_optimum(const std::vector<int>& blocks, int m, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::normal_distribution<double> g;
  Constructed out;
  std::vector<RealMatrix> z_star;
  for (int n : blocks) {
    out.problem.add_block(n);
    const RealMatrix q = random_orthogonal(n, gen);
    const int rank = std::max(1, n / 2);
    RealVector xd = RealVector::Zero(n), zd = RealVector::Zero(n);
    for (int i = 0; i < n; ++i) (i < rank ? xd(i) : zd(i)) = u(gen);
    out.x_star.push_back(q * xd.asDiagonal() * q.transpose());
    z_star.push_back(q * zd.asDiagonal() * q.transpose());
  }
  std::vector<RealMatrix> c(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) c[b] = z_star[b];
  for (int i = 0; i < m; ++i) {
    SdpConstraint con;
    const double y = g(gen);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const RealMatrix a = random_sym(blocks[b], gen);
      con.parts.push_back({static_cast<int>(b), upper(a)});
      con.rhs += frob(a, out.x_star[b]);
      c[b] += y * a;
    }
    out.problem.add_constraint(std::move(con));
  }
  out.problem.objective = c;
  out.problem.sense = dpskit::Sense::minimize;
  for (std::size_t b = 0; b < blocks.size(); ++b) out.optimum += frob(c[b], out.x_star[b]);
  return out;
}

/// {X >= 0 : <A_i, X> = b_i} with a planted Farkas vector y0:
/// sum y0_i A_i = -P (P > 0) and b^T y0 = 1.
inline SdpProblem constructed_infeasible(const std::vector<int>& blocks, int m, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  SdpProblem p;
  for (int n : blocks) p.add_block(n);
  RealVector y0(m);
  for (int i = 0; i < m; ++i) y0(i) = g(gen);
  y0(m - 1) = 1.0 + std::abs(y0(m - 1));
  std::vector<std::vector<RealMatrix>> a(m);
  for (int i = 0; i + 1 < m; ++i)
    for (int n : blocks) a[i].push_back(random_sym(n, gen));
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const int n = blocks[b];
    RealMatrix gm(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) gm(r, c) = g(gen);
    RealMatrix acc = -(gm * gm.transpose() + RealMatrix::Identity(n, n));
    for (int i = 0; i + 1 < m; ++i) acc -= y0(i) * a[i][b];
    a[m - 1].push_back(acc / y0(m - 1));
  }
  RealVector rhs(m);
  for (int i = 0; i < m; ++i) rhs(i) = g(gen);
  rhs(m - 1) = (1.0 - y0.head(m - 1).dot(rhs.head(m - 1))) / y0(m - 1);
  for (int i = 0; i < m; ++i) {
    SdpConstraint con;
    for (std::size_t b = 0; b < blocks.size(); ++b) con.parts.push_back({static_cast<int>(b), upper(a[i][b])});
    con.rhs = rhs(i);
    p.add_constraint(std::move(con));
  }
  p.sense = dpskit::Sense::feasibility;
  return p;
}

/// Farkas residual of a certificate: max(|b^T y - 1|, -lambda_min(-sum y_i A_i)) relative
/// to the scale of the A_i.
inline double farkas_violation(const SdpProblem& p, const RealVector& y) {
  double bty = 0;
  for (std::size_t i = 0; i < p.constraints.size(); ++i) bty += y(i) * p.constraints[i].rhs;
  double worst = std::abs(bty - 1.0);
  for (std::size_t b = 0; b < p.block_sizes.size(); ++b) {
    const RealMatrix s = -dpskit::adjoint_block(p, y, static_cast<int>(b));
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(s, Eigen::EigenvaluesOnly);
    worst = std::max(worst, -es.eigenvalues().minCoeff());
  }
  return worst;
}

}  // namespace instances
