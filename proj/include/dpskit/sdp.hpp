#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpskit/hermitian.hpp"

namespace dpskit {

/// Upper-triangle triplets of a real symmetric matrix: (r, c, v) with r <= c
/// stands for M(r,c) = M(c,r) = v. Repeated positions accumulate.
struct SymEntry {
  int r, c;
  double v;
};

struct BlockEntries {
  int block;
  std::vector<SymEntry> entries;
};

struct SdpConstraint {
  std::vector<BlockEntries> parts;
  double rhs = 0.0;
};

enum class Sense { minimize, maximize, feasibility };

/// Block PSD program in primal standard form:
///   opt <C, X>  s.t.  <A_i, X> = b_i,  X = diag(X_1, ..., X_k) >= 0.
struct SdpProblem {
  std::vector<int> block_sizes;
  std::vector<RealMatrix> objective;  // empty or one symmetric matrix per block
  std::vector<SdpConstraint> constraints;
  Sense sense = Sense::feasibility;

  int add_block(int size);
  /// Adds a constraint and returns its index.
  int add_constraint(SdpConstraint c);
  void validate() const;
};

enum class SolveStatus { optimal, primal_infeasible, dual_infeasible, max_iter, numerical_error };

const char* to_string(SolveStatus s);

struct Residuals {
  double primal = 0, dual = 0, gap = 0;
};

struct SdpSolution {
  SolveStatus status = SolveStatus::numerical_error;
  std::vector<RealMatrix> primal_blocks;
  RealVector dual_multipliers;
  std::vector<RealMatrix> dual_slack;
  double objective_value = 0.0;
  double dual_value = 0.0;
  Residuals residuals;
  int iterations = 0;
  /// primal_infeasible: y with b^T y = 1 and blocks -sum y_i A_i >= 0.
  /// dual_infeasible: the improving ray X >= 0 with A(X) = 0, <C,X> < 0.
  std::optional<std::vector<RealMatrix>> certificate;
  std::optional<RealVector> certificate_y;
  int pruned_constraints = 0;
};

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 200;
  double step_fraction = 0.98;
  /// Write an iteration CSV here when non-empty.
  std::string log_path;
};

SdpSolution solve(const SdpProblem& p, const SolverOptions& opts = {});

/// [[Re h, -Im h], [Im h, Re h]].
RealMatrix embed_complex(const Matrix& h);
inline RealMatrix embed_complex(const HermitianOperator& h) { return embed_complex(h.matrix()); }

/// Inverse of the embedding, averaging the two copies.
Matrix unembed(const RealMatrix& w);

/// Sum over constraints of y_i A_i restricted to one block (dense).
RealMatrix adjoint_block(const SdpProblem& p, const RealVector& y, int block);

/// <A_i, X> for every constraint.
RealVector apply_constraints(const SdpProblem& p, const std::vector<RealMatrix>& x);

}  // namespace dpskit
