#pragma once

#include "dcl/types.hpp"

#include <string>
#include <vector>

namespace dcl {

/// minimize phi^T A phi subject to phi_i >= bound for i in constraint_nodes.
struct ObstacleProblem {
  SparseMatrix quadratic;
  std::vector<Index> constraint_nodes;
  double bound = 1.0;
};

struct ObstacleOptions {
  double relaxation = 1.6;
  double tol = 1e-10;
  long max_iter = 0;  // 0 selects 50 * size
  int stall_window = 50;
  double stall_ratio = 0.98;
};

struct ObstacleSolution {
  Vector minimizer;
  double value = 0.0;
  std::vector<Index> active_set;
  double residual = 0.0;
  long iterations = 0;
  bool converged = false;
  std::string method;
};

/// Projected SOR; switches to a primal-dual active-set iteration when the
/// residual stalls and always finishes with an exact solve on the detected
/// active set. Residual is the sup of the projected Gauss-Seidel step.
ObstacleSolution solve_obstacle(const ObstacleProblem& problem, const ObstacleOptions& options = {});

/// Projected-step residual of a candidate point.
double obstacle_residual(const ObstacleProblem& problem, const Vector& phi);

/// Minimizer with phi_i = bound on `active` and A phi = 0 on the free nodes.
Vector solve_with_active_set(const SparseMatrix& a, const std::vector<Index>& active, double bound);

}  // namespace dcl
