#include "dcl/obstacle.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>

namespace dcl {

namespace {

std::vector<char> constraint_mask(const ObstacleProblem& p) {
  std::vector<char> mask(static_cast<std::size_t>(p.quadratic.rows()), 0);
  for (Index i : p.constraint_nodes) {
    if (i < 0 || i >= p.quadratic.rows()) throw InvalidArgument("obstacle: constraint node out of range");
    mask[static_cast<std::size_t>(i)] = 1;
  }
  return mask;
}

std::vector<Index> active_of(const ObstacleProblem& p, const Vector& phi, const Vector& grad,
                             const std::vector<char>& mask) {
  std::vector<Index> act;
  const double scale = std::max(1.0, std::abs(p.bound));
  for (Index i = 0; i < phi.size(); ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    // Bound attained or the gradient pushes outward.
    if (phi[i] - p.bound <= 1e-12 * scale || (grad[i] > 0.0 && phi[i] - p.bound < 1e-8 * scale)) act.push_back(i);
  }
  return act;
}

}  // namespace

Vector solve_with_active_set(const SparseMatrix& a, const std::vector<Index>& active, double bound) {
  const Index n = a.rows();
  std::vector<Index> map(static_cast<std::size_t>(n), -1);
  std::vector<char> is_active(static_cast<std::size_t>(n), 0);
  for (Index i : active) is_active[static_cast<std::size_t>(i)] = 1;
  Index nf = 0;
  for (Index i = 0; i < n; ++i) {
    if (!is_active[static_cast<std::size_t>(i)]) map[static_cast<std::size_t>(i)] = nf++;
  }
  Vector phi = Vector::Zero(n);
  for (Index i : active) phi[i] = bound;
  if (nf == 0) return phi;
  std::vector<Eigen::Triplet<double>> t;
  Vector rhs = Vector::Zero(nf);
  for (Index col = 0; col < a.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      const Index r = map[static_cast<std::size_t>(it.row())];
      if (r < 0) continue;
      const Index c = map[static_cast<std::size_t>(col)];
      if (c >= 0) t.emplace_back(r, c, it.value());
      else rhs[r] -= it.value() * bound;
    }
  }
  SparseMatrix aff(nf, nf);
  aff.setFromTriplets(t.begin(), t.end());
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(aff);
  if (ldlt.info() != Eigen::Success) throw NumericalError("obstacle: free block is not positive definite");
  const Vector x = ldlt.solve(rhs);
  for (Index i = 0; i < n; ++i) {
    const Index r = map[static_cast<std::size_t>(i)];
    if (r >= 0) phi[i] = x[r];
  }
  return phi;
}

double obstacle_residual(const ObstacleProblem& p, const Vector& phi) {
  const std::vector<char> mask = constraint_mask(p);
  const Vector g = p.quadratic * phi;
  const Vector d = p.quadratic.diagonal();
  double r = 0.0;
  for (Index i = 0; i < phi.size(); ++i) {
    double step = phi[i] - g[i] / d[i];
    if (mask[static_cast<std::size_t>(i)]) step = std::max(step, p.bound);
    r = std::max(r, std::abs(step - phi[i]));
  }
  return r;
}

ObstacleSolution solve_obstacle(const ObstacleProblem& p, const ObstacleOptions& opt) {
  const SparseMatrix& a = p.quadratic;
  const Index n = a.rows();
  if (a.cols() != n || n == 0) throw InvalidArgument("obstacle: quadratic must be square and nonempty");
  if (p.constraint_nodes.empty()) throw InvalidArgument("obstacle: empty constraint set");
  if (!(opt.tol > 0.0)) throw InvalidArgument("obstacle: tol must be positive");
  if (!(opt.relaxation > 0.0 && opt.relaxation < 2.0)) throw InvalidArgument("obstacle: relaxation must lie in (0,2)");
  const std::vector<char> mask = constraint_mask(p);
  const Vector diag = a.diagonal();
  for (Index i = 0; i < n; ++i) {
    if (!(diag[i] > 0.0)) throw InvalidArgument("obstacle: quadratic needs a positive diagonal");
  }
  const long max_iter = opt.max_iter > 0 ? opt.max_iter : 50L * n;

  // Row access for Gauss-Seidel; A is symmetric so columns serve as rows.
  Vector phi = Vector::Zero(n);
  for (Index i : p.constraint_nodes) phi[i] = p.bound;

  ObstacleSolution sol;
  sol.method = "psor";
  double window_start = std::numeric_limits<double>::infinity();
  bool stalled = false;
  long it = 0;
  double res = std::numeric_limits<double>::infinity();
  for (; it < max_iter; ++it) {
    res = 0.0;
    for (Index i = 0; i < n; ++i) {
      double s = 0.0;
      for (SparseMatrix::InnerIterator e(a, i); e; ++e) {
        if (e.row() != i) s += e.value() * phi[e.row()];
      }
      const double gs = -s / diag[i];
      double next = phi[i] + opt.relaxation * (gs - phi[i]);
      if (mask[static_cast<std::size_t>(i)]) next = std::max(next, p.bound);
      res = std::max(res, std::abs(next - phi[i]));
      phi[i] = next;
    }
    if (res < opt.tol) {
      ++it;
      break;
    }
    if ((it + 1) % opt.stall_window == 0) {
      if (res > opt.stall_ratio * window_start) {
        stalled = true;
        ++it;
        break;
      }
      window_start = res;
    }
  }
  sol.iterations = it;

  // Active-set phase: primal-dual updates starting from the PSOR estimate.
  Vector grad = a * phi;
  std::vector<Index> act = active_of(p, phi, grad, mask);
  if (act.empty()) act = p.constraint_nodes;
  std::sort(act.begin(), act.end());
  act.erase(std::unique(act.begin(), act.end()), act.end());
  Vector best = phi;
  double best_res = obstacle_residual(p, phi);
  for (int k = 0; k < 100; ++k) {
    const Vector cand = solve_with_active_set(a, act, p.bound);
    const Vector g = a * cand;
    std::vector<Index> next;
    for (Index i = 0; i < n; ++i) {
      if (!mask[static_cast<std::size_t>(i)]) continue;
      const bool was = std::binary_search(act.begin(), act.end(), i);
      // Multiplier of the bound is 2 (A phi)_i on the active set.
      if ((was && g[i] >= 0.0) || (!was && cand[i] < p.bound)) next.push_back(i);
    }
    const double r = obstacle_residual(p, cand);
    if (r < best_res) {
      best = cand;
      best_res = r;
    }
    if (next == act) break;
    act = std::move(next);
  }
  if (stalled || best_res < obstacle_residual(p, phi)) sol.method = stalled ? "psor+active_set" : "psor+polish";

  sol.minimizer = best;
  sol.residual = best_res;
  sol.converged = best_res < opt.tol;
  sol.value = best.dot(a * best);
  for (Index i : p.constraint_nodes) {
    if (best[i] - p.bound <= 1e-9 * std::max(1.0, std::abs(p.bound))) sol.active_set.push_back(i);
  }
  std::sort(sol.active_set.begin(), sol.active_set.end());
  sol.active_set.erase(std::unique(sol.active_set.begin(), sol.active_set.end()), sol.active_set.end());
  return sol;
}

}  // namespace dcl
