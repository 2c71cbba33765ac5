#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include "dcl/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

/// Minimum of phi^T A phi with phi >= 1 on `constrained`, by trying every
/// subset of constrained nodes as the active set.
inline double enumerate_obstacle(const dcl::Matrix& a, const std::vector<dcl::Index>& constrained) {
  const auto n = a.rows();
  const std::size_t m = constrained.size();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
    std::vector<bool> fixed(static_cast<std::size_t>(n), false);
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (1ul << j)) fixed[static_cast<std::size_t>(constrained[j])] = true;
    }
    std::vector<dcl::Index> free_idx, fix_idx;
    for (dcl::Index i = 0; i < n; ++i) (fixed[static_cast<std::size_t>(i)] ? fix_idx : free_idx).push_back(i);
    dcl::Vector phi = dcl::Vector::Zero(n);
    for (auto i : fix_idx) phi[i] = 1.0;
    if (!free_idx.empty()) {
      const auto nf = static_cast<dcl::Index>(free_idx.size());
      dcl::Matrix aff(nf, nf);
      dcl::Vector rhs = dcl::Vector::Zero(nf);
      for (dcl::Index r = 0; r < nf; ++r) {
        for (dcl::Index c = 0; c < nf; ++c) aff(r, c) = a(free_idx[static_cast<std::size_t>(r)], free_idx[static_cast<std::size_t>(c)]);
        for (auto j : fix_idx) rhs[r] -= a(free_idx[static_cast<std::size_t>(r)], j);
      }
      const dcl::Vector x = aff.ldlt().solve(rhs);
      for (dcl::Index r = 0; r < nf; ++r) phi[free_idx[static_cast<std::size_t>(r)]] = x[r];
    }
    bool feasible = true;
    for (auto i : constrained) feasible = feasible && phi[i] >= 1.0 - 1e-12;
    if (feasible) best = std::min(best, phi.dot(a * phi));
  }
  return best;
}

/// <1, S_t 1> for the Dirichlet Laplacian on (0,1): sum over odd k of
/// 8/(k pi)^2 exp(-(k pi)^2 t).
inline double dirichlet_unit_mass(double t) {
  double s = 0.0;
  for (int k = 1; k < 20001; k += 2) {
    const double kp = k * std::numbers::pi;
    s += 8.0 / (kp * kp) * std::exp(-kp * kp * t);
  }
  return s;
}

/// Value at x of S_t 1 for the Dirichlet Laplacian on (0,1).
inline double dirichlet_unit_value(double t, double x) {
  double s = 0.0;
  for (int k = 1; k < 20001; k += 2) {
    const double kp = k * std::numbers::pi;
    s += 4.0 / kp * std::sin(kp * x) * std::exp(-kp * kp * t);
  }
  return s;
}

}  // namespace oracle
