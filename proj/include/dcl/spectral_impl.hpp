#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace dcl {

template <class Apply>
double lanczos_largest(Index n, Apply&& apply, int max_steps, double rel_tol) {
  if (n <= 0) return 0.0;
  const int steps = static_cast<int>(std::min<Index>(n, max_steps));
  Matrix q(n, steps + 1);
  // Deterministic start with components along every coordinate.
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = 1.0 + 0.25 * std::sin(1.7 * static_cast<double>(i) + 0.3);
  q.col(0) = v / v.norm();
  std::vector<double> alpha, beta;
  double previous = -1.0;
  double estimate = 0.0;
  for (int j = 0; j < steps; ++j) {
    Vector w = apply(Vector(q.col(j)));
    const double a = q.col(j).dot(w);
    alpha.push_back(a);
    w -= a * q.col(j);
    if (j > 0) w -= beta.back() * q.col(j - 1);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) w -= q.col(i).dot(w) * q.col(i);
    }
    const double b = w.norm();
    const int m = j + 1;
    Matrix t = Matrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(t, Eigen::EigenvaluesOnly);
    estimate = es.eigenvalues().maxCoeff();
    if (b <= 1e-14 * std::max(1.0, std::abs(estimate))) break;
    if (previous >= 0.0 && std::abs(estimate - previous) <= rel_tol * std::max(std::abs(estimate), 1e-300)) break;
    previous = estimate;
    beta.push_back(b);
    q.col(j + 1) = w / b;
  }
  return std::max(estimate, 0.0);
}

}  // namespace dcl
