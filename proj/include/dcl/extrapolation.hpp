#pragma once

#include <vector>

namespace dcl {

/// Geometric-tail extrapolation from the last three terms a, b, c of a
/// sequence. With r = (b - c)/(a - b) in (0, max_ratio], the limit is
/// c - (b - c) r / (1 - r) and the decay exponent is -log2 r; otherwise the
/// last term is reported unextrapolated.
struct TailExtrapolation {
  double limit = 0.0;
  double ratio = 0.0;
  double exponent = 0.0;
  bool extrapolated = false;
  bool clamped = false;  // limit below zero_threshold reported as 0
};

TailExtrapolation richardson_tail(const std::vector<double>& values, double zero_threshold = 1e-4,
                                  double max_ratio = 0.8);

/// Least-squares fit y = C x^p on log-log axes; returns {C, p}.
struct PowerFit {
  double constant = 0.0;
  double exponent = 0.0;
};
PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dcl
