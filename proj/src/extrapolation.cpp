#include "dcl/extrapolation.hpp"

#include "dcl/types.hpp"

#include <cmath>

namespace dcl {

TailExtrapolation richardson_tail(const std::vector<double>& values, double zero_threshold, double max_ratio) {
  if (values.empty()) throw InvalidArgument("richardson_tail: empty sequence");
  TailExtrapolation t;
  const std::size_t n = values.size();
  t.limit = values.back();
  if (n >= 3) {
    const double a = values[n - 3], b = values[n - 2], c = values[n - 1];
    if (a != b) {
      const double r = (b - c) / (a - b);
      t.ratio = r;
      if (r > 0.0 && r <= max_ratio) {
        t.limit = c - (b - c) * r / (1.0 - r);
        t.exponent = -std::log2(r);
        t.extrapolated = true;
      }
    }
  }
  if (t.limit < zero_threshold) {
    t.clamped = t.limit != 0.0;
    t.limit = 0.0;
  }
  return t;
}

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit_power_law: need >= 2 matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("fit_power_law: data must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double p = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {std::exp((sy - p * sx) / n), p};
}

}  // namespace dcl
