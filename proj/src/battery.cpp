#include "dcl/battery.hpp"

#include <cmath>
#include <numbers>

namespace dcl {

namespace {

TestFunction hat(double center, double half_width) {
  const std::string name = center < 0 ? "hat_minus" : "hat_plus";
  return {name,
          [=](double x) { return std::max(0.0, 1.0 - std::abs(x - center) / half_width); },
          [=](double x) {
            if (std::abs(x - center) >= half_width) return 0.0;
            return x < center ? 1.0 / half_width : -1.0 / half_width;
          },
          false};
}

}  // namespace

std::vector<TestFunction> standard_battery() {
  using std::numbers::pi;
  return {
      {"one", [](double) { return 1.0; }, [](double) { return 0.0; }, true},
      {"x", [](double x) { return x; }, [](double) { return 1.0; }, true},
      {"x2", [](double x) { return x * x; }, [](double x) { return 2 * x; }, true},
      {"sin_pi_x", [](double x) { return std::sin(pi * x); }, [](double x) { return pi * std::cos(pi * x); }, true},
      {"abs_x", [](double x) { return std::abs(x); }, [](double x) { return x < 0 ? -1.0 : 1.0; }, false},
      hat(-0.5, 0.25),
      hat(0.5, 0.25),
  };
}

Vector sample(const Mesh& mesh, const std::function<double(double)>& f) {
  Vector v(static_cast<Index>(mesh.num_nodes()));
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) v[static_cast<Index>(i)] = f(mesh.node(i));
  return v;
}

std::vector<Vector> sample(const Mesh& mesh, const std::vector<TestFunction>& battery) {
  std::vector<Vector> out;
  out.reserve(battery.size());
  for (const auto& tf : battery) out.push_back(sample(mesh, tf.f));
  return out;
}

}  // namespace dcl
