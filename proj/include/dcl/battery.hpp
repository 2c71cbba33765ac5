#pragma once

#include "dcl/mesh.hpp"

#include <functional>
#include <string>
#include <vector>

namespace dcl {

struct TestFunction {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> derivative;  // a.e.
  bool smooth = true;
};

/// {1, x, x^2, sin(pi x), |x|, hats at -1/2 and 1/2 of half-width 1/4}.
std::vector<TestFunction> standard_battery();

/// Nodal samples on the full mesh, one vector per function.
std::vector<Vector> sample(const Mesh& mesh, const std::vector<TestFunction>& battery);
Vector sample(const Mesh& mesh, const std::function<double(double)>& f);

}  // namespace dcl
