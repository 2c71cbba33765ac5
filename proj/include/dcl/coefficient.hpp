#pragma once

#include "dcl/mesh.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace dcl {

enum class CoefficientFamily { constant, power_law, piecewise, table };

/// Per-element diffusion coefficient values on a specific mesh.
struct CoefficientField {
  std::vector<double> values;
  CoefficientFamily family = CoefficientFamily::table;
  std::string tag;
};

/// Mesh-independent description of a coefficient family.
///
/// Text form (used by config files and the CLI):
///   constant:<v>
///   power_law:<alpha>           |x|^alpha at element midpoints
///   piecewise:<b1>,..;<v0>,..   value v_i on [b_i, b_{i+1})
///   table:<c0>,<c1>,...         one value per element
///   <a>*<any of the above>      scaled by a
class CoefficientSpec {
 public:
  static CoefficientSpec constant(double value);
  static CoefficientSpec power_law(double alpha);
  static CoefficientSpec piecewise(std::vector<double> breaks, std::vector<double> values);
  static CoefficientSpec table(std::vector<double> values);
  static CoefficientSpec parse(std::string_view text);

  CoefficientSpec scaled(double factor) const;

  CoefficientFamily family() const { return family_; }
  double scale() const { return scale_; }
  std::string tag() const;

  /// Pointwise value; not available for table families.
  double value_at(double x) const;

  CoefficientField evaluate(const Mesh& mesh) const;

 private:
  CoefficientFamily family_ = CoefficientFamily::constant;
  double scale_ = 1.0;
  double parameter_ = 1.0;  // constant value or power-law exponent
  std::vector<double> breaks_;
  std::vector<double> values_;
};

}  // namespace dcl
