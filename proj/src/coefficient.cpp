#include "dcl/coefficient.hpp"

#include "dcl/format.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dcl {

namespace {

double parse_number(std::string_view s) {
  std::string text(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("coefficient: cannot parse number '" + text + "'");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size()) throw InvalidArgument("coefficient: trailing text in '" + text + "'");
  return v;
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    out.push_back(parse_number(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void require_nonnegative(const std::vector<double>& v, const char* what) {
  for (double c : v) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw InvalidArgument(std::string("coefficient: ") + what + " values must be finite and >= 0");
    }
  }
}

}  // namespace

CoefficientSpec CoefficientSpec::constant(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw InvalidArgument("coefficient: constant value must be finite and >= 0");
  }
  CoefficientSpec s;
  s.family_ = CoefficientFamily::constant;
  s.parameter_ = value;
  return s;
}

CoefficientSpec CoefficientSpec::power_law(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("coefficient: power-law exponent must be finite and >= 0");
  }
  CoefficientSpec s;
  s.family_ = CoefficientFamily::power_law;
  s.parameter_ = alpha;
  return s;
}

CoefficientSpec CoefficientSpec::piecewise(std::vector<double> breaks, std::vector<double> values) {
  if (values.size() != breaks.size() + 1) {
    throw InvalidArgument("coefficient: piecewise needs one more value than breakpoints");
  }
  if (!std::is_sorted(breaks.begin(), breaks.end()) ||
      std::adjacent_find(breaks.begin(), breaks.end()) != breaks.end()) {
    throw InvalidArgument("coefficient: piecewise breakpoints must be strictly increasing");
  }
  require_nonnegative(values, "piecewise");
  CoefficientSpec s;
  s.family_ = CoefficientFamily::piecewise;
  s.breaks_ = std::move(breaks);
  s.values_ = std::move(values);
  return s;
}

CoefficientSpec CoefficientSpec::table(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("coefficient: empty table");
  require_nonnegative(values, "table");
  CoefficientSpec s;
  s.family_ = CoefficientFamily::table;
  s.values_ = std::move(values);
  return s;
}

CoefficientSpec CoefficientSpec::scaled(double factor) const {
  if (!(factor >= 0.0) || !std::isfinite(factor)) {
    throw InvalidArgument("coefficient: scale factor must be finite and >= 0");
  }
  CoefficientSpec s = *this;
  s.scale_ *= factor;
  return s;
}

CoefficientSpec CoefficientSpec::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);

  if (const auto star = text.find('*'); star != std::string_view::npos) {
    return parse(text.substr(star + 1)).scaled(parse_number(text.substr(0, star)));
  }
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidArgument("coefficient: expected '<family>:<parameters>', got '" + std::string(text) + "'");
  }
  const std::string_view family = text.substr(0, colon);
  const std::string_view args = text.substr(colon + 1);
  if (family == "constant") return constant(parse_number(args));
  if (family == "power_law") return power_law(parse_number(args));
  if (family == "table") return table(parse_list(args));
  if (family == "piecewise") {
    const auto semi = args.find(';');
    if (semi == std::string_view::npos) {
      throw InvalidArgument("coefficient: piecewise needs '<breaks>;<values>'");
    }
    return piecewise(parse_list(args.substr(0, semi)), parse_list(args.substr(semi + 1)));
  }
  throw InvalidArgument("coefficient: unknown family '" + std::string(family) + "'");
}

std::string CoefficientSpec::tag() const {
  std::string base;
  switch (family_) {
    case CoefficientFamily::constant: base = "constant:" + format_number(parameter_); break;
    case CoefficientFamily::power_law: base = "power_law:" + format_number(parameter_); break;
    case CoefficientFamily::piecewise: base = "piecewise:" + format_list(breaks_) + ";" + format_list(values_); break;
    case CoefficientFamily::table: base = "table:" + format_list(values_); break;
  }
  if (scale_ != 1.0) return format_number(scale_) + "*" + base;
  return base;
}

double CoefficientSpec::value_at(double x) const {
  switch (family_) {
    case CoefficientFamily::constant: return scale_ * parameter_;
    case CoefficientFamily::power_law: return scale_ * std::pow(std::abs(x), parameter_);
    case CoefficientFamily::piecewise: {
      const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
      return scale_ * values_[static_cast<std::size_t>(it - breaks_.begin())];
    }
    case CoefficientFamily::table: break;
  }
  throw InvalidArgument("coefficient: table families have no pointwise value");
}

CoefficientField CoefficientSpec::evaluate(const Mesh& mesh) const {
  CoefficientField field;
  field.family = family_;
  field.tag = tag();
  if (family_ == CoefficientFamily::table) {
    if (values_.size() != mesh.num_elements()) {
      throw InvalidArgument("coefficient: table has " + std::to_string(values_.size()) +
                            " values for " + std::to_string(mesh.num_elements()) + " elements");
    }
    field.values = values_;
    for (double& c : field.values) c *= scale_;
    return field;
  }
  field.values.resize(mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) field.values[e] = value_at(mesh.midpoint(e));
  return field;
}

}  // namespace dcl
