#pragma once

#include <string>
#include <vector>

namespace dcl {

/// Fixed 12-significant-digit rendering used for every emitted number.
std::string format_number(double x);

/// Comma-joined format_number values.
std::string format_list(const std::vector<double>& values);

/// Rounds to the value that format_number prints.
double round12(double x);

}  // namespace dcl
