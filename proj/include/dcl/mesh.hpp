#pragma once

#include "dcl/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dcl {

enum class GradingKind { uniform, geometric };

/// Node distribution for build_mesh. Geometric grading clusters nodes toward
/// each listed point: element lengths grow by `ratio` moving away from it.
struct Grading {
  GradingKind kind = GradingKind::uniform;
  double ratio = 1.1;
  std::vector<double> points;

  static Grading uniform() { return {}; }
  static Grading geometric(double ratio, std::vector<double> points) {
    return {GradingKind::geometric, ratio, std::move(points)};
  }
};

/// Partition of a closed interval into consecutive elements.
class Mesh {
 public:
  /// Takes ownership of strictly increasing node coordinates (at least 3).
  explicit Mesh(std::vector<double> nodes);

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_elements() const { return nodes_.size() - 1; }

  double node(std::size_t i) const { return nodes_[i]; }
  double element_length(std::size_t e) const { return nodes_[e + 1] - nodes_[e]; }
  double midpoint(std::size_t e) const { return 0.5 * (nodes_[e] + nodes_[e + 1]); }
  double lo() const { return nodes_.front(); }
  double hi() const { return nodes_.back(); }
  Interval domain() const { return {lo(), hi()}; }

  double min_element_length() const;
  double max_element_length() const;

  std::span<const double> nodes() const { return nodes_; }

  friend bool operator==(const Mesh&, const Mesh&) = default;

 private:
  std::vector<double> nodes_;
};

Mesh build_mesh(Interval domain, int n_elements, const Grading& grading = Grading::uniform());

}  // namespace dcl
