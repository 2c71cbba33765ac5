#pragma once

#include "dcl/mesh.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace dcl {

/// Finite union of disjoint open intervals. Endpoints may be infinite, so
/// "(-inf,inf)" is the whole line and "(0,inf)" a half-line.
class OpenSet {
 public:
  OpenSet() = default;
  explicit OpenSet(std::vector<Interval> intervals);

  static OpenSet whole();
  /// Parses "(a,b)" pieces joined by 'U', e.g. "(-inf,0)U(0,inf)".
  static OpenSet parse(std::string_view text);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  bool is_whole() const;

  bool contains(double x) const;
  bool closure_contains(double x) const;
  /// Distance from x to the complement (0 outside the set, inf for the whole line).
  double distance_to_complement(double x) const;
  /// Finite endpoints lying in the closed interval `domain`, sorted and unique.
  std::vector<double> boundary_points(Interval domain) const;
  bool meets(Interval domain) const;

  std::string text() const;

  friend bool operator==(const OpenSet&, const OpenSet&) = default;

 private:
  std::vector<Interval> intervals_;
};

/// Finite union of points and closed intervals. The keyword "boundary" defers
/// to the boundary of the accompanying open set.
class TargetSet {
 public:
  TargetSet() = default;

  static TargetSet points(std::vector<double> pts);
  static TargetSet intervals(std::vector<Interval> pieces);
  static TargetSet boundary_of(const OpenSet& omega, Interval domain);
  /// Accepts "{}", "{0}", "{-1,1}", "[a,b]", unions with 'U', and "boundary".
  static TargetSet parse(std::string_view text);

  bool empty() const { return pieces_.empty() && !boundary_keyword_; }
  bool is_boundary_keyword() const { return boundary_keyword_; }
  /// Pieces as closed intervals; points have lo == hi.
  const std::vector<Interval>& pieces() const { return pieces_; }

  /// Replaces the "boundary" keyword by the actual boundary points.
  TargetSet resolved(const OpenSet& omega, Interval domain) const;
  double distance(double x) const;
  double measure() const;
  std::string text() const;

  friend bool operator==(const TargetSet&, const TargetSet&) = default;

 private:
  std::vector<Interval> pieces_;
  bool boundary_keyword_ = false;
};

/// Open set, target inside its closure, and decreasing neighbourhood radii.
struct RegionSpec {
  OpenSet omega = OpenSet::whole();
  TargetSet target;
  std::vector<double> radii;

  /// Checks omega meets the domain, the target lies in closure(omega) and
  /// the radii strictly decrease to positive values.
  void validate(Interval domain) const;
};

/// eps_k = eps0 * 2^-k for k = 0..steps-1.
std::vector<double> halving_radii(double eps0, int steps);

/// Default schedule: 6 halvings starting 10 elements wide.
std::vector<double> default_radii(const Mesh& mesh);

/// Open neighbourhood {x : dist(x, A) < eps}.
bool in_neighbourhood(const TargetSet& target, double eps, double x);

}  // namespace dcl
