#pragma once

#include "dcl/extrapolation.hpp"
#include "dcl/form.hpp"
#include "dcl/obstacle.hpp"
#include "dcl/region.hpp"

#include <functional>
#include <string>
#include <vector>

namespace dcl {

struct CapacityOptions {
  double tol = 1e-10;
  double zero_threshold = 1e-4;
  int min_nodes = 2;       // neighbourhoods with fewer constrained nodes are skipped
  double relaxation = 1.6;
};

struct NeighbourhoodValue {
  std::size_t index = 0;
  double epsilon = 0.0;
  Index constrained_nodes = 0;
  bool skipped = false;
  double value = 0.0;
  double residual = 0.0;
  bool converged = true;
  std::string method;
};

struct CapacityEstimate {
  std::vector<NeighbourhoodValue> neighbourhoods;
  std::vector<Vector> minimizers;  // full-mesh frame, one per solved neighbourhood
  TailExtrapolation tail;
  std::vector<std::string> warnings;

  double limit() const { return tail.limit; }
  /// Values of the solved (not skipped) neighbourhoods, in schedule order.
  std::vector<double> values() const;
};

/// cap_omega(A): graph-norm obstacle problems with phi >= 1 on the nodes of
/// V_k intersected with omega, for each radius of the schedule (default
/// radii when the region lists none).
CapacityEstimate relative_capacity(const FormPair& form, const RegionSpec& region,
                                   const CapacityOptions& options = {});

/// cap(A) with omega the whole space.
CapacityEstimate capacity(const FormPair& form, const TargetSet& target, const CapacityOptions& options = {});

enum class CapacityVerdict { zero, positive, inconclusive };
std::string to_string(CapacityVerdict v);

struct SweepLevel {
  int n_elements = 0;
  double h = 0.0;
  CapacityEstimate estimate;
};

struct SweepResult {
  std::vector<SweepLevel> levels;
  TailExtrapolation tail;
  CapacityVerdict verdict = CapacityVerdict::inconclusive;

  std::vector<double> level_values() const;
};

using FormFamily = std::function<FormPair(int n_elements)>;

/// Per-level extrapolated capacities, their extrapolated limit and verdict.
SweepResult refinement_sweep(const FormFamily& family, const std::vector<int>& levels, const RegionSpec& region,
                             const CapacityOptions& options = {}, int threads = 1);

/// zero: limit below the threshold with decaying values (or all zero);
/// positive: limit above 10x the threshold and the last two levels within 5%.
CapacityVerdict classify_sweep(const std::vector<double>& level_values, const TailExtrapolation& tail,
                               double zero_threshold);

}  // namespace dcl
