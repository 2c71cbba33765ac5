#pragma once

#include "dcl/capacity.hpp"
#include "dcl/coefficient.hpp"
#include "dcl/extrapolation.hpp"
#include "dcl/form.hpp"
#include "dcl/region.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dcl {

enum class Truth { holds, fails, inconclusive };
std::string to_string(Truth t);

struct Thresholds {
  double true_below = 1e-4;
  double false_above = 1e-2;
  double zero_threshold = 1e-4;  // capacity
  double tol_capacity = 1e-10;
  double tol_pos = 1e-9;
};

Truth threshold(double value, const Thresholds& th);
Truth truth_of(CapacityVerdict v);

/// One runnable configuration: a coefficient family on a domain, an open
/// set, and the mesh levels and times at which it is measured.
struct Scenario {
  std::string id;
  std::string description;
  Interval domain{-1.0, 1.0};
  CoefficientSpec coefficient = CoefficientSpec::constant(1.0);
  RegionSpec region{OpenSet::whole(), TargetSet::parse("boundary"), {}};
  std::vector<int> levels{256, 512, 1024};
  std::vector<double> times{0.01, 0.05, 0.1, 0.5};
  MassKind mass = MassKind::lumped;
  Grading grading;

  // Expected truth of conditions I (conservative), II (invariant) and
  // III (zero capacity); Dirichlet/Neumann coincidence follows III.
  std::optional<bool> expect_conservative;
  std::optional<bool> expect_invariant;
  std::optional<bool> expect_capacity_zero;
  std::string expect_source;  // trivial | oracle | theorem

  void validate() const;
  FormPair free_form(int n_elements) const;
};

struct Check {
  std::string name;
  bool passed = false;
  bool informational = false;
  std::string detail;
};

struct Condition {
  std::string name;
  std::string measure;
  std::vector<double> per_level;
  TailExtrapolation tail;
  Truth truth = Truth::inconclusive;
};

struct LevelRecord {
  int n_elements = 0;
  double h = 0.0;
  std::vector<std::pair<std::string, double>> quantities;

  double get(const std::string& key) const;
};

struct VerdictReport {
  std::string scenario_id;
  std::string operation;
  std::vector<LevelRecord> levels;
  std::vector<Condition> conditions;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  bool failed() const;
  bool inconclusive() const;
  const Condition* condition(const std::string& name) const;
  const Check* check(const std::string& name) const;
};

/// Per-level measurements shared by both equivalence theorems.
struct ScenarioMeasurements {
  Scenario scenario;
  std::vector<LevelRecord> levels;
  SweepResult capacity;
};

ScenarioMeasurements measure(const Scenario& s, const Thresholds& th = {}, int threads = 1);

/// Conditions I (S^D conservative), II (S leaves L2(omega) invariant, i.e.
/// S = S^D on it) and III (cap_omega(boundary) = 0) with the implication
/// checks I=>II=>III, II=>I when S is conservative, and III=>II.
VerdictReport theorem_1_1_report(const ScenarioMeasurements& m, const Thresholds& th = {});
VerdictReport run_theorem_1_1(const Scenario& s, const Thresholds& th = {}, int threads = 1);

/// Zero capacity of the boundary against S^D = S^N on L2(omega).
VerdictReport theorem_3_7_report(const ScenarioMeasurements& m, const Thresholds& th = {});
VerdictReport run_theorem_3_7(const Scenario& s, const Thresholds& th = {}, int threads = 1);

/// Degenerate-left form on (-8, 8) with omega = (0, inf).
VerdictReport run_halfline_counterexample(const Thresholds& th = {}, std::vector<int> levels = {1024, 2048, 4096},
                                          int threads = 1);

/// omega = (-1,0) U (0,1) inside X = (-1,1) with the Laplacian.
VerdictReport run_disjoint_interval(const Thresholds& th = {}, std::vector<int> levels = {512, 1024, 2048},
                                    int threads = 1);

/// Given c1 <= a c2 elementwise on omega (checked), zero capacity for the
/// second scenario must come with a vanishing S^D defect for the first.
VerdictReport run_comparison_criterion(const Scenario& first, const Scenario& second, double a,
                                       const Thresholds& th = {}, int threads = 1);

/// Coefficient families x open sets used by the consistency suites.
std::vector<Scenario> scenario_catalog();
std::optional<Scenario> find_scenario(const std::string& id);

/// Names accepted by verify besides catalog ids.
std::vector<std::string> special_scenarios();

}  // namespace dcl
