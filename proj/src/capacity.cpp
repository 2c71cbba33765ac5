#include "dcl/capacity.hpp"

#include "dcl/format.hpp"
#include "dcl/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace dcl {

int thread_budget() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("DCL_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) return std::min(cap, hw);
  }
  return hw;
}

std::vector<double> CapacityEstimate::values() const {
  std::vector<double> v;
  for (const auto& n : neighbourhoods) {
    if (!n.skipped) v.push_back(n.value);
  }
  return v;
}

std::vector<double> SweepResult::level_values() const {
  std::vector<double> v;
  for (const auto& l : levels) v.push_back(l.estimate.limit());
  return v;
}

std::string to_string(CapacityVerdict v) {
  switch (v) {
    case CapacityVerdict::zero: return "zero";
    case CapacityVerdict::positive: return "positive";
    case CapacityVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

CapacityEstimate relative_capacity(const FormPair& form, const RegionSpec& region, const CapacityOptions& opt) {
  const Mesh& mesh = form.mesh;
  region.validate(mesh.domain());
  const TargetSet target = region.target.resolved(region.omega, mesh.domain());
  const std::vector<double> radii = region.radii.empty() ? default_radii(mesh) : region.radii;

  CapacityEstimate est;
  const SparseMatrix a = form.graph_matrix();
  ObstacleOptions oo;
  oo.tol = opt.tol;
  oo.relaxation = opt.relaxation;

  for (std::size_t k = 0; k < radii.size(); ++k) {
    NeighbourhoodValue nv;
    nv.index = k;
    nv.epsilon = radii[k];
    if (target.empty()) {
      nv.method = "empty_target";
      est.neighbourhoods.push_back(nv);
      est.minimizers.push_back(Vector::Zero(static_cast<Index>(mesh.num_nodes())));
      continue;
    }
    ObstacleProblem prob{a, {}, 1.0};
    for (Index j = 0; j < form.size(); ++j) {
      const double x = mesh.node(static_cast<std::size_t>(form.active_nodes[static_cast<std::size_t>(j)]));
      if (region.omega.contains(x) && in_neighbourhood(target, radii[k], x)) prob.constraint_nodes.push_back(j);
    }
    nv.constrained_nodes = static_cast<Index>(prob.constraint_nodes.size());
    if (nv.constrained_nodes < opt.min_nodes) {
      nv.skipped = true;
      est.warnings.push_back("neighbourhood " + std::to_string(k) + " (eps=" + format_number(radii[k]) + ") has " +
                             std::to_string(nv.constrained_nodes) + " constrained nodes; skipped");
      est.neighbourhoods.push_back(nv);
      continue;
    }
    const ObstacleSolution sol = solve_obstacle(prob, oo);
    nv.value = sol.value;
    nv.residual = sol.residual;
    nv.converged = sol.converged;
    nv.method = sol.method;
    if (!sol.converged) {
      est.warnings.push_back("neighbourhood " + std::to_string(k) + ": obstacle residual " +
                             format_number(sol.residual) + " above tolerance");
    }
    est.neighbourhoods.push_back(nv);
    est.minimizers.push_back(form.extend_by_zero(sol.minimizer));
  }

  const std::vector<double> vals = est.values();
  if (vals.empty()) {
    throw InvalidArgument("capacity: no neighbourhood resolved by the mesh; need element length below " +
                          format_number(radii.front() / opt.min_nodes) + " near the target");
  }
  for (std::size_t i = 1; i < vals.size(); ++i) {
    if (vals[i] > vals[i - 1] * (1 + 1e-12) + opt.tol) {
      est.warnings.push_back("capacity increased along the neighbourhood schedule at step " + std::to_string(i));
    }
  }
  est.tail = richardson_tail(vals, opt.zero_threshold);
  return est;
}

CapacityEstimate capacity(const FormPair& form, const TargetSet& target, const CapacityOptions& opt) {
  RegionSpec region;
  region.omega = OpenSet::whole();
  region.target = target;
  return relative_capacity(form, region, opt);
}

CapacityVerdict classify_sweep(const std::vector<double>& v, const TailExtrapolation& tail, double zero_threshold) {
  if (v.empty()) return CapacityVerdict::inconclusive;
  const bool all_zero = std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  if (all_zero) return CapacityVerdict::zero;
  const std::size_t n = v.size();
  if (tail.limit < zero_threshold) {
    bool decaying = true;
    for (std::size_t i = 1; i < n; ++i) decaying = decaying && v[i] < v[i - 1];
    if (decaying && (v.back() == 0.0 || (tail.extrapolated && tail.exponent > 0.0))) return CapacityVerdict::zero;
    return CapacityVerdict::inconclusive;
  }
  if (tail.limit > 10 * zero_threshold && n >= 2 && v.back() > 0.0 &&
      std::abs(v[n - 1] - v[n - 2]) <= 0.05 * v.back()) {
    return CapacityVerdict::positive;
  }
  return CapacityVerdict::inconclusive;
}

SweepResult refinement_sweep(const FormFamily& family, const std::vector<int>& levels, const RegionSpec& region,
                             const CapacityOptions& opt, int threads) {
  if (levels.size() < 3) throw InvalidArgument("refinement_sweep: at least 3 mesh levels required");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] <= levels[i - 1]) throw InvalidArgument("refinement_sweep: levels must strictly increase");
  }
  SweepResult out;
  out.levels.resize(levels.size());
  parallel_for(levels.size(), threads, [&](std::size_t i) {
    const FormPair form = family(levels[i]);
    out.levels[i] = {levels[i], form.mesh.max_element_length(), relative_capacity(form, region, opt)};
  });
  const std::vector<double> v = out.level_values();
  out.tail = richardson_tail(v, opt.zero_threshold);
  out.verdict = classify_sweep(v, out.tail, opt.zero_threshold);
  return out;
}

}  // namespace dcl
