#include "dcl/form.hpp"

#include "dcl/format.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dcl {

namespace {

using Triplet = Eigen::Triplet<double>;

SparseMatrix principal_submatrix(const SparseMatrix& a, const std::vector<Index>& keep, Index full_size) {
  std::vector<Index> map(static_cast<std::size_t>(full_size), -1);
  for (std::size_t k = 0; k < keep.size(); ++k) map[static_cast<std::size_t>(keep[k])] = static_cast<Index>(k);
  std::vector<Triplet> t;
  for (Index col = 0; col < a.outerSize(); ++col) {
    const Index jc = map[static_cast<std::size_t>(col)];
    if (jc < 0) continue;
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      const Index ir = map[static_cast<std::size_t>(it.row())];
      if (ir >= 0) t.emplace_back(ir, jc, it.value());
    }
  }
  SparseMatrix out(static_cast<Index>(keep.size()), static_cast<Index>(keep.size()));
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

double frobenius_difference(const SparseMatrix& a, const SparseMatrix& b) {
  return SparseMatrix(a - b).norm();
}

// Antiderivative of min(1, u/delta) for u >= 0.
double plateau_integral(double u, double delta) {
  if (u <= 0.0) return 0.0;
  if (u < delta) return u * u / (2 * delta);
  return u - delta / 2;
}

// Integral of the plateau cutoff of component (l,r) over [p,q].
double component_integral(double p, double q, double l, double r, double delta) {
  p = std::max(p, l);
  q = std::min(q, r);
  if (!(p < q)) return 0.0;
  if (std::isinf(l) && std::isinf(r)) return q - p;
  double m;
  if (std::isinf(l)) m = -std::numeric_limits<double>::infinity();
  else if (std::isinf(r)) m = std::numeric_limits<double>::infinity();
  else m = 0.5 * (l + r);
  double total = 0.0;
  if (p < m) {
    const double qq = std::min(q, m);
    total += plateau_integral(qq - l, delta) - plateau_integral(p - l, delta);
  }
  if (q > m) {
    const double pp = std::max(p, m);
    total += plateau_integral(r - pp, delta) - plateau_integral(r - q, delta);
  }
  return total;
}

void check_free(const FormPair& form, const char* op) {
  if (!form.is_full()) {
    throw InvalidArgument(std::string(op) + ": needs the free form on the whole mesh");
  }
}

}  // namespace

SparseMatrix mass_matrix(const Mesh& mesh, MassKind kind) {
  const Index n = static_cast<Index>(mesh.num_nodes());
  std::vector<Triplet> t;
  t.reserve(4 * mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const double h = mesh.element_length(e);
    const Index i = static_cast<Index>(e);
    if (kind == MassKind::lumped) {
      t.emplace_back(i, i, h / 2);
      t.emplace_back(i + 1, i + 1, h / 2);
    } else {
      t.emplace_back(i, i, h / 3);
      t.emplace_back(i + 1, i + 1, h / 3);
      t.emplace_back(i, i + 1, h / 6);
      t.emplace_back(i + 1, i, h / 6);
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Vector lumped_weights(const Mesh& mesh) {
  Vector w = Vector::Zero(static_cast<Index>(mesh.num_nodes()));
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    w[static_cast<Index>(e)] += mesh.element_length(e) / 2;
    w[static_cast<Index>(e + 1)] += mesh.element_length(e) / 2;
  }
  return w;
}

double FormPair::energy(const Vector& phi) const {
  if (phi.size() != size()) throw InvalidArgument("energy: dimension mismatch");
  return phi.dot(stiffness * phi);
}

Vector FormPair::extend_by_zero(const Vector& active) const {
  if (active.size() != size()) throw InvalidArgument("extend_by_zero: dimension mismatch");
  Vector full = Vector::Zero(static_cast<Index>(mesh.num_nodes()));
  for (Index k = 0; k < size(); ++k) full[active_nodes[static_cast<std::size_t>(k)]] = active[k];
  return full;
}

Vector FormPair::restrict(const Vector& full) const {
  if (full.size() != static_cast<Index>(mesh.num_nodes())) throw InvalidArgument("restrict: dimension mismatch");
  Vector out(size());
  for (Index k = 0; k < size(); ++k) out[k] = full[active_nodes[static_cast<std::size_t>(k)]];
  return out;
}

void Cutoff::validate(const Mesh& mesh, const OpenSet& omega) const {
  if (values.size() != mesh.num_nodes()) throw InvalidArgument("cutoff: one value per mesh node required");
  const std::vector<Index> inside = dirichlet_nodes(mesh, omega);
  std::vector<char> allowed(mesh.num_nodes(), 0);
  for (Index i : inside) allowed[static_cast<std::size_t>(i)] = 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double c = values[i];
    if (!(c >= 0.0 && c <= 1.0)) {
      throw InvalidArgument("cutoff: value " + format_number(c) + " at node " + std::to_string(i) + " outside [0,1]");
    }
    if (c > 0.0 && !allowed[i]) {
      throw InvalidArgument("cutoff: nonzero at node " + std::to_string(i) + " (x=" + format_number(mesh.node(i)) +
                            ") whose support leaves omega");
    }
  }
}

FormPair assemble_elliptic(const Mesh& mesh, const CoefficientField& coeff, MassKind mass) {
  if (coeff.values.size() != mesh.num_elements()) {
    throw InvalidArgument("assemble_elliptic: coefficient has " + std::to_string(coeff.values.size()) +
                          " values for " + std::to_string(mesh.num_elements()) + " elements");
  }
  std::vector<double> conductance(mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const double c = coeff.values[e];
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw InvalidArgument("assemble_elliptic: coefficient " + format_number(c) + " on element " +
                            std::to_string(e) + " is not finite and nonnegative");
    }
    conductance[e] = c / mesh.element_length(e);
  }
  FormPair form{mesh, {}, mass_matrix(mesh, mass), {}, true, mass};
  form.stiffness = weighted_stiffness(mesh, conductance, std::vector<double>(mesh.num_elements(), 1.0));
  form.active_nodes.resize(mesh.num_nodes());
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) form.active_nodes[i] = static_cast<Index>(i);
  return form;
}

SparseMatrix weighted_stiffness(const Mesh& mesh, const std::vector<double>& conductance,
                                const std::vector<double>& weights) {
  if (conductance.size() != mesh.num_elements() || weights.size() != mesh.num_elements()) {
    throw InvalidArgument("weighted_stiffness: one conductance and weight per element required");
  }
  const Index n = static_cast<Index>(mesh.num_nodes());
  std::vector<Triplet> t;
  t.reserve(4 * mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const double k = conductance[e] * weights[e];
    const Index i = static_cast<Index>(e);
    // Keep the pattern even for zero weight so K_chi iterates share a structure.
    t.emplace_back(i, i, k);
    t.emplace_back(i + 1, i + 1, k);
    t.emplace_back(i, i + 1, -k);
    t.emplace_back(i + 1, i, -k);
  }
  SparseMatrix k(n, n);
  k.setFromTriplets(t.begin(), t.end());
  return k;
}

std::vector<double> element_conductance(const FormPair& free_form) {
  check_free(free_form, "element_conductance");
  std::vector<double> out(free_form.mesh.num_elements());
  for (std::size_t e = 0; e < out.size(); ++e) {
    out[e] = -free_form.stiffness.coeff(static_cast<Index>(e), static_cast<Index>(e + 1));
  }
  return out;
}

std::vector<Index> dirichlet_nodes(const Mesh& mesh, const OpenSet& omega) {
  std::vector<Index> nodes;
  const std::size_t n = mesh.num_nodes();
  for (std::size_t i = 0; i < n; ++i) {
    if (!omega.contains(mesh.node(i))) continue;
    if (i > 0 && !omega.closure_contains(mesh.node(i - 1))) continue;
    if (i + 1 < n && !omega.closure_contains(mesh.node(i + 1))) continue;
    // A neighbour on the far side of a gap of omega would put the hat outside.
    if (i > 0 && !omega.contains(mesh.midpoint(i - 1))) continue;
    if (i + 1 < n && !omega.contains(mesh.midpoint(i))) continue;
    nodes.push_back(static_cast<Index>(i));
  }
  return nodes;
}

FormPair restrict_dirichlet(const FormPair& form, const RegionSpec& region) {
  return restrict_dirichlet(form, region.omega);
}

FormPair restrict_dirichlet(const FormPair& form, const OpenSet& omega) {
  if (!omega.meets(form.mesh.domain())) {
    throw InvalidArgument("restrict_dirichlet: omega " + omega.text() + " does not meet the mesh domain");
  }
  const std::vector<Index> inside = dirichlet_nodes(form.mesh, omega);
  std::vector<Index> keep;  // positions within form.active_nodes
  std::vector<Index> nodes;
  std::size_t j = 0;
  for (std::size_t k = 0; k < form.active_nodes.size(); ++k) {
    while (j < inside.size() && inside[j] < form.active_nodes[k]) ++j;
    if (j < inside.size() && inside[j] == form.active_nodes[k]) {
      keep.push_back(static_cast<Index>(k));
      nodes.push_back(form.active_nodes[k]);
    }
  }
  if (keep.empty()) {
    throw InvalidArgument("restrict_dirichlet: no mesh node strictly inside omega " + omega.text() +
                          "; refine the mesh");
  }
  FormPair out = form;
  out.stiffness = principal_submatrix(form.stiffness, keep, form.size());
  out.mass = principal_submatrix(form.mass, keep, form.size());
  out.active_nodes = std::move(nodes);
  return out;
}

SparseMatrix truncated_form(const FormPair& form, const Vector& chi) {
  if (chi.size() != form.size()) {
    throw InvalidArgument("truncated_form: cutoff has " + std::to_string(chi.size()) + " values for " +
                          std::to_string(form.size()) + " active nodes");
  }
  const SparseMatrix& k = form.stiffness;
  const Vector kchi = k * chi;
  SparseMatrix out = 0.5 * (chi.asDiagonal() * k + k * chi.asDiagonal());
  for (Index i = 0; i < out.rows(); ++i) out.coeffRef(i, i) -= 0.5 * kchi[i];
  out.prune(0.0);
  return out;
}

std::vector<double> plateau_element_weights(const Mesh& mesh, const OpenSet& omega, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("plateau cutoff: margin must be positive");
  std::vector<double> w(mesh.num_elements(), 0.0);
  for (std::size_t e = 0; e < w.size(); ++e) {
    const double a = mesh.node(e), b = mesh.node(e + 1);
    double total = 0.0;
    for (const Interval& iv : omega.intervals()) total += component_integral(a, b, iv.lo, iv.hi, delta);
    w[e] = std::clamp(total / (b - a), 0.0, 1.0);
  }
  return w;
}

Cutoff plateau_cutoff(const Mesh& mesh, const OpenSet& omega, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("plateau cutoff: margin must be positive");
  Cutoff chi{std::vector<double>(mesh.num_nodes(), 0.0)};
  for (Index i : dirichlet_nodes(mesh, omega)) {
    const double d = omega.distance_to_complement(mesh.node(static_cast<std::size_t>(i)));
    chi.values[static_cast<std::size_t>(i)] = std::min(1.0, d / delta);
  }
  return chi;
}

NeumannResult neumann_form(const FormPair& free_form, const RegionSpec& region, const PlateauSchedule& schedule) {
  check_free(free_form, "neumann_form");
  const Mesh& mesh = free_form.mesh;
  if (!region.omega.meets(mesh.domain())) {
    throw InvalidArgument("neumann_form: omega " + region.omega.text() + " does not meet the mesh domain");
  }
  if (schedule.max_steps < 1 || !(schedule.tol > 0.0)) {
    throw InvalidArgument("neumann_form: need max_steps >= 1 and tol > 0");
  }
  const double delta0 = schedule.delta0 > 0.0 ? schedule.delta0 : 0.25 * mesh.domain().length();
  const std::vector<double> conductance = element_conductance(free_form);

  NeumannResult result{free_form, false, 0, 0.0, {}};
  SparseMatrix current = weighted_stiffness(mesh, conductance, plateau_element_weights(mesh, region.omega, delta0));
  std::vector<double> prev_w = plateau_element_weights(mesh, region.omega, delta0);
  for (int n = 1; n < schedule.max_steps; ++n) {
    const std::vector<double> w = plateau_element_weights(mesh, region.omega, std::ldexp(delta0, -n));
    for (std::size_t e = 0; e < w.size(); ++e) {
      if (w[e] < prev_w[e]) throw NumericalError("neumann_form: plateau weights decreased");
    }
    SparseMatrix next = weighted_stiffness(mesh, conductance, w);
    result.last_difference = frobenius_difference(next, current);
    result.steps = n + 1;
    result.previous = std::move(current);
    current = std::move(next);
    prev_w = w;
    if (result.last_difference < schedule.tol) {
      result.converged = true;
      break;
    }
  }
  result.form.stiffness = std::move(current);
  return result;
}

NeumannResult neumann_form(const FormPair& free_form, const RegionSpec& region, const std::vector<Cutoff>& schedule,
                           double tol) {
  check_free(free_form, "neumann_form");
  if (schedule.empty()) throw InvalidArgument("neumann_form: empty cutoff schedule");
  const Mesh& mesh = free_form.mesh;
  for (std::size_t n = 0; n < schedule.size(); ++n) {
    schedule[n].validate(mesh, region.omega);
    if (n == 0) continue;
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
      if (schedule[n].values[i] < schedule[n - 1].values[i]) {
        throw InvalidArgument("neumann_form: cutoff schedule decreases at step " + std::to_string(n) + ", node " +
                              std::to_string(i));
      }
    }
  }
  auto k_of = [&](const Cutoff& c) {
    return truncated_form(free_form, Eigen::Map<const Vector>(c.values.data(), static_cast<Index>(c.values.size())));
  };
  NeumannResult result{free_form, false, 1, 0.0, {}};
  SparseMatrix current = k_of(schedule.front());
  for (std::size_t n = 1; n < schedule.size(); ++n) {
    SparseMatrix next = k_of(schedule[n]);
    result.last_difference = frobenius_difference(next, current);
    result.steps = static_cast<int>(n + 1);
    result.previous = std::move(current);
    current = std::move(next);
    if (result.last_difference < tol) {
      result.converged = true;
      break;
    }
  }
  result.form.stiffness = std::move(current);
  return result;
}

std::string coordinate_text(const SparseMatrix& m, const std::vector<Index>& nodes) {
  if (static_cast<Index>(nodes.size()) != m.rows()) throw InvalidArgument("coordinate_text: node map mismatch");
  std::ostringstream os;
  std::vector<std::tuple<Index, Index, double>> entries;
  for (Index col = 0; col < m.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
      if (it.value() != 0.0) {
        entries.emplace_back(nodes[static_cast<std::size_t>(it.row())], nodes[static_cast<std::size_t>(col)], it.value());
      }
    }
  }
  std::sort(entries.begin(), entries.end());
  for (const auto& [r, c, v] : entries) os << r << ' ' << c << ' ' << format_number(v) << '\n';
  return os.str();
}

}  // namespace dcl
