#pragma once

#include "dcl/coefficient.hpp"
#include "dcl/mesh.hpp"
#include "dcl/region.hpp"

#include <string>
#include <vector>

namespace dcl {

enum class MassKind { lumped, consistent };

/// Stiffness K and mass M of a quadratic form, indexed by the active nodes
/// of the underlying mesh (in increasing order). E(phi) = phi^T K phi and
/// the graph norm is phi^T (M + K) phi.
struct FormPair {
  Mesh mesh;
  SparseMatrix stiffness;
  SparseMatrix mass;
  std::vector<Index> active_nodes;
  bool local = true;
  MassKind mass_kind = MassKind::lumped;

  Index size() const { return static_cast<Index>(active_nodes.size()); }
  bool is_full() const { return active_nodes.size() == mesh.num_nodes(); }

  double energy(const Vector& phi) const;
  SparseMatrix graph_matrix() const { return mass + stiffness; }

  /// Active-node vector to full-mesh vector, zero off the active set.
  Vector extend_by_zero(const Vector& active) const;
  /// Full-mesh vector to its active-node entries.
  Vector restrict(const Vector& full) const;
  /// Nodal interpolant of f restricted to the active nodes.
  template <class F>
  Vector sample(F&& f) const {
    Vector v(size());
    for (Index k = 0; k < size(); ++k) v[k] = f(mesh.node(static_cast<std::size_t>(active_nodes[k])));
    return v;
  }
};

/// Nodal values in [0,1] on the full mesh.
struct Cutoff {
  std::vector<double> values;

  /// Requires 0 <= chi <= 1 and chi = 0 at nodes whose hat function is not
  /// supported in closure(omega).
  void validate(const Mesh& mesh, const OpenSet& omega) const;
};

/// P1 mass matrix on the full mesh.
SparseMatrix mass_matrix(const Mesh& mesh, MassKind kind);

/// Row sums of the mass matrix (identical for both kinds); the weights of
/// the discrete L1 and L2 norms.
Vector lumped_weights(const Mesh& mesh);

/// Free P1 assembly: element e adds (c_e/h_e)[[1,-1],[-1,1]]; K 1 = 0.
FormPair assemble_elliptic(const Mesh& mesh, const CoefficientField& coeff,
                           MassKind mass = MassKind::lumped);

/// Stiffness sum_e w_e (c_e/h_e)(phi_i - phi_{i+1})^2 on the full mesh.
SparseMatrix weighted_stiffness(const Mesh& mesh, const std::vector<double>& conductance,
                                const std::vector<double>& weights);

/// Per-element c_e/h_e read back from a free assembly.
std::vector<double> element_conductance(const FormPair& free_form);

/// Nodes whose hat function is supported in closure(omega) and which lie in omega.
std::vector<Index> dirichlet_nodes(const Mesh& mesh, const OpenSet& omega);

/// Restriction to the closure of functions compactly supported in omega.
FormPair restrict_dirichlet(const FormPair& form, const RegionSpec& region);
FormPair restrict_dirichlet(const FormPair& form, const OpenSet& omega);

/// K_chi = (D K + K D)/2 - diag(K chi)/2 in the active frame of `form`.
SparseMatrix truncated_form(const FormPair& form, const Vector& chi);

/// Default cutoff sequence: chi_n(x) = min(1, dist(x, omega^c) / delta_n),
/// delta_n = delta0 * 2^-n.
struct PlateauSchedule {
  double delta0 = 0.0;  // 0 selects a quarter of the domain length
  int max_steps = 60;
  double tol = 1e-10;
};

/// Exact element averages of the plateau cutoff of margin delta.
std::vector<double> plateau_element_weights(const Mesh& mesh, const OpenSet& omega, double delta);

/// Nodal values of the plateau cutoff of margin delta.
Cutoff plateau_cutoff(const Mesh& mesh, const OpenSet& omega, double delta);

struct NeumannResult {
  FormPair form;
  bool converged = false;
  int steps = 0;
  double last_difference = 0.0;
  SparseMatrix previous;  // iterate before the last one
};

/// Neumann form as the monotone limit of truncated forms over the plateau
/// schedule. The stiffness of each step is the exact continuum E_chi on P1
/// functions, i.e. element weights are element averages of chi.
NeumannResult neumann_form(const FormPair& free_form, const RegionSpec& region,
                           const PlateauSchedule& schedule = {});

/// Same limit for an explicit increasing sequence of nodal cutoffs.
NeumannResult neumann_form(const FormPair& free_form, const RegionSpec& region,
                           const std::vector<Cutoff>& schedule, double tol = 1e-10);

/// "row col value" lines, zero-based full-mesh node indices.
std::string coordinate_text(const SparseMatrix& m, const std::vector<Index>& nodes);

}  // namespace dcl
