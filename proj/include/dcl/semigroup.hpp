#pragma once

#include "dcl/form.hpp"
#include "dcl/region.hpp"
#include "dcl/spectral.hpp"

#include <memory>
#include <string>
#include <vector>

namespace dcl {

enum class SemigroupMethod { automatic, eigendecomposition, resolvent_power };
std::string to_string(SemigroupMethod m);

/// Output of one semigroup application; diagnostics are recomputed from
/// the output vector.
struct EvolutionResult {
  double t = 0.0;
  Vector output;
  std::string method;
  long steps = 0;           // resolvent solves, or retained modes
  double mass_loss = 0.0;   // <1, phi>_M - <1, S_t phi>_M
  double negativity = 0.0;  // max(0, -min S_t phi)
  double overshoot = 0.0;   // max(0, max S_t phi - |phi|_inf)
};

/// S_t = exp(-t H) for the generator (K, M) on its active nodes. Inputs and
/// outputs live in the full-mesh frame: inputs are restricted to the active
/// nodes and outputs are extended by zero.
class SemigroupOperator {
 public:
  explicit SemigroupOperator(FormPair generator, SemigroupMethod method = SemigroupMethod::automatic,
                             long resolvent_steps = 0, Index max_block = 4000);

  const FormPair& generator() const { return gen_; }
  SemigroupMethod method() const { return method_; }
  Index full_size() const { return static_cast<Index>(gen_.mesh.num_nodes()); }

  /// Resolvent steps used for time t: the fixed count if one was given,
  /// else ceil(t / h_max^2) capped at 10^4.
  long steps_for(double t) const;

  Vector apply(double t, const Vector& full) const;
  /// Column-wise application to a full-frame matrix.
  Matrix apply(double t, const Matrix& full) const;
  EvolutionResult evolve(double t, const Vector& full) const;

  /// Full-frame matrix whose columns are the images of the nodal basis.
  Matrix matrix(double t) const;

  /// Entries (S_t)_{ij} for full-frame rows i and columns j.
  Matrix matrix_block(double t, const std::vector<Index>& rows, const std::vector<Index>& cols) const;

  /// (I + tau H)^{-1} phi, i.e. (M + tau K)^{-1} M phi on the active nodes.
  Vector resolvent(double tau, const Vector& full) const;

  const SpectralData* spectral() const { return spectral_.get(); }

 private:
  Matrix apply_active(double t, const Matrix& active) const;

  FormPair gen_;
  SemigroupMethod method_;
  long fixed_steps_;
  std::shared_ptr<const SpectralData> spectral_;
};

/// ((I + (t/n) H)^{-n}) phi by n solves of (M + (t/n) K) psi_j = M psi_{j-1}.
Vector apply_resolvent_power(const FormPair& gen, double t, long n, const Vector& full);

/// V exp(-lambda t) V^T M phi from the generalized eigendecomposition.
Vector apply_semigroup_eig(const FormPair& gen, double t, const Vector& full);

/// Nodal indicator of omega (open) on the mesh.
Vector indicator(const Mesh& mesh, const OpenSet& omega);
/// Nodal indicator of the complement of closure(omega).
Vector outside_indicator(const Mesh& mesh, const OpenSet& omega);

/// Two readings of a defect: the sup-norm value and the normalized mass
/// (L1) value. They agree in the limit when the sup-norm defect tends to 0,
/// but only the mass value converges for degenerate coefficients whose
/// discrete chains are scale invariant near the boundary.
struct DefectMeasure {
  double sup_norm = 0.0;
  double mass = 0.0;
};

/// sup: |S_t 1_omega - 1_omega|_inf over active nodes in omega.
/// mass: <1_omega, 1_omega - S_t 1_omega>_M / <1, 1_omega>_M.
DefectMeasure conservativeness_defect(const SemigroupOperator& s, const RegionSpec& region, double t);

/// sup: max over nodal basis vectors e_i in omega of |1_{omega^c} S_t e_i|_inf.
/// mass: <1_{omega^c}, S_t 1_omega>_M / <1, 1_omega>_M.
/// The sup reading needs the full omega^c x omega block; skip it with with_sup = false.
DefectMeasure invariance_defect(const SemigroupOperator& s, const RegionSpec& region, double t, bool with_sup = true);

struct DominationReport {
  double min_gap = 0.0;    // min entry of upper - lower
  double min_lower = 0.0;  // min entry of lower
  bool passed = false;
};

/// Brute-force entrywise comparison 0 <= lower <= upper of full matrices.
DominationReport domination_check(const SemigroupOperator& lower, const SemigroupOperator& upper, double t,
                                  double tol_pos = 1e-9);

struct SubmarkovReport {
  double min_entry = 0.0;
  double max_row_sum = 0.0;  // max of S_t 1
  bool passed = false;
};

SubmarkovReport submarkov_check(const SemigroupOperator& s, double t, double tol_pos = 1e-9);

/// max over test functions phi and times of
/// |(S_a - S_b)(1_omega phi)|_{L1} / |1_omega phi|_{L1}; functions vanishing on
/// omega are skipped.
double battery_distance(const SemigroupOperator& a, const SemigroupOperator& b, const OpenSet& omega,
                        const std::vector<Vector>& battery, const std::vector<double>& times);

/// Operator norm of (S_a - S_b) from L2(omega) to L2(X), both M-weighted.
/// Requires lumped mass (both operators M-self-adjoint in the full frame).
double operator_distance(const SemigroupOperator& a, const SemigroupOperator& b, const OpenSet& omega, double t);

}  // namespace dcl
