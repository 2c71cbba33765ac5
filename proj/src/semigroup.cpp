#include "dcl/semigroup.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>

namespace dcl {

namespace {

void check_time(double t, const char* op) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument(std::string(op) + ": time must be finite and >= 0");
}

Matrix restrict_rows(const FormPair& g, const Matrix& full) {
  if (full.rows() != static_cast<Index>(g.mesh.num_nodes())) throw InvalidArgument("semigroup: dimension mismatch");
  Matrix out(g.size(), full.cols());
  for (Index k = 0; k < g.size(); ++k) out.row(k) = full.row(g.active_nodes[static_cast<std::size_t>(k)]);
  return out;
}

Matrix extend_rows(const FormPair& g, const Matrix& active) {
  Matrix out = Matrix::Zero(static_cast<Index>(g.mesh.num_nodes()), active.cols());
  for (Index k = 0; k < g.size(); ++k) out.row(g.active_nodes[static_cast<std::size_t>(k)]) = active.row(k);
  return out;
}

Matrix spectral_apply(const SpectralData& sd, const SparseMatrix& mass, double t, const Matrix& x) {
  const Matrix mx = mass * x;
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const SpectralBlock& b : sd.blocks) {
    const Index n = static_cast<Index>(b.nodes.size());
    Matrix local(n, x.cols());
    for (Index i = 0; i < n; ++i) local.row(i) = mx.row(b.nodes[static_cast<std::size_t>(i)]);
    const Vector decay = (-t * b.eigenvalues).array().exp().matrix();
    const Matrix coeff = decay.asDiagonal() * (b.vectors.transpose() * local);
    const Matrix y = b.vectors * coeff;
    for (Index i = 0; i < n; ++i) out.row(b.nodes[static_cast<std::size_t>(i)]) = y.row(i);
  }
  return out;
}

Matrix resolvent_power_apply(const FormPair& g, double t, long n, const Matrix& x) {
  const SparseMatrix a = g.mass + (t / static_cast<double>(n)) * g.stiffness;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw NumericalError("resolvent: M + tau K factorization failed");
  Matrix psi = x;
  for (long j = 0; j < n; ++j) {
    psi = ldlt.solve(Matrix(g.mass * psi));
    if (ldlt.info() != Eigen::Success) throw NumericalError("resolvent: solve failed");
  }
  return psi;
}

double weighted_sum(const Vector& w, const Vector& v) { return w.dot(v); }

std::vector<Index> nodes_in(const Mesh& mesh, const OpenSet& omega) {
  std::vector<Index> nodes;
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    if (omega.contains(mesh.node(i))) nodes.push_back(static_cast<Index>(i));
  }
  return nodes;
}

}  // namespace

std::string to_string(SemigroupMethod m) {
  switch (m) {
    case SemigroupMethod::automatic: return "automatic";
    case SemigroupMethod::eigendecomposition: return "eigendecomposition";
    case SemigroupMethod::resolvent_power: return "resolvent_power";
  }
  return "automatic";
}

SemigroupOperator::SemigroupOperator(FormPair generator, SemigroupMethod method, long resolvent_steps,
                                     Index max_block)
    : gen_(std::move(generator)), method_(method), fixed_steps_(resolvent_steps) {
  if (resolvent_steps < 0) throw InvalidArgument("semigroup: resolvent step count must be >= 0");
  if (method_ == SemigroupMethod::automatic) {
    try {
      spectral_ = std::make_shared<const SpectralData>(decompose(gen_.stiffness, gen_.mass, max_block));
      method_ = SemigroupMethod::eigendecomposition;
    } catch (const InvalidArgument&) {
      method_ = SemigroupMethod::resolvent_power;
    }
  } else if (method_ == SemigroupMethod::eigendecomposition) {
    spectral_ = std::make_shared<const SpectralData>(decompose(gen_.stiffness, gen_.mass, max_block));
  }
}

long SemigroupOperator::steps_for(double t) const {
  if (fixed_steps_ > 0) return fixed_steps_;
  const double h = gen_.mesh.max_element_length();
  const double n = std::ceil(t / (h * h));
  return static_cast<long>(std::clamp(n, 1.0, 1e4));
}

Matrix SemigroupOperator::apply_active(double t, const Matrix& active) const {
  if (t == 0.0) return active;
  if (method_ == SemigroupMethod::eigendecomposition) return spectral_apply(*spectral_, gen_.mass, t, active);
  return resolvent_power_apply(gen_, t, steps_for(t), active);
}

Vector SemigroupOperator::apply(double t, const Vector& full) const {
  check_time(t, "semigroup");
  return extend_rows(gen_, apply_active(t, restrict_rows(gen_, full))).col(0);
}

Matrix SemigroupOperator::apply(double t, const Matrix& full) const {
  check_time(t, "semigroup");
  return extend_rows(gen_, apply_active(t, restrict_rows(gen_, full)));
}

EvolutionResult SemigroupOperator::evolve(double t, const Vector& full) const {
  EvolutionResult r;
  r.t = t;
  r.output = apply(t, full);
  r.method = to_string(method_);
  if (method_ == SemigroupMethod::eigendecomposition) {
    r.steps = gen_.size();
  } else {
    r.steps = t == 0.0 ? 0 : steps_for(t);
  }
  const Vector w = lumped_weights(gen_.mesh);
  r.mass_loss = weighted_sum(w, full) - weighted_sum(w, r.output);
  r.negativity = std::max(0.0, -r.output.minCoeff());
  r.overshoot = std::max(0.0, r.output.maxCoeff() - full.cwiseAbs().maxCoeff());
  return r;
}

Matrix SemigroupOperator::matrix(double t) const {
  return apply(t, Matrix(Matrix::Identity(full_size(), full_size())));
}

Matrix SemigroupOperator::matrix_block(double t, const std::vector<Index>& rows, const std::vector<Index>& cols) const {
  check_time(t, "matrix_block");
  const Index nr = static_cast<Index>(rows.size()), nc = static_cast<Index>(cols.size());
  Matrix out = Matrix::Zero(nr, nc);
  if (nr == 0 || nc == 0) return out;
  if (method_ != SemigroupMethod::eigendecomposition || t == 0.0) {
    Matrix basis = Matrix::Zero(full_size(), nc);
    for (Index c = 0; c < nc; ++c) basis(cols[static_cast<std::size_t>(c)], c) = 1.0;
    const Matrix img = apply(t, basis);
    for (Index r = 0; r < nr; ++r) out.row(r) = img.row(rows[static_cast<std::size_t>(r)]);
    return out;
  }
  // Full-frame node -> (block, local index); inactive nodes map to nothing.
  std::vector<std::pair<Index, Index>> where(static_cast<std::size_t>(full_size()), {-1, -1});
  const SpectralData& sd = *spectral_;
  for (std::size_t b = 0; b < sd.blocks.size(); ++b) {
    const auto& nodes = sd.blocks[b].nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      where[static_cast<std::size_t>(gen_.active_nodes[static_cast<std::size_t>(nodes[i])])] = {
          static_cast<Index>(b), static_cast<Index>(i)};
    }
  }
  for (std::size_t b = 0; b < sd.blocks.size(); ++b) {
    const SpectralBlock& blk = sd.blocks[b];
    std::vector<Index> ri, rl, ci, cl;
    for (Index r = 0; r < nr; ++r) {
      const auto [bb, loc] = where[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])];
      if (bb == static_cast<Index>(b)) { ri.push_back(r); rl.push_back(loc); }
    }
    for (Index c = 0; c < nc; ++c) {
      const auto [bb, loc] = where[static_cast<std::size_t>(cols[static_cast<std::size_t>(c)])];
      if (bb == static_cast<Index>(b)) { ci.push_back(c); cl.push_back(loc); }
    }
    if (ri.empty() || ci.empty()) continue;
    const Index n = static_cast<Index>(blk.nodes.size());
    // Column j of S is V e^{-lambda t} (M V)^T e_j.
    Matrix mv(n, n);
    {
      Matrix vfull = Matrix::Zero(gen_.size(), n);
      for (Index i = 0; i < n; ++i) vfull.row(blk.nodes[static_cast<std::size_t>(i)]) = blk.vectors.row(i);
      const Matrix prod = gen_.mass * vfull;
      for (Index i = 0; i < n; ++i) mv.row(i) = prod.row(blk.nodes[static_cast<std::size_t>(i)]);
    }
    Matrix vr(static_cast<Index>(rl.size()), n), wc(static_cast<Index>(cl.size()), n);
    for (std::size_t k = 0; k < rl.size(); ++k) vr.row(static_cast<Index>(k)) = blk.vectors.row(rl[k]);
    for (std::size_t k = 0; k < cl.size(); ++k) wc.row(static_cast<Index>(k)) = mv.row(cl[k]);
    const Vector decay = (-t * blk.eigenvalues).array().exp().matrix();
    const Matrix part = vr * decay.asDiagonal() * wc.transpose();
    for (std::size_t a = 0; a < ri.size(); ++a) {
      for (std::size_t c = 0; c < ci.size(); ++c) out(ri[a], ci[c]) = part(static_cast<Index>(a), static_cast<Index>(c));
    }
  }
  return out;
}

Vector SemigroupOperator::resolvent(double tau, const Vector& full) const {
  if (!(tau > 0.0)) throw InvalidArgument("resolvent: tau must be positive");
  return extend_rows(gen_, resolvent_power_apply(gen_, tau, 1, restrict_rows(gen_, full))).col(0);
}

Vector apply_resolvent_power(const FormPair& gen, double t, long n, const Vector& full) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("apply_resolvent_power: t must be positive");
  if (n < 1) throw InvalidArgument("apply_resolvent_power: n must be >= 1");
  return extend_rows(gen, resolvent_power_apply(gen, t, n, restrict_rows(gen, full))).col(0);
}

Vector apply_semigroup_eig(const FormPair& gen, double t, const Vector& full) {
  check_time(t, "apply_semigroup_eig");
  if (t == 0.0) return gen.extend_by_zero(gen.restrict(full));
  const SpectralData sd = decompose(gen.stiffness, gen.mass, 4000);
  return extend_rows(gen, spectral_apply(sd, gen.mass, t, restrict_rows(gen, full))).col(0);
}

Vector indicator(const Mesh& mesh, const OpenSet& omega) {
  Vector v = Vector::Zero(static_cast<Index>(mesh.num_nodes()));
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    if (omega.contains(mesh.node(i))) v[static_cast<Index>(i)] = 1.0;
  }
  return v;
}

Vector outside_indicator(const Mesh& mesh, const OpenSet& omega) {
  Vector v = Vector::Zero(static_cast<Index>(mesh.num_nodes()));
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    if (!omega.closure_contains(mesh.node(i))) v[static_cast<Index>(i)] = 1.0;
  }
  return v;
}

DefectMeasure conservativeness_defect(const SemigroupOperator& s, const RegionSpec& region, double t) {
  if (!(t > 0.0)) throw InvalidArgument("conservativeness_defect: t must be positive");
  const FormPair& g = s.generator();
  const Vector one = indicator(g.mesh, region.omega);
  const Vector w = lumped_weights(g.mesh);
  const double total = weighted_sum(w, one);
  if (!(total > 0.0)) throw InvalidArgument("conservativeness_defect: omega contains no mesh node");
  const Vector out = s.apply(t, one);
  DefectMeasure d;
  for (Index i : g.active_nodes) {
    if (one[i] > 0.0) d.sup_norm = std::max(d.sup_norm, std::abs(out[i] - 1.0));
  }
  d.mass = weighted_sum(w, one.cwiseProduct(one - out)) / total;
  return d;
}

DefectMeasure invariance_defect(const SemigroupOperator& s, const RegionSpec& region, double t, bool with_sup) {
  if (!(t > 0.0)) throw InvalidArgument("invariance_defect: t must be positive");
  const FormPair& g = s.generator();
  const Vector one = indicator(g.mesh, region.omega);
  const Vector out_ind = outside_indicator(g.mesh, region.omega);
  const Vector w = lumped_weights(g.mesh);
  const double total = weighted_sum(w, one);
  if (!(total > 0.0)) throw InvalidArgument("invariance_defect: omega contains no mesh node");
  DefectMeasure d;
  d.mass = weighted_sum(w, out_ind.cwiseProduct(s.apply(t, one))) / total;
  std::vector<Index> in;
  for (Index i : g.active_nodes) {
    if (one[i] > 0.0) in.push_back(i);
  }
  std::vector<Index> outside;
  for (Index i = 0; i < out_ind.size(); ++i) {
    if (out_ind[i] > 0.0) outside.push_back(i);
  }
  if (!with_sup || in.empty() || outside.empty()) return d;
  const Matrix block = s.matrix_block(t, outside, in);
  d.sup_norm = block.cwiseAbs().maxCoeff();
  return d;
}

DominationReport domination_check(const SemigroupOperator& lower, const SemigroupOperator& upper, double t,
                                  double tol_pos) {
  if (!(t > 0.0)) throw InvalidArgument("domination_check: t must be positive");
  if (!(lower.generator().mesh == upper.generator().mesh)) throw InvalidArgument("domination_check: mesh mismatch");
  const Matrix l = lower.matrix(t);
  const Matrix u = upper.matrix(t);
  DominationReport r;
  r.min_gap = (u - l).minCoeff();
  r.min_lower = l.minCoeff();
  r.passed = r.min_gap >= -tol_pos && r.min_lower >= -tol_pos;
  return r;
}

SubmarkovReport submarkov_check(const SemigroupOperator& s, double t, double tol_pos) {
  const Matrix m = s.matrix(t);
  SubmarkovReport r;
  r.min_entry = m.minCoeff();
  r.max_row_sum = m.rowwise().sum().maxCoeff();
  r.passed = r.min_entry >= -tol_pos && r.max_row_sum <= 1.0 + tol_pos;
  return r;
}

double battery_distance(const SemigroupOperator& a, const SemigroupOperator& b, const OpenSet& omega,
                        const std::vector<Vector>& battery, const std::vector<double>& times) {
  if (!(a.generator().mesh == b.generator().mesh)) throw InvalidArgument("battery_distance: mesh mismatch");
  const Mesh& mesh = a.generator().mesh;
  const Vector one = indicator(mesh, omega);
  const Vector w = lumped_weights(mesh);
  std::vector<Vector> cols;
  std::vector<double> norms;
  for (const Vector& phi : battery) {
    if (phi.size() != one.size()) throw InvalidArgument("battery_distance: test function size mismatch");
    const Vector v = one.cwiseProduct(phi);
    const double nrm = w.dot(v.cwiseAbs());
    if (nrm > 1e-300) {
      cols.push_back(v);
      norms.push_back(nrm);
    }
  }
  if (cols.empty()) return 0.0;
  Matrix x(one.size(), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) x.col(static_cast<Index>(c)) = cols[c];
  double worst = 0.0;
  for (double t : times) {
    const Matrix diff = a.apply(t, x) - b.apply(t, x);
    for (Index c = 0; c < diff.cols(); ++c) {
      worst = std::max(worst, w.dot(diff.col(c).cwiseAbs()) / norms[static_cast<std::size_t>(c)]);
    }
  }
  return worst;
}

double operator_distance(const SemigroupOperator& a, const SemigroupOperator& b, const OpenSet& omega, double t) {
  if (!(a.generator().mesh == b.generator().mesh)) throw InvalidArgument("operator_distance: mesh mismatch");
  if (a.generator().mass_kind != MassKind::lumped || b.generator().mass_kind != MassKind::lumped) {
    throw InvalidArgument("operator_distance: lumped mass required");
  }
  const Mesh& mesh = a.generator().mesh;
  const std::vector<Index> in = nodes_in(mesh, omega);
  const Vector w = lumped_weights(mesh);
  const Index n = static_cast<Index>(in.size());
  auto diff = [&](const Vector& x) { return Vector(a.apply(t, x) - b.apply(t, x)); };
  auto gram = [&](const Vector& y) {
    Vector x = Vector::Zero(w.size());
    for (Index k = 0; k < n; ++k) x[in[static_cast<std::size_t>(k)]] = y[k] / std::sqrt(w[in[static_cast<std::size_t>(k)]]);
    const Vector z = diff(diff(x));
    Vector out(n);
    for (Index k = 0; k < n; ++k) out[k] = z[in[static_cast<std::size_t>(k)]] * std::sqrt(w[in[static_cast<std::size_t>(k)]]);
    return out;
  };
  return std::sqrt(lanczos_largest(n, gram));
}

}  // namespace dcl
