#include "dcl/battery.hpp"
#include "dcl/semigroup.hpp"

#include "../oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace dcl;

namespace {

FormPair make(Interval dom, int n, const std::string& coeff) {
  const Mesh m = build_mesh(dom, n);
  return assemble_elliptic(m, CoefficientSpec::parse(coeff).evaluate(m));
}

}  // namespace

TEST_CASE("zero generator is the identity") {
  const FormPair f = make({0.0, 1.0}, 16, "constant:0");
  const Vector phi = sample(f.mesh, [](double x) { return std::sin(3 * x); });
  for (auto m : {SemigroupMethod::eigendecomposition, SemigroupMethod::resolvent_power}) {
    const SemigroupOperator s(f, m);
    CHECK((s.apply(0.3, phi) - phi).cwiseAbs().maxCoeff() < 1e-14);
  }
  CHECK((apply_resolvent_power(f, 0.3, 5, phi) - phi).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("free semigroup conserves constants") {
  const FormPair f = make({-1.0, 1.0}, 64, "power_law:1");
  const Vector one = Vector::Ones(65);
  CHECK((SemigroupOperator(f).apply(0.5, one) - one).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((apply_resolvent_power(f, 0.5, 40, one) - one).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("time zero is the identity on the active nodes") {
  const FormPair f = restrict_dirichlet(make({0.0, 1.0}, 16, "constant:1"), OpenSet::parse("(0,1)"));
  const Vector one = Vector::Ones(17);
  const Vector out = apply_semigroup_eig(f, 0.0, one);
  CHECK(out[0] == 0.0);
  CHECK(out[8] == 1.0);
  CHECK_THROWS_AS(apply_resolvent_power(f, 0.0, 4, one), InvalidArgument);
  CHECK_THROWS_AS(apply_resolvent_power(f, 0.1, 0, one), InvalidArgument);
}

TEST_CASE("Dirichlet heat flow on the unit interval against its eigen-series") {
  const FormPair free = make({0.0, 1.0}, 256, "constant:1");
  const FormPair d = restrict_dirichlet(free, OpenSet::parse("(0,1)"));
  const SemigroupOperator s(d);
  const Vector out = s.apply(0.1, Vector(Vector::Ones(257)));
  CHECK(out[128] == doctest::Approx(oracle::dirichlet_unit_value(0.1, 0.5)).epsilon(1e-3));
  CHECK(lumped_weights(free.mesh).dot(out) == doctest::Approx(oracle::dirichlet_unit_mass(0.1)).epsilon(1e-3));
  const DefectMeasure c = conservativeness_defect(s, {OpenSet::parse("(0,1)"), {}, {}}, 0.1);
  CHECK(c.mass == doctest::Approx(1.0 - oracle::dirichlet_unit_mass(0.1)).epsilon(2e-3));
}

TEST_CASE("submarkovian bounds for free, Dirichlet and Neumann generators") {
  const FormPair free = make({-1.0, 1.0}, 64, "piecewise:0;1,3");
  const RegionSpec r{OpenSet::parse("(-inf,0)U(0,inf)"), TargetSet::parse("{0}"), {}};
  for (const FormPair& g : {free, restrict_dirichlet(free, r), neumann_form(free, r).form}) {
    const SemigroupOperator s(g);
    for (double t : {0.01, 0.1, 1.0}) {
      const SubmarkovReport rep = submarkov_check(s, t);
      CHECK(rep.passed);
      CHECK(rep.min_entry >= -1e-9);
      CHECK(rep.max_row_sum <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("self-adjointness in the mass inner product") {
  const FormPair f = restrict_dirichlet(make({-1.0, 1.0}, 48, "power_law:0.5"), OpenSet::parse("(0,inf)"));
  const SemigroupOperator s(f);
  const Vector a = sample(f.mesh, [](double x) { return std::cos(2 * x); });
  const Vector b = sample(f.mesh, [](double x) { return x * x - 0.3; });
  const Vector w = lumped_weights(f.mesh);
  const double lhs = s.apply(0.2, a).cwiseProduct(w).dot(b.cwiseProduct(f.extend_by_zero(Vector::Ones(f.size()))));
  const double rhs = s.apply(0.2, b).cwiseProduct(w).dot(a.cwiseProduct(f.extend_by_zero(Vector::Ones(f.size()))));
  CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("semigroup law") {
  const FormPair f = make({-1.0, 1.0}, 64, "power_law:2");
  const SemigroupOperator s(f, SemigroupMethod::eigendecomposition);
  const Vector phi = sample(f.mesh, [](double x) { return std::abs(x); });
  CHECK((s.apply(0.1, s.apply(0.05, phi)) - s.apply(0.15, phi)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("eigen and resolvent evaluations agree") {
  const FormPair f = restrict_dirichlet(make({0.0, 1.0}, 64, "constant:1"), OpenSet::parse("(0,1)"));
  const Vector one = Vector::Ones(65);
  const Vector e = apply_semigroup_eig(f, 0.1, one);
  const double d1 = (apply_resolvent_power(f, 0.1, 100, one) - e).cwiseAbs().maxCoeff();
  const double d2 = (apply_resolvent_power(f, 0.1, 400, one) - e).cwiseAbs().maxCoeff();
  CHECK(d2 < d1);
  CHECK(d2 < 1e-3);
  const SemigroupOperator forced(f, SemigroupMethod::resolvent_power, 400);
  CHECK((forced.apply(0.1, one) - apply_resolvent_power(f, 0.1, 400, one)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Dirichlet resolvent is dominated by the free resolvent") {
  const FormPair free = make({-1.0, 1.0}, 64, "power_law:1");
  const FormPair d = restrict_dirichlet(free, OpenSet::parse("(-0.5,0.7)"));
  const SemigroupOperator sf(free), sd(d);
  for (const Vector& tau : sample(free.mesh, standard_battery())) {
    const Vector pos = tau.cwiseAbs();
    CHECK((sf.resolvent(1.0, pos) - sd.resolvent(1.0, pos)).minCoeff() >= -1e-12);
    CHECK(sd.resolvent(1.0, pos).minCoeff() >= -1e-12);
  }
}

TEST_CASE("Dirichlet mass loss is bounded by the conservativeness defect") {
  const FormPair free = make({-1.0, 1.0}, 128, "power_law:2");
  const RegionSpec r{OpenSet::parse("(0,inf)"), TargetSet::parse("{0}"), {}};
  const SemigroupOperator sd(restrict_dirichlet(free, r));
  const Vector w = lumped_weights(free.mesh);
  const Vector ind = indicator(free.mesh, r.omega);
  for (double t : {0.05, 0.5}) {
    const DefectMeasure c = conservativeness_defect(sd, r, t);
    const double delta = c.sup_norm;
    for (const Vector& phi : sample(free.mesh, standard_battery())) {
      const Vector p = phi.cwiseAbs().cwiseProduct(ind);
      const double l1 = w.dot(p);
      const double loss = l1 - w.dot(sd.apply(t, p));
      CHECK(loss <= delta * l1 + 1e-10);
    }
  }
}

TEST_CASE("invariance defect of the Laplacian on a half interval stays positive") {
  const FormPair free = make({-1.0, 1.0}, 128, "constant:1");
  const RegionSpec r{OpenSet::parse("(0,inf)"), TargetSet::parse("{0}"), {}};
  const DefectMeasure d = invariance_defect(SemigroupOperator(free), r, 0.1);
  CHECK(d.mass > 0.05);
  CHECK(d.sup_norm > 0.01);
  const FormPair decoupled = make({-1.0, 1.0}, 128, "piecewise:0;0,1");
  CHECK(invariance_defect(SemigroupOperator(decoupled), r, 0.1).mass == 0.0);
}

TEST_CASE("domination of a form by itself has zero slack") {
  const SemigroupOperator s(make({0.0, 1.0}, 32, "constant:1"));
  const DominationReport rep = domination_check(s, s, 0.1);
  CHECK(rep.passed);
  CHECK(std::abs(rep.min_gap) < 1e-15);
}

TEST_CASE("evolution diagnostics are recomputed from the output") {
  const FormPair f = restrict_dirichlet(make({0.0, 1.0}, 64, "constant:1"), OpenSet::parse("(0,1)"));
  const EvolutionResult r = SemigroupOperator(f).evolve(0.1, Vector::Ones(65));
  CHECK(r.mass_loss > 0.6);
  CHECK(r.negativity <= 1e-12);
  CHECK(r.overshoot <= 1e-12);
  CHECK(r.output.size() == 65);
}
