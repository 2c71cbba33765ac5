#include "dcl/capacity.hpp"

#include <doctest.h>

#include <cmath>

using namespace dcl;

namespace {

FormPair make(Interval dom, int n, const std::string& coeff) {
  const Mesh m = build_mesh(dom, n);
  return assemble_elliptic(m, CoefficientSpec::parse(coeff).evaluate(m));
}

}  // namespace

TEST_CASE("point capacity on the line approaches the exponential value 2") {
  // minimizer e^{-|x|}: int (phi'^2 + phi^2) = 2
  const FormPair f = make({-8.0, 8.0}, 4096, "constant:1");
  const CapacityEstimate e = capacity(f, TargetSet::parse("{0}"));
  CHECK(e.limit() == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("one-sided point capacity approaches 1") {
  const FormPair f = make({-8.0, 8.0}, 4096, "piecewise:0;0,1");
  const RegionSpec r{OpenSet::parse("(0,inf)"), TargetSet::parse("{0}"), {}};
  const CapacityEstimate e = relative_capacity(f, r);
  CHECK(e.limit() == doctest::Approx(1.0).epsilon(0.02));
  CHECK(e.limit() >= 1.0 / (4.0 * 3.141592653589793));
}

TEST_CASE("capacity of an interval dominates its length") {
  const FormPair f = make({-1.0, 1.0}, 256, "constant:1");
  const CapacityEstimate e = capacity(f, TargetSet::parse("[-0.5,0.5]"));
  CHECK(e.limit() >= 1.0 - 1e-10);
}

TEST_CASE("empty target has zero capacity") {
  const FormPair f = make({-1.0, 1.0}, 64, "constant:1");
  const CapacityEstimate e = capacity(f, TargetSet::parse("{}"));
  CHECK(e.limit() == 0.0);
}

TEST_CASE("monotone along the neighbourhood schedule and minimizers in [0,1]") {
  const FormPair f = make({-1.0, 1.0}, 512, "power_law:0.5");
  const RegionSpec r{OpenSet::parse("(0,inf)"), TargetSet::parse("{0}"), {}};
  const CapacityEstimate e = relative_capacity(f, r);
  const auto v = e.values();
  REQUIRE(v.size() >= 3);
  for (std::size_t k = 1; k < v.size(); ++k) CHECK(v[k] <= v[k - 1]);
  for (const Vector& phi : e.minimizers) {
    CHECK(phi.minCoeff() >= -1e-10);
    CHECK(phi.maxCoeff() <= 1.0 + 1e-10);
  }
}

TEST_CASE("monotone in the target set") {
  const FormPair f = make({-1.0, 1.0}, 256, "constant:1");
  const RegionSpec small{OpenSet::whole(), TargetSet::parse("{0}"), {0.1, 0.05}};
  const RegionSpec large{OpenSet::whole(), TargetSet::parse("[-0.1,0.1]"), {0.1, 0.05}};
  const auto a = relative_capacity(f, small).values();
  const auto b = relative_capacity(f, large).values();
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] <= b[k] + 1e-10);
}

TEST_CASE("scaling the coefficient bounds the capacity") {
  const RegionSpec r{OpenSet::parse("(0,inf)"), TargetSet::parse("{0}"), {}};
  const auto c1 = relative_capacity(make({-1.0, 1.0}, 256, "2*power_law:2"), r).values();
  const auto c2 = relative_capacity(make({-1.0, 1.0}, 256, "power_law:2"), r).values();
  for (std::size_t k = 0; k < c1.size(); ++k) {
    CHECK(c1[k] <= 2.0 * c2[k] + 1e-10);
    CHECK(c2[k] <= c1[k] + 1e-10);
  }
}

TEST_CASE("vanishing coefficient leaves the mass of the neighbourhood") {
  const FormPair f = make({-1.0, 1.0}, 64, "constant:0");
  const RegionSpec r{OpenSet::whole(), TargetSet::parse("[-0.5,0.5]"), {0.1}};
  const CapacityEstimate e = relative_capacity(f, r);
  const Vector w = lumped_weights(f.mesh);
  double mass = 0.0;
  for (std::size_t i = 0; i < f.mesh.num_nodes(); ++i) {
    if (in_neighbourhood(r.target, 0.1, f.mesh.node(i))) mass += w[static_cast<Index>(i)];
  }
  CHECK(e.values().front() == doctest::Approx(mass));
}

TEST_CASE("sweep verdicts") {
  const RegionSpec r{OpenSet::parse("(0,inf)"), TargetSet::parse("{0}"), {}};
  const SweepResult zero = refinement_sweep(
      [](int n) { return make({0.0, 1.0}, n, "power_law:2"); }, {128, 256, 512}, r);
  CHECK(zero.verdict == CapacityVerdict::zero);
  const RegionSpec inner{OpenSet::whole(), TargetSet::parse("{0}"), {}};
  const SweepResult pos = refinement_sweep(
      [](int n) { return make({-8.0, 8.0}, n, "constant:1"); }, {512, 1024, 2048}, inner);
  CHECK(pos.verdict == CapacityVerdict::positive);
  CHECK_THROWS_AS(refinement_sweep([](int n) { return make({0.0, 1.0}, n, "constant:1"); }, {64, 128}, r),
                  InvalidArgument);
}

TEST_CASE("unresolvable neighbourhoods are rejected with a hint") {
  const FormPair f = make({-1.0, 1.0}, 8, "constant:1");
  const RegionSpec r{OpenSet::whole(), TargetSet::parse("{0.1}"), {0.01}};
  CHECK_THROWS_AS(relative_capacity(f, r), InvalidArgument);
}
