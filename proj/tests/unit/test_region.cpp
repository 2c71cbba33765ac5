#include "dcl/region.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace dcl;

TEST_CASE("open set parsing and membership") {
  const OpenSet p = OpenSet::parse("(-inf,0)U(0,inf)");
  CHECK(p.contains(0.5));
  CHECK(!p.contains(0.0));
  CHECK(p.closure_contains(0.0));
  CHECK(p.distance_to_complement(-0.25) == doctest::Approx(0.25));
  CHECK(p.boundary_points({-1.0, 1.0}) == std::vector<double>{0.0});
  CHECK(OpenSet::parse(p.text()) == p);
  CHECK(OpenSet::parse("(-inf,inf)").is_whole());
  CHECK(std::isinf(OpenSet::whole().distance_to_complement(0.0)));
}

TEST_CASE("malformed open sets are rejected") {
  CHECK_THROWS_AS(OpenSet::parse("(1,0)"), InvalidArgument);
  CHECK_THROWS_AS(OpenSet::parse("[0,1]"), InvalidArgument);
  CHECK_THROWS_AS(OpenSet::parse("(0,2)U(1,3)"), InvalidArgument);
}

TEST_CASE("target sets") {
  const TargetSet t = TargetSet::parse("{0}U[0.5,0.75]");
  CHECK(t.distance(0.1) == doctest::Approx(0.1));
  CHECK(t.distance(0.6) == doctest::Approx(0.0));
  CHECK(t.measure() == doctest::Approx(0.25));
  CHECK(TargetSet::parse("{}").empty());
  const TargetSet b = TargetSet::parse("boundary");
  CHECK(b.is_boundary_keyword());
  const TargetSet r = b.resolved(OpenSet::parse("(0,inf)"), {-1.0, 1.0});
  CHECK(r.pieces().size() == 1);
  CHECK(r.distance(0.0) == doctest::Approx(0.0));
}

TEST_CASE("region validation") {
  RegionSpec ok{OpenSet::parse("(0,inf)"), TargetSet::parse("{0}"), {0.1, 0.05}};
  CHECK_NOTHROW(ok.validate({-1.0, 1.0}));
  RegionSpec outside{OpenSet::parse("(0,inf)"), TargetSet::parse("{-0.5}"), {}};
  CHECK_THROWS_AS(outside.validate({-1.0, 1.0}), InvalidArgument);
  RegionSpec bad_radii{OpenSet::whole(), TargetSet::parse("{0}"), {0.1, 0.2}};
  CHECK_THROWS_AS(bad_radii.validate({-1.0, 1.0}), InvalidArgument);
  RegionSpec missing{OpenSet::parse("(5,6)"), TargetSet::parse("{}"), {}};
  CHECK_THROWS_AS(missing.validate({-1.0, 1.0}), InvalidArgument);
}

TEST_CASE("radius schedules") {
  const auto r = halving_radii(0.8, 4);
  REQUIRE(r.size() == 4);
  CHECK(r[3] == doctest::Approx(0.1));
  const Mesh m = build_mesh({0.0, 1.0}, 100);
  const auto d = default_radii(m);
  CHECK(d.size() == 6);
  CHECK(d.front() == doctest::Approx(0.1));
  CHECK(in_neighbourhood(TargetSet::parse("{0}"), 0.1, 0.05));
  CHECK(!in_neighbourhood(TargetSet::parse("{0}"), 0.1, 0.1));
}
