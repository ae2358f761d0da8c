#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "generators.hpp"
#include "landscape/geometry.hpp"

#include <cmath>
#include <stdexcept>

using namespace landscape;

TEST_CASE("dirichlet distance") {
  CHECK(dirichlet_distance(TemporalPair(0, 0, 1, 1)) == doctest::Approx(-1.0));
  CHECK(dirichlet_distance(TemporalPair(0, 0, 2, 4)) == doctest::Approx(-1.0));
  CHECK(dirichlet_distance(TemporalPair(3, 1, 3, 2)) == 0.0);
  CHECK(dirichlet_distance({-1, 0}, {1, 1}) == doctest::Approx(-4.0));
}

TEST_CASE("temporal pairs need increasing time") {
  CHECK_THROWS_AS(TemporalPair(0, 1, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(TemporalPair(0, 1, 0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(TemporalPair(NAN, 0, 0, 1), std::invalid_argument);
}

TEST_CASE("polyline evaluation") {
  const PolylinePath p({{0, 0}, {1, 0.5}, {0, 1}});
  CHECK(p.value_at(0.25) == doctest::Approx(0.5));
  CHECK(p.value_at(0.75) == doctest::Approx(0.5));
  CHECK(p.slope_at(0.5) == doctest::Approx(-2.0));
  CHECK(p.slope_at(1.0) == doctest::Approx(-2.0));
  CHECK(p.piece_index(0.5) == 1);
  CHECK_FALSE(p.is_straight());
  CHECK(PolylinePath({{0, 0}, {0.5, 0.5}, {1, 1}}).is_straight());
  CHECK_THROWS_AS(p.value_at(1.5), std::out_of_range);
  CHECK_THROWS_AS(PolylinePath({{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(PolylinePath({{0, 0}, {1, 0}}), std::invalid_argument);

  const PolylinePath r = p.restricted(0.25, 0.75);
  CHECK(r.start_time() == doctest::Approx(0.25));
  CHECK(r.piece_count() == 2);
  CHECK(r.value_at(0.5) == doctest::Approx(1.0));
}

TEST_CASE("dirichlet energy of a path") {
  const PolylinePath p({{0, 0}, {1, 0.5}, {0, 1}});
  CHECK(dirichlet_energy(p) == doctest::Approx(-4.0));
  CHECK(dirichlet_energy(PolylinePath::straight({0, 0}, {2, 1})) == doctest::Approx(-4.0));
}

TEST_CASE("partitions") {
  const Partition p = Partition::uniform(0, 1, 4);
  CHECK(p.cell_count() == 4);
  CHECK(p.mesh() == doctest::Approx(0.25));
  CHECK_THROWS_AS(Partition({0.0, 0.5, 0.5}), std::invalid_argument);
  const std::vector<double> a = {0.0, 0.5, 1.0};
  const std::vector<double> b = {0.25, 0.5 + 1e-12, 2.0};
  const auto m = merge_times(a, b, 0.0, 1.0);
  REQUIRE(m.size() == 4);
  CHECK(m[1] == doctest::Approx(0.25));
}

TEST_CASE("property: straight paths maximize the dirichlet length") {
  gen::for_all(200, 1, [](gen::Source& s) {
    const PolylinePath p = gen::path(s, s.real(0, 0.5), s.real(0.6, 1.5), s.integer(1, 6));
    const double chord = dirichlet_distance(p.front(), p.back());
    CHECK(dirichlet_energy(p) <= chord + 1e-12);
    CHECK(dirichlet_energy(PolylinePath::straight(p.front(), p.back())) ==
          doctest::Approx(chord));
  });
}

TEST_CASE("property: dirichlet energy is additive under restriction") {
  gen::for_all(200, 2, [](gen::Source& s) {
    const PolylinePath p = gen::path(s, 0.0, 1.0, s.integer(1, 6));
    const double m = s.real(0.05, 0.95);
    const double parts = dirichlet_energy(p.restricted(0.0, m)) +
                         dirichlet_energy(p.restricted(m, 1.0));
    CHECK(parts == doctest::Approx(dirichlet_energy(p)).epsilon(1e-12));
  });
}

TEST_CASE("property: reverse triangle inequality of d") {
  gen::for_all(500, 3, [](gen::Source& s) {
    const SpaceTimePoint p = gen::point(s, 0.0, 0.3);
    const SpaceTimePoint q = gen::point(s, 0.35, 0.65);
    const SpaceTimePoint r = gen::point(s, 0.7, 1.0);
    CHECK(dirichlet_distance(p, q) + dirichlet_distance(q, r) <=
          dirichlet_distance(p, r) + 1e-12);
  });
}
