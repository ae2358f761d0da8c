#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "generators.hpp"
#include "landscape/metric_eval.hpp"
#include "landscape/symmetry.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace landscape;

namespace {

std::vector<SymmetryMap> random_maps(gen::Source& s) {
  return {SymmetryMap::time_shift(s.real(-2, 2)), SymmetryMap::space_shift(s.real(-2, 2)),
          SymmetryMap::shear(s.real(-2, 2)), SymmetryMap::kpz_rescale(s.real(0.5, 2))};
}

}  // namespace

TEST_CASE("point maps") {
  const SpaceTimePoint p{1.0, 2.0};
  const auto shear = SymmetryMap::shear(0.5).apply(p);
  CHECK(shear.x == doctest::Approx(2.0));
  CHECK(shear.t == doctest::Approx(2.0));
  const auto kpz = SymmetryMap::kpz_rescale(2.0).apply(p);
  CHECK(kpz.x == doctest::Approx(4.0));
  CHECK(kpz.t == doctest::Approx(16.0));
  CHECK(SymmetryMap::time_shift(1.0).apply(p).t == doctest::Approx(3.0));
  CHECK(SymmetryMap::space_shift(-1.0).apply(p).x == doctest::Approx(0.0));
  CHECK_THROWS_AS(SymmetryMap::kpz_rescale(0.0), std::invalid_argument);
  CHECK_THROWS_AS(SymmetryMap::kpz_rescale(-1.0), std::invalid_argument);
}

TEST_CASE("kpz rescale divides densities by q squared") {
  const auto d = SymmetryMap::kpz_rescale(2.0).apply(PiecewiseDensity::constant(0, 1, 8.0));
  REQUIRE(d.pieces().size() == 1);
  CHECK(d.pieces()[0].t1 == doctest::Approx(8.0));
  CHECK(d.pieces()[0].rho == doctest::Approx(2.0));
}

TEST_CASE("property: maps and inverses compose to the identity") {
  gen::for_all(100, 20, [](gen::Source& s) {
    const SpaceTimePoint p = gen::point(s, -1, 1);
    for (const auto& map : random_maps(s)) {
      const SpaceTimePoint back = map.inverse().apply(map.apply(p));
      CHECK(back.x == doctest::Approx(p.x));
      CHECK(back.t == doctest::Approx(p.t));
    }
  });
}

TEST_CASE("property: the dirichlet metric transports to itself") {
  gen::for_all(200, 21, [](gen::Source& s) {
    const TemporalPair u = gen::pair(s);
    for (const auto& map : random_maps(s)) {
      const double moved = dirichlet_distance(map.apply(u));
      CHECK(map.metric_value(u, dirichlet_distance(u)) == doctest::Approx(moved));
    }
  });
}

TEST_CASE("property: the rate is invariant") {
  gen::for_all(100, 22, [](gen::Source& s) {
    const PlantedMeasure mu = gen::network(s);
    const double base = rate_of_measure(mu);
    for (const auto& map : random_maps(s)) {
      const PlantedMeasure moved = map.apply(mu);
      CHECK(validate_network(moved.segments()).ok);
      CHECK(rate_of_measure(moved) == doctest::Approx(base).epsilon(1e-9));
    }
  });
}

TEST_CASE("property: transported networks carry the transported metric") {
  gen::for_all(10, 23, [](gen::Source& s) {
    const PlantedMeasure mu = gen::network(s, 2);
    const TemporalPair u = gen::pair(s);
    const double e = evaluate_emu_between(mu, u.start(), u.end(), 64);
    for (const auto& map : random_maps(s)) {
      const TemporalPair v = map.apply(u);
      const double moved = evaluate_emu_between(map.apply(mu), v.start(), v.end(), 64);
      CHECK(moved == doctest::Approx(map.metric_value(u, e)).epsilon(1e-6));
    }
  });
}
