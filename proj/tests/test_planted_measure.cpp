#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "generators.hpp"
#include "landscape/planted_measure.hpp"

#include <cmath>
#include <stdexcept>

using namespace landscape;

TEST_CASE("piecewise density") {
  const PiecewiseDensity d({{0.0, 0.5, 4.0}, {0.5, 1.0, 1.0}});
  CHECK(d.at(0.25) == 4.0);
  CHECK(d.at(0.5) == 1.0);
  CHECK(d.at(1.5) == 0.0);
  CHECK(d.integral(0, 1) == doctest::Approx(2.5));
  CHECK(d.integral(0, 1, 1.5) == doctest::Approx(0.5 * 8.0 + 0.5));
  CHECK(d.integral(0.25, 0.75) == doctest::Approx(1.25));
  CHECK(d.max_value() == 4.0);
  CHECK_THROWS_AS(PiecewiseDensity({{0, 1, -1}}), std::invalid_argument);
  CHECK_THROWS_AS(PiecewiseDensity({{0, 0.6, 1}, {0.5, 1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(PiecewiseDensity({{0.5, 0.5, 1}}), std::invalid_argument);
}

TEST_CASE("density pieces must lie within the path domain") {
  CHECK_THROWS_AS(WeightedSegment(PolylinePath::straight({0, 0}, {0, 1}),
                                  PiecewiseDensity::constant(0.5, 1.5, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("rate of a constant vertical segment") {
  const PlantedMeasure mu({constant_segment({0, 0}, {0, 2}, 4.0)});
  CHECK(kruzhkov_entropy(mu) == doctest::Approx(16.0));
  CHECK(rate_of_measure(mu) == doctest::Approx(64.0 / 3.0));
  CHECK(rate_of_measure(PlantedMeasure()) == 0.0);
}

TEST_CASE("network validation") {
  SUBCASE("crossing segments") {
    const SegmentNetwork net = {constant_segment({-1, 0}, {1, 1}, 1.0),
                                constant_segment({1, 0}, {-1, 1}, 1.0)};
    const auto v = validate_network(net);
    CHECK_FALSE(v.ok);
    REQUIRE(v.violation);
    CHECK(v.violation->time == doctest::Approx(0.5));
    CHECK_THROWS_AS(PlantedMeasure{net}, NetworkError);
  }
  SUBCASE("shared endpoint") {
    const SegmentNetwork net = {constant_segment({0, 0}, {-1, 1}, 1.0),
                                constant_segment({0, 0}, {1, 1}, 1.0)};
    CHECK(validate_network(net).ok);
  }
  SUBCASE("coinciding pieces") {
    const SegmentNetwork net = {constant_segment({0, 0}, {0, 1}, 1.0),
                                constant_segment({0, 0.2}, {0, 0.8}, 1.0)};
    CHECK_FALSE(validate_network(net).ok);
  }
  SUBCASE("separation of parallel segments") {
    const SegmentNetwork net = {constant_segment({0, 0}, {0, 1}, 1.0),
                                constant_segment({0.3, 0.5}, {0.8, 1.5}, 1.0)};
    const auto v = validate_network(net);
    CHECK(v.ok);
    REQUIRE(v.separation);
    CHECK(*v.separation == doctest::Approx(0.3));
  }
}

TEST_CASE("measure of a path graph") {
  const PlantedMeasure mu({constant_segment({0, 0}, {0, 1}, 2.0)});
  const PolylinePath ride({{0.5, 0}, {0, 0.25}, {0, 0.75}, {0.5, 1}});
  CHECK(measure_of_path_graph(mu, ride) == doctest::Approx(1.0));
  CHECK(measure_of_path_graph(mu, PolylinePath::straight({-1, 0}, {1, 1})) == 0.0);
  const auto c = coincidence_intervals(ride, mu.segments()[0].path());
  REQUIRE(c.size() == 1);
  CHECK(c[0].lo == doctest::Approx(0.25));
  CHECK(c[0].hi == doctest::Approx(0.75));
}

TEST_CASE("restriction") {
  const PlantedMeasure mu({constant_segment({0, 0}, {0, 1}, 1.0),
                           constant_segment({1, 0}, {1, 1}, 4.0)});
  CHECK(rate_of_measure(restrict(mu, std::vector<std::size_t>{1})) ==
        doctest::Approx(4.0 / 3.0 * 8.0));
  CHECK(rate_of_measure(restrict(mu, TimeInterval{0.0, 0.5})) ==
        doctest::Approx(0.5 * rate_of_measure(mu)));
  CHECK_THROWS_AS(restrict(mu, std::vector<std::size_t>{2}), std::out_of_range);
}

TEST_CASE("property: banded random networks are valid") {
  gen::for_all(200, 10, [](gen::Source& s) {
    const PlantedMeasure mu = gen::network(s);
    CHECK(validate_network(mu.segments()).ok);
    CHECK(rate_of_measure(mu) == doctest::Approx(4.0 / 3.0 * kruzhkov_entropy(mu)));
  });
}

TEST_CASE("property: entropy is additive over time") {
  gen::for_all(200, 11, [](gen::Source& s) {
    const PlantedMeasure mu = gen::network(s);
    const double m = s.real(0.3, 0.7);
    const double parts = kruzhkov_entropy(restrict(mu, TimeInterval{0.0, m})) +
                         kruzhkov_entropy(restrict(mu, TimeInterval{m, 1.0}));
    CHECK(parts == doctest::Approx(kruzhkov_entropy(mu)).epsilon(1e-12));
  });
}

TEST_CASE("property: a segment's own graph carries its full mass") {
  gen::for_all(200, 12, [](gen::Source& s) {
    const PlantedMeasure mu = gen::network(s);
    for (const auto& seg : mu.segments()) {
      const double mass = seg.density().integral(seg.start_time(), seg.end_time());
      CHECK(measure_of_path_graph(mu, seg.path()) == doctest::Approx(mass));
    }
  });
}
