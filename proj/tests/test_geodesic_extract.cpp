#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "generators.hpp"
#include "landscape/geodesic_extract.hpp"
#include "landscape/metric_eval.hpp"
#include "landscape/multipoint.hpp"
#include "landscape/rate_function.hpp"

#include <cmath>
#include <stdexcept>

using namespace landscape;

TEST_CASE("dirichlet geodesics are straight") {
  const GridSpec g{-1, 1, 0, 1, 16, 8};
  const GridMetric e = evaluate_emu_grid(PlantedMeasure(), g);
  const PolylinePath p = rightmost_geodesic(e, TemporalPair(-1, 0, 1, 1));
  CHECK(p.is_straight());
  CHECK(p.piece_count() == 8);
  CHECK(path_length_partition(e, p, grid_partition(g, 0, 1)) == doctest::Approx(-4.0));
}

TEST_CASE("a vertical segment is its own geodesic") {
  const GridSpec g{-1, 1, 0, 1, 16, 8};
  const PlantedMeasure mu({constant_segment({0, 0}, {0, 1}, 1.0)});
  const GridMetric e = evaluate_emu_grid(mu, g);
  const PolylinePath p = rightmost_geodesic(e, TemporalPair(0, 0, 0, 1));
  for (const auto& q : p.breakpoints()) CHECK(q.x == doctest::Approx(0.0));
  CHECK(path_length_partition(e, p, grid_partition(g, 0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("the Y geodesic runs through the junction") {
  const std::vector<PointConstraint> c = {{TemporalPair(0, 0, -1, 1), 1.0},
                                          {TemporalPair(0, 0, 1, 1), 1.0}};
  const MultipointSolution sol = solve_multipoint(c);
  REQUIRE(sol.label == "Y");
  const GridSpec g{-1, 1, 0, 1, 40, 20};
  const GridMetric e = evaluate_emu_grid(sol.measure(), g);
  const PolylinePath p = rightmost_geodesic(e, TemporalPair(0, 0, 1, 1));
  const double t_star = 3 - 2 * std::sqrt(2.0);
  // On the trunk the path stays at x = 0; afterwards it follows the branch
  // (0, t*) -> (1, 1) to within one grid spacing.
  CHECK(p.value_at(0.1) == doctest::Approx(0.0));
  for (double r : {0.3, 0.5, 0.7, 0.9}) {
    CAPTURE(r);
    const double branch = (r - t_star) / (1 - t_star);
    CHECK(std::abs(p.value_at(r) - branch) <= g.hx() + 1e-9);
  }
}

TEST_CASE("off-grid requests are rejected") {
  const GridSpec g{-1, 1, 0, 1, 4, 4};
  const GridMetric e = evaluate_emu_grid(PlantedMeasure(), g);
  CHECK_THROWS_AS(rightmost_geodesic(e, TemporalPair(0.1, 0, 0, 1)), std::out_of_range);
  CHECK_THROWS_AS(grid_partition(g, 0.1, 1.0), std::out_of_range);
}

TEST_CASE("wander bound") {
  const PolylinePath straight = PolylinePath::straight({0, 0}, {1, 1});
  const WanderReport ok = wander_check(straight, 0.0);
  CHECK(ok.ok);
  CHECK(ok.worst_ratio == 0.0);

  const PolylinePath detour({{0, 0}, {1, 0.5}, {0, 1}});
  // Bound at r = 1/2 is 2^{1/3} sqrt(m / 2); it equals the gap 1 at m = 2^{1/3}.
  const WanderReport bad = wander_check(detour, 1.0);
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.violation_time);
  CHECK(*bad.violation_time == doctest::Approx(0.5));
  CHECK(bad.violation_excess == doctest::Approx(1.0 - std::cbrt(2.0) * std::sqrt(0.5)));
  CHECK(wander_check(detour, std::cbrt(2.0) + 1e-9).ok);
}

TEST_CASE("property: extracted geodesics obey the wander bound") {
  gen::for_all(6, 50, [](gen::Source& s) {
    const PlantedMeasure mu = gen::network(s, 2);
    const GridSpec g{-1, 1, 0, 1, 16, 8};
    const GridMetric e = evaluate_emu_grid(mu, g);
    const double m = theta_total(e);
    for (int n = 0; n < 10; ++n) {
      const std::size_t i = s.integer(0, g.nx);
      const std::size_t k = s.integer(0, g.nx);
      const PolylinePath p = rightmost_geodesic(e, i, 0, k, g.nt);
      CHECK(wander_check(p, m, g.hx()).ok);
      // Any chain of grid nodes is no longer than the pair itself.
      CHECK(path_length_partition(e, p, grid_partition(g, 0, 1)) <= e.at(i, 0, k, g.nt) + 1e-9);
    }
  });
}
