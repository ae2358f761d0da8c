#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "generators.hpp"
#include "landscape/metric_eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace landscape;

namespace {

// Best path from (-1,0) to (1,1) that rides x = 0 on [a, b]; scanned on a
// fine grid of (a, b).
double cross_oracle(double rho) {
  double best = -4.0;
  const int n = 2000;
  for (int i = 1; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double a = static_cast<double>(i) / n;
      const double b = static_cast<double>(j) / n;
      best = std::max(best, -1.0 / a + rho * (b - a) - 1.0 / (1.0 - b));
    }
  }
  return best;
}

const GridSpec kUnit{-1.0, 1.0, 0.0, 1.0, 40, 40};

}  // namespace

TEST_CASE("grid spec") {
  const GridSpec g{-1.0, 1.0, 0.0, 1.0, 4, 2};
  CHECK(g.node_count() == 5);
  CHECK(g.layer_count() == 3);
  CHECK(g.hx() == doctest::Approx(0.5));
  CHECK(g.x(2) == doctest::Approx(0.0));
  CHECK(g.x_index(0.5) == 3);
  CHECK_FALSE(g.x_index(0.3).has_value());
  CHECK(g.t_index(1.0) == 2);
  CHECK(tau_comp(g) == doctest::Approx(2 * 0.25 / 0.5 + 1e-9));
  CHECK_THROWS_AS((GridSpec{0, 1, 0, 1, 1, 4}.validate()), std::invalid_argument);
}

TEST_CASE("closed-form values") {
  const PlantedMeasure vertical({constant_segment({0, 0}, {0, 1}, 1.0)});
  CHECK(evaluate_emu(vertical, TemporalPair(0, 0, 0, 1), kUnit) == doctest::Approx(1.0));
  CHECK(evaluate_emu(PlantedMeasure(), TemporalPair(0, 0, 0, 1), kUnit) == 0.0);
  CHECK(evaluate_emu(vertical, TemporalPair(-1, 0, 1, 1), kUnit) == doctest::Approx(-4.0));
  CHECK_THROWS_AS(evaluate_emu(vertical, TemporalPair(0.01, 0, 0, 1), kUnit),
                  std::out_of_range);
}

TEST_CASE("crossing a dense vertical segment") {
  for (double rho : {1.0, 4.0, 9.0, 16.0}) {
    CAPTURE(rho);
    const PlantedMeasure mu({constant_segment({0, 0}, {0, 1}, rho)});
    const double e = evaluate_emu_between(mu, {-1, 0}, {1, 1}, 400);
    CHECK(e == doctest::Approx(cross_oracle(rho)).epsilon(1e-4));
    // Riding [1/sqrt(rho), 1 - 1/sqrt(rho)] is optimal once that interval exists.
    const double closed = rho >= 4 ? rho - 4 * std::sqrt(rho) : -4.0;
    CHECK(e == doctest::Approx(closed).epsilon(1e-4));
  }
}

TEST_CASE("path lengths") {
  const PlantedMeasure mu({constant_segment({0, 0}, {0, 1}, 2.0)});
  const PolylinePath ride({{0.5, 0}, {0, 0.25}, {0, 0.75}, {0.5, 1}});
  CHECK(path_length_exact(mu, ride) == doctest::Approx(1.0 - 2.0));
  const GridMetric e = evaluate_emu_grid(mu, GridSpec{-1, 1, 0, 1, 8, 4});
  const Partition p({0.0, 0.25, 0.75, 1.0});
  CHECK(path_length_partition(e, ride, p) >= path_length_exact(mu, ride) - 1e-9);
  CHECK(e.value(TemporalPair(0, 0, 0, 1)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(e.value(TemporalPair(0.1, 0, 0, 1)), std::out_of_range);
}

TEST_CASE("grid sweep agrees with single-pair evaluation") {
  const PlantedMeasure mu({constant_segment({0, 0}, {0, 0.25}, 2.0),
                           constant_segment({0, 0.25}, {-0.75, 1}, 2.5),
                           constant_segment({0, 0.25}, {0.75, 1}, 2.0)});
  const GridSpec g{-1, 1, 0, 1, 16, 8};
  const GridMetric e = evaluate_emu_grid(mu, g);
  for (std::size_t i = 0; i <= g.nx; i += 3) {
    for (std::size_t k = 0; k <= g.nx; k += 5) {
      const TemporalPair u(g.x(i), g.t(1), g.x(k), g.t(7));
      CHECK(e.at(i, 1, k, 7) == doctest::Approx(evaluate_emu(mu, u, g)));
    }
  }
}

TEST_CASE("axioms hold for node-aligned networks") {
  const PlantedMeasure mu({constant_segment({0, 0}, {-0.75, 0.75}, 2.0),
                           constant_segment({0, 0}, {0.75, 0.75}, 1.5)});
  const AxiomReport r = check_metric_axioms(evaluate_emu_grid(mu, GridSpec{-1, 1, 0, 1, 16, 8}));
  for (const auto& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.ok());
    CHECK(c.checked > 0);
  }
  CHECK(r.ok());
}

TEST_CASE("axiom checks report violations with a witness") {
  const GridSpec g{-1, 1, 0, 1, 8, 4};
  const GridMetric bumped = GridMetric::from_function(
      g, [](SpaceTimePoint p, SpaceTimePoint q) { return dirichlet_distance(p, q) + 1.0; });
  const AxiomReport r = check_metric_axioms(bumped);
  CHECK(r.check("dominance").ok());
  const AxiomCheck& tri = r.check("triangle");
  CHECK_FALSE(tri.ok());
  CHECK(tri.worst == doctest::Approx(1.0));
  CHECK(tri.witness.j < tri.witness.r);

  const GridMetric below = GridMetric::from_function(
      g, [](SpaceTimePoint p, SpaceTimePoint q) { return dirichlet_distance(p, q) - 0.5; });
  CHECK_FALSE(check_metric_axioms(below).check("dominance").ok());
}

TEST_CASE("property: empty network gives the dirichlet metric") {
  gen::for_all(100, 30, [](gen::Source& s) {
    const TemporalPair u = gen::pair(s);
    CHECK(evaluate_emu_between(PlantedMeasure(), u.start(), u.end(), 16) ==
          doctest::Approx(dirichlet_distance(u)));
  });
}

TEST_CASE("property: dominance and the reverse triangle inequality") {
  gen::for_all(40, 31, [](gen::Source& s) {
    const PlantedMeasure mu = gen::network(s);
    const SpaceTimePoint p = gen::point(s, 0.0, 0.3);
    const SpaceTimePoint q = gen::point(s, 0.35, 0.65);
    const SpaceTimePoint r = gen::point(s, 0.7, 1.0);
    const double pr = evaluate_emu_between(mu, p, r, 200);
    CHECK(pr >= dirichlet_distance(p, r) - 1e-12);
    const double split = evaluate_emu_between(mu, p, q, 200) + evaluate_emu_between(mu, q, r, 200);
    CHECK(split <= pr + 1e-9);
  });
}

TEST_CASE("property: each planted segment is at least as long as its measure") {
  gen::for_all(40, 32, [](gen::Source& s) {
    const PlantedMeasure mu = gen::network(s);
    for (const auto& seg : mu.segments()) {
      const double e = evaluate_emu_between(mu, seg.path().front(), seg.path().back(), 100);
      CHECK(e >= path_length_exact(mu, seg.path()) - 1e-9);
    }
  });
}
