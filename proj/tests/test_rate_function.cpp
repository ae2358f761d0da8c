#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "generators.hpp"
#include "landscape/metric_eval.hpp"
#include "landscape/rate_function.hpp"

#include <cmath>
#include <limits>

using namespace landscape;

namespace {

Partition random_partition(gen::Source& s, double a, double b) {
  std::vector<double> times = {a, b};
  const std::size_t n = s.integer(1, 40);
  for (std::size_t i = 0; i < n; ++i) times.push_back(s.real(a, b));
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [](double x, double y) { return y - x < 1e-6; }),
              times.end());
  if (times.back() < b) times.back() = b;
  return Partition(times);
}

}  // namespace

TEST_CASE("one-point theta") {
  CHECK(theta_point(1.0, TemporalPair(0, 0, 0, 1)) == doctest::Approx(1.0));
  CHECK(theta_point(-1.0, TemporalPair(0, 0, 0, 1)) == 0.0);
  // e - d = 3 over duration 4: 3^{3/2} / 2
  CHECK(theta_point(2.0, TemporalPair(0, 0, 2, 4)) == doctest::Approx(std::pow(3.0, 1.5) / 2));
}

TEST_CASE("theta of a vertical segment") {
  const PlantedMeasure mu({constant_segment({0, 0}, {0, 1}, 2.0)});
  const GridMetric e = evaluate_emu_grid(mu, GridSpec{-0.5, 0.5, 0, 1, 8, 8});
  CHECK(theta_total(e) == doctest::Approx(std::pow(2.0, 1.5)));
  CHECK(theta_point(e, TemporalPair(0, 0, 0, 1)) == doctest::Approx(std::pow(2.0, 1.5)));
}

TEST_CASE("partition rate examples") {
  const PlantedMeasure vertical({constant_segment({0, 0}, {0, 1}, 1.0)});
  const PolylinePath seg = PolylinePath::straight({0, 0}, {0, 1});
  for (std::size_t n : {1, 3, 17}) {
    const Partition p = Partition::uniform(0, 1, n);
    CHECK(partition_rate(seg, weight_function(vertical, seg, p)) == doctest::Approx(4.0 / 3.0));
  }
  const PolylinePath bent({{0, 0}, {0.3, 0.5}, {-0.2, 1}});
  CHECK(partition_rate(bent, weight_function(PlantedMeasure(), bent, Partition::uniform(0, 1, 7))) ==
        0.0);
  CHECK(path_rate(vertical, seg) == doctest::Approx(4.0 / 3.0));
  CHECK(path_rate(vertical, bent) == 0.0);
}

TEST_CASE("partition rates increase to the path rate") {
  const PlantedMeasure mu({constant_segment({0.2, 0.3}, {0.2, 0.7}, 2.0)});
  const PolylinePath path({{0, 0}, {0.2, 0.3}, {0.2, 0.7}, {0, 1}});
  const double exact = path_rate(mu, path);
  CHECK(exact == doctest::Approx(4.0 / 3.0 * std::pow(2.0, 1.5) * 0.4));
  double previous = 0.0;
  for (std::size_t n = 1; n <= 1024; n *= 2) {
    const double r = partition_rate(path, weight_function(mu, path, Partition::uniform(0, 1, n)));
    CHECK(r <= exact + 1e-12);
    CHECK(r >= previous - 1e-12);
    previous = r;
  }
  CHECK(previous == doctest::Approx(exact).epsilon(0.01));
}

TEST_CASE("network rate") {
  const PlantedMeasure mu({constant_segment({0, 0}, {0, 1}, 1.0)});
  const RateReport r = network_rate(mu);
  CHECK(r.rate == doctest::Approx(4.0 / 3.0));
  CHECK(r.entropy == doctest::Approx(1.0));
  CHECK(r.theta == doctest::Approx(1.0));
  REQUIRE(r.per_segment.size() == 1);
  const RateReport empty = network_rate(PlantedMeasure());
  CHECK(empty.rate == 0.0);
  CHECK(empty.theta == 0.0);
}

TEST_CASE("rate lower bound of grid metrics") {
  const GridSpec g{-0.5, 0.5, 0, 1, 8, 8};
  const PlantedMeasure mu({constant_segment({0, 0}, {0, 1}, 2.0)});
  const MetricRateBound b = rate_lower_bound(evaluate_emu_grid(mu, g));
  CHECK(b.in_domain);
  CHECK(b.value == doctest::Approx(4.0 / 3.0 * std::pow(2.0, 1.5)));
  CHECK(b.value <= rate_of_measure(mu) + 1e-9);

  const GridMetric broken = GridMetric::from_function(
      g, [](SpaceTimePoint p, SpaceTimePoint q) { return dirichlet_distance(p, q) + 1.0; });
  const MetricRateBound nb = rate_lower_bound(broken);
  CHECK_FALSE(nb.in_domain);
  CHECK(nb.value == std::numeric_limits<double>::infinity());
}

TEST_CASE("property: partition rate never exceeds the path rate") {
  gen::for_all(100, 40, [](gen::Source& s) {
    const PlantedMeasure mu = gen::network(s);
    const auto& seg = mu.segments()[s.integer(0, mu.size() - 1)];
    // A path that rides a random stretch of the segment.
    const double a = seg.start_time();
    const double b = seg.end_time();
    const double lo = s.real(a, a + 0.4 * (b - a));
    const double hi = s.real(b - 0.4 * (b - a), b);
    std::vector<SpaceTimePoint> pts;
    if (lo > a + 1e-3) pts.push_back({seg.path().value_at(lo) + s.real(-0.3, 0.3), a});
    for (const auto& p : seg.path().restricted(lo, hi).breakpoints()) {
      if (pts.empty() || p.t > pts.back().t + 1e-9) pts.push_back(p);
    }
    if (hi < b - 1e-3) pts.push_back({seg.path().value_at(hi) + s.real(-0.3, 0.3), b});
    const PolylinePath path(pts);
    const double exact = path_rate(mu, path);
    const Partition p = random_partition(s, path.start_time(), path.end_time());
    CHECK(partition_rate(path, weight_function(mu, path, p)) <= exact + 1e-9);
  });
}

TEST_CASE("property: dirichlet weights give zero rate") {
  gen::for_all(100, 41, [](gen::Source& s) {
    const PolylinePath path = gen::path(s, 0, 1, s.integer(1, 5));
    const Partition p = random_partition(s, 0, 1);
    CHECK(partition_rate(path, weight_function(PlantedMeasure(), path, p)) == 0.0);
  });
}

TEST_CASE("property: theta is at most three quarters of the rate") {
  gen::for_all(8, 42, [](gen::Source& s) {
    const RateReport r = network_rate(gen::network(s), std::nullopt);
    CHECK(r.theta <= 0.75 * r.rate + 1e-6);
    CHECK(r.rate == doctest::Approx(4.0 / 3.0 * r.entropy));
  });
}
