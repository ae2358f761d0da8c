#pragma once

// Seeded random inputs for the property tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "doctest.h"
#include "landscape/geodesic_rate.hpp"
#include "landscape/geometry.hpp"
#include "landscape/planted_measure.hpp"

namespace gen {

class Source {
 public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}

  double real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  std::size_t integer(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool coin() { return integer(0, 1) == 1; }

 private:
  std::mt19937_64 rng_;
};

/// Runs body on `trials` independent sources; the trial index is captured so a
/// failure names its seed.
inline void for_all(int trials, std::uint64_t seed,
                    const std::function<void(Source&)>& body) {
  for (int trial = 0; trial < trials; ++trial) {
    CAPTURE(trial);
    Source s(seed * 1'000'003 + static_cast<std::uint64_t>(trial));
    body(s);
  }
}

inline landscape::SpaceTimePoint point(Source& s, double t_lo, double t_hi) {
  return {s.real(-1.0, 1.0), s.real(t_lo, t_hi)};
}

inline landscape::TemporalPair pair(Source& s) {
  const double a = s.real(0.0, 0.45);
  const double b = s.real(0.55, 1.0);
  return {s.real(-1.0, 1.0), a, s.real(-1.0, 1.0), b};
}

/// Polyline on [t0, t1] with the given number of pieces, x within [lo, hi].
inline landscape::PolylinePath path(Source& s, double t0, double t1, std::size_t pieces,
                                    double lo = -1.0, double hi = 1.0) {
  std::vector<double> times = {t0, t1};
  while (times.size() < pieces + 1) {
    const double t = s.real(t0, t1);
    if (std::all_of(times.begin(), times.end(),
                    [&](double u) { return std::abs(u - t) > 1e-3 * (t1 - t0); })) {
      times.push_back(t);
    }
  }
  std::sort(times.begin(), times.end());
  std::vector<landscape::SpaceTimePoint> points;
  for (double t : times) points.push_back({s.real(lo, hi), t});
  return landscape::PolylinePath(points);
}

inline landscape::PiecewiseDensity density(Source& s, double t0, double t1) {
  if (s.coin()) return landscape::PiecewiseDensity::constant(t0, t1, s.real(0.1, 3.0));
  const double mid = s.real(t0 + 0.1 * (t1 - t0), t1 - 0.1 * (t1 - t0));
  return landscape::PiecewiseDensity(
      {{t0, mid, s.real(0.1, 3.0)}, {mid, t1, s.real(0.1, 3.0)}});
}

/// One to three segments, each confined to its own spatial band, so the
/// network is internally disjoint by construction.
inline landscape::PlantedMeasure network(Source& s, std::size_t max_segments = 3) {
  const std::size_t count = s.integer(1, max_segments);
  landscape::SegmentNetwork segments;
  for (std::size_t i = 0; i < count; ++i) {
    const double lo = -1.0 + 0.7 * static_cast<double>(i);
    const double t0 = s.real(0.0, 0.3);
    const double t1 = s.real(0.7, 1.0);
    segments.emplace_back(path(s, t0, t1, s.integer(1, 3), lo, lo + 0.5),
                          density(s, t0, t1));
  }
  return landscape::PlantedMeasure(std::move(segments));
}

/// Profile through random interior breakpoints with f(0) = f(1) = 0.
inline landscape::ProfileFunction profile(Source& s, std::size_t cells) {
  const std::size_t interior = s.integer(1, 4);
  std::vector<double> times;
  while (times.size() < interior) {
    const double t = s.real(0.05, 0.95);
    if (std::all_of(times.begin(), times.end(),
                    [&](double u) { return std::abs(u - t) > 0.05; })) {
      times.push_back(t);
    }
  }
  std::sort(times.begin(), times.end());
  std::vector<std::pair<double, double>> points = {{0.0, 0.0}};
  for (double t : times) points.emplace_back(t, s.real(-1.0, 1.0));
  points.emplace_back(1.0, 0.0);
  return landscape::ProfileFunction::from_breakpoints(points, cells);
}

}  // namespace gen
