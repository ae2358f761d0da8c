#pragma once

#include <cstddef>
#include <optional>

#include "landscape/geometry.hpp"
#include "landscape/metric_eval.hpp"

namespace landscape {

/// Polyline through the rightmost maximizers z(r) of e(p; x, r) + e(x, r; q)
/// at every grid time strictly between the endpoints.
PolylinePath rightmost_geodesic(const GridMetric& e, const TemporalPair& u);
PolylinePath rightmost_geodesic(const GridMetric& e, std::size_t i, std::size_t j,
                                std::size_t k, std::size_t l);

/// Partition of a grid geodesic's domain at every grid time.
Partition grid_partition(const GridSpec& spec, double a, double b);

struct WanderReport {
  bool ok = true;
  double m = 0.0;
  double worst_ratio = 0.0;  // max |pi - pi_d| / bound over checked times
  std::optional<double> violation_time;
  double violation_excess = 0.0;
};

/// Checks |pi(r) - pi_d(r)| <= 2^{1/3} (t-s)^{1/6} sqrt(m min(r-s, t-r)) at
/// every breakpoint of pi, pi_d being the straight line between its ends.
WanderReport wander_check(const PolylinePath& path, double m, double tol = 1e-9);
}  // namespace landscape
