#include "landscape/geodesic_extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace landscape {

PolylinePath rightmost_geodesic(const GridMetric& e, std::size_t i, std::size_t j,
                                std::size_t k, std::size_t l) {
  const auto& spec = e.spec();
  if (!(j < l)) throw std::invalid_argument("rightmost_geodesic: need t_j < t_l");
  const std::size_t n = spec.node_count();
  std::vector<SpaceTimePoint> pts{{spec.x(i), spec.t(j)}};
  for (std::size_t r = j + 1; r < l; ++r) {
    const double* first = e.row(i, j, r);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t z = 0; z < n; ++z) best = std::max(best, first[z] + e.at(z, r, k, l));
    // Ties at round-off level go to the largest node.
    const double slack = 1e-12 * (1.0 + std::abs(best));
    std::size_t arg = 0;
    for (std::size_t z = n; z-- > 0;) {
      if (first[z] + e.at(z, r, k, l) >= best - slack) {
        arg = z;
        break;
      }
    }
    pts.push_back({spec.x(arg), spec.t(r)});
  }
  pts.push_back({spec.x(k), spec.t(l)});
  return PolylinePath(std::move(pts));
}

PolylinePath rightmost_geodesic(const GridMetric& e, const TemporalPair& u) {
  const auto& spec = e.spec();
  const auto i = spec.x_index(u.start().x);
  const auto j = spec.t_index(u.start().t);
  const auto k = spec.x_index(u.end().x);
  const auto l = spec.t_index(u.end().t);
  if (!i || !j || !k || !l) {
    throw std::out_of_range("rightmost_geodesic: endpoints are off the grid");
  }
  return rightmost_geodesic(e, *i, *j, *k, *l);
}

Partition grid_partition(const GridSpec& spec, double a, double b) {
  const auto ja = spec.t_index(a);
  const auto jb = spec.t_index(b);
  if (!ja || !jb || !(*ja < *jb)) {
    throw std::out_of_range("grid_partition: interval ends are not grid times");
  }
  std::vector<double> times;
  for (std::size_t j = *ja; j <= *jb; ++j) times.push_back(spec.t(j));
  return Partition(std::move(times));
}

WanderReport wander_check(const PolylinePath& path, double m, double tol) {
  WanderReport report;
  report.m = m;
  const auto a = path.front();
  const auto b = path.back();
  const double span = b.t - a.t;
  const double scale = std::cbrt(2.0) * std::pow(span, 1.0 / 6.0);
  for (const auto& p : path.breakpoints()) {
    const double straight = a.x + (b.x - a.x) * (p.t - a.t) / span;
    const double gap = std::abs(p.x - straight);
    const double bound =
        scale * std::sqrt(std::max(0.0, m * std::min(p.t - a.t, b.t - p.t)));
    if (bound > 0.0) report.worst_ratio = std::max(report.worst_ratio, gap / bound);
    if (gap > bound + tol && gap - bound > report.violation_excess) {
      report.ok = false;
      report.violation_time = p.t;
      report.violation_excess = gap - bound;
    }
  }
  return report;
}

}  // namespace landscape
