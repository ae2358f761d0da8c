#include "landscape/rate_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "landscape/geodesic_extract.hpp"
#include "landscape/parallel.hpp"

namespace landscape {

double theta_point(double value, const TemporalPair& u) {
  const double excess = std::max(0.0, value - dirichlet_distance(u));
  return std::pow(excess, 1.5) / std::sqrt(u.duration());
}

double theta_point(const GridMetric& e, const TemporalPair& u) {
  return theta_point(e.value(u), u);
}

double theta_point(const PlantedMeasure& mu, const TemporalPair& u,
                   const GridSpec& spec) {
  return theta_point(evaluate_emu(mu, u, spec), u);
}

double theta_total(const GridMetric& e) {
  const auto& spec = e.spec();
  const std::size_t n = spec.node_count();
  const std::size_t L = spec.layer_count();
  // best[j * L + l]: largest single Theta over pairs at times t_j < t_l.
  std::vector<double> best(L * L, 0.0);
  parallel_for(L, [&](std::size_t j) {
    for (std::size_t l = j + 1; l < L; ++l) {
      const double dt = spec.t(l) - spec.t(j);
      const double root = std::sqrt(dt);
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double* row = e.row(i, j, l);
        for (std::size_t k = 0; k < n; ++k) {
          const double dx = spec.x(k) - spec.x(i);
          const double excess = row[k] + dx * dx / dt;
          if (excess > 0.0) m = std::max(m, excess * std::sqrt(excess) / root);
        }
      }
      best[j * L + l] = m;
    }
  });
  std::vector<double> value(L, 0.0);
  for (std::size_t l = 1; l < L; ++l) {
    value[l] = value[l - 1];
    for (std::size_t j = 0; j < l; ++j) {
      value[l] = std::max(value[l], value[j] + best[j * L + l]);
    }
  }
  return value[L - 1];
}

WeightFunction weight_function(const PlantedMeasure& mu, const PolylinePath& path,
                               const Partition& partition) {
  WeightFunction w;
  const auto times = partition.times();
  w.times.assign(times.begin(), times.end());
  w.values.reserve(times.size());
  w.values.push_back(0.0);
  const double a = times.front();
  for (std::size_t i = 1; i < times.size(); ++i) {
    w.values.push_back(path_length_exact(mu, path.restricted(a, times[i])));
  }
  return w;
}

WeightFunction weight_function(const GridMetric& e, const PolylinePath& path,
                               const Partition& partition) {
  WeightFunction w;
  const auto times = partition.times();
  w.times.assign(times.begin(), times.end());
  w.values.push_back(0.0);
  for (std::size_t i = 1; i < times.size(); ++i) {
    const SpaceTimePoint p{path.value_at(times[i - 1]), times[i - 1]};
    const SpaceTimePoint q{path.value_at(times[i]), times[i]};
    w.values.push_back(w.values.back() + e.value(TemporalPair(p, q)));
  }
  return w;
}

std::vector<double> excess_density(const PolylinePath& path, const WeightFunction& w) {
  std::vector<double> rho;
  for (std::size_t i = 1; i < w.times.size(); ++i) {
    const double dr = w.times[i] - w.times[i - 1];
    const double slope = (path.value_at(w.times[i]) - path.value_at(w.times[i - 1])) / dr;
    const double growth = (w.values[i] - w.values[i - 1]) / dr;
    double excess = growth + slope * slope;
    // Cancellation noise of a cell with constant slope and no ride.
    if (std::abs(excess) <= 1e-9 * (std::abs(growth) + slope * slope)) excess = 0.0;
    rho.push_back(excess);
  }
  return rho;
}

double partition_rate(const PolylinePath& path, const WeightFunction& w) {
  const auto rho = excess_density(path, w);
  double total = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double dr = w.times[i + 1] - w.times[i];
    total += std::pow(std::max(0.0, rho[i]), 1.5) * dr;
  }
  return 4.0 / 3.0 * total;
}

double path_rate(const PlantedMeasure& mu, const PolylinePath& path) {
  double total = 0.0;
  for (const auto& seg : mu.segments()) {
    for (const auto& iv : coincidence_intervals(seg.path(), path)) {
      total += seg.density().integral(iv.lo, iv.hi, 1.5);
    }
  }
  return 4.0 / 3.0 * total;
}

GridSpec default_grid(const PlantedMeasure& mu, std::size_t cells) {
  GridSpec spec;
  spec.nx = cells;
  spec.nt = cells;
  if (mu.empty()) return spec;
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double t0 = x0;
  double t1 = -x0;
  for (const auto& seg : mu.segments()) {
    for (const auto& p : seg.path().breakpoints()) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      t0 = std::min(t0, p.t);
      t1 = std::max(t1, p.t);
    }
  }
  const double pad = 0.25 * std::max(1.0, x1 - x0);
  spec.x_min = x0 - pad;
  spec.x_max = x1 + pad;
  spec.t_min = t0;
  spec.t_max = t1;
  return spec;
}

RateReport network_rate(const PlantedMeasure& mu, std::optional<GridSpec> theta_grid) {
  RateReport report;
  for (const auto& seg : mu.segments()) {
    const double r = path_rate(mu, seg.path());
    report.per_segment.push_back(r);
    report.rate += r;
  }
  report.entropy = kruzhkov_entropy(mu);
  report.theta_grid = theta_grid ? *theta_grid : default_grid(mu);
  if (!mu.empty()) {
    report.theta = theta_total(evaluate_emu_grid(mu, report.theta_grid));
  }
  return report;
}

MetricRateBound rate_lower_bound(const GridMetric& e) {
  MetricRateBound bound;
  bound.in_domain = check_metric_axioms(e).ok();
  if (!bound.in_domain) {
    bound.value = std::numeric_limits<double>::infinity();
    return bound;
  }
  const auto& spec = e.spec();
  const std::size_t n = spec.node_count();
  const std::size_t last = spec.layer_count() - 1;
  bound.theta_bound = 4.0 / 3.0 * theta_total(e);
  std::vector<double> per_source(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t k = 0; k < n; ++k) {
      const auto path = rightmost_geodesic(e, i, 0, k, last);
      const auto part = grid_partition(spec, spec.t_min, spec.t_max);
      per_source[i] = std::max(per_source[i],
                               partition_rate(path, weight_function(e, path, part)));
    }
  });
  bound.path_bound = *std::max_element(per_source.begin(), per_source.end());
  bound.value = std::max(bound.theta_bound, bound.path_bound);
  return bound;
}

}  // namespace landscape
