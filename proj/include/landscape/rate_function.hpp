#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "landscape/geometry.hpp"
#include "landscape/metric_eval.hpp"
#include "landscape/planted_measure.hpp"

namespace landscape {

/// Theta(e, u) = [e(u) - d(u)]_+^{3/2} / (t - s)^{1/2}, given the value e(u).
double theta_point(double value, const TemporalPair& u);
double theta_point(const GridMetric& e, const TemporalPair& u);
double theta_point(const PlantedMeasure& mu, const TemporalPair& u,
                   const GridSpec& spec);

/// Sup of sum Theta(e, u_i) over pairs with disjoint time intervals, the
/// points restricted to grid nodes. Weighted interval scheduling over layers.
double theta_total(const GridMetric& e);

/// w(r) = |gamma restricted to [a, r]|_e sampled at partition times.
struct WeightFunction {
  std::vector<double> times;
  std::vector<double> values;  // values[0] == 0
};

WeightFunction weight_function(const PlantedMeasure& mu, const PolylinePath& path,
                               const Partition& partition);

/// The same samples read off a grid metric along the partition.
WeightFunction weight_function(const GridMetric& e, const PolylinePath& path,
                               const Partition& partition);

/// Per-cell excess density dw/dr + (dgamma/dr)^2 of a sampled weight function.
std::vector<double> excess_density(const PolylinePath& path, const WeightFunction& w);

/// I(gamma, e, P) = 4/3 sum ((dw/dr) + (dgamma/dr)^2)_+^{3/2} dr.
double partition_rate(const PolylinePath& path, const WeightFunction& w);

/// I(gamma, e_mu) = 4/3 int rho^{3/2} over the times gamma rides the network.
double path_rate(const PlantedMeasure& mu, const PolylinePath& path);

struct RateReport {
  double rate = 0.0;
  double entropy = 0.0;
  double theta = 0.0;
  std::vector<double> per_segment;  // path rate of each planted segment
  GridSpec theta_grid;
};

/// Grid covering a measure's support, used when no grid is supplied.
GridSpec default_grid(const PlantedMeasure& mu, std::size_t cells = 24);

RateReport network_rate(const PlantedMeasure& mu,
                        std::optional<GridSpec> theta_grid = std::nullopt);

struct MetricRateBound {
  bool in_domain = false;  // Dirichlet-dominant and metric axioms hold
  double value = 0.0;      // +inf when not in the domain
  double theta_bound = 0.0;
  double path_bound = 0.0;
};

/// Lower bound on I(e) for a grid metric: max of 4/3 Theta(e) and the best
/// partition rate along rightmost geodesics between the first and last layer.
MetricRateBound rate_lower_bound(const GridMetric& e);

}  // namespace landscape
