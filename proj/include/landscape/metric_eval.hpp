#pragma once

// Evaluation of planted-network metrics e_mu on space-time grids.
//
// The evaluator is a Bellman recursion over time layers. Layers are the grid
// times together with every segment breakpoint and density breakpoint time.
// States are the source, the target and the points of each segment at every
// layer where it is alive. A path is a chain of
//   flights: straight moves between states at different layers, gain d;
//   rides:   travel along one segment between consecutive layers, gain
//            int (rho - slope^2) dt over the step.
// Coincident states at one layer (junctions, endpoints on segments) share the
// best value. Flights are exact for straight pieces, so the only
// discretization is that rides start and stop at layer times.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "landscape/geometry.hpp"
#include "landscape/planted_measure.hpp"

namespace landscape {

/// Rectangular space-time grid. nx and nt count cells, so there are nx + 1
/// spatial nodes and nt + 1 time layers.
struct GridSpec {
  double x_min = -1.0;
  double x_max = 1.0;
  double t_min = 0.0;
  double t_max = 1.0;
  std::size_t nx = 2;
  std::size_t nt = 2;

  void validate() const;
  std::size_t node_count() const { return nx + 1; }
  std::size_t layer_count() const { return nt + 1; }
  double hx() const { return (x_max - x_min) / static_cast<double>(nx); }
  double ht() const { return (t_max - t_min) / static_cast<double>(nt); }
  double x(std::size_t i) const;
  double t(std::size_t j) const;
  /// Index of the node at coordinate v, if v is a node within tolerance.
  std::optional<std::size_t> x_index(double v) const;
  std::optional<std::size_t> t_index(double v) const;
};

/// Composition tolerance 2 hx^2 / ht + 1e-9: the worst loss from snapping a
/// straight step to the nearest spatial node.
double tau_comp(const GridSpec& spec);

enum class MetricProvenance { DpFromMeasure, External };

/// Values e(x_i, t_j; x_k, t_l) for j < l.
class GridMetric {
 public:
  GridMetric(GridSpec spec, MetricProvenance provenance);

  static GridMetric from_function(
      const GridSpec& spec,
      const std::function<double(SpaceTimePoint, SpaceTimePoint)>& value,
      MetricProvenance provenance = MetricProvenance::External);

  const GridSpec& spec() const { return spec_; }
  MetricProvenance provenance() const { return provenance_; }

  double at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return values_[index(i, j, k, l)];
  }
  void set(std::size_t i, std::size_t j, std::size_t k, std::size_t l, double v) {
    values_[index(i, j, k, l)] = v;
  }
  /// Lookup by coordinates; throws std::out_of_range when off grid.
  double value(const TemporalPair& u) const;

  /// Contiguous block of values from source (i, j) to all nodes at layer l.
  const double* row(std::size_t i, std::size_t j, std::size_t l) const {
    return &values_[index(i, j, 0, l)];
  }
  double* row(std::size_t i, std::size_t j, std::size_t l) {
    return &values_[index(i, j, 0, l)];
  }

 private:
  std::size_t index(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const;

  GridSpec spec_;
  MetricProvenance provenance_;
  std::size_t nodes_;
  std::size_t layers_;
  std::vector<double> values_;
};

/// Largest number of stored values a GridMetric may hold.
inline constexpr std::size_t kGridMetricCapacity = 60'000'000;

/// e_mu(u) on the grid; u's endpoints must be grid nodes.
double evaluate_emu(const PlantedMeasure& mu, const TemporalPair& u,
                    const GridSpec& spec);

/// e_mu between arbitrary points with `cells` uniform time layers between
/// them (plus the measure's event times).
double evaluate_emu_between(const PlantedMeasure& mu, SpaceTimePoint p,
                            SpaceTimePoint q, std::size_t cells);

/// All-pairs values on the grid, one sweep per source node.
GridMetric evaluate_emu_grid(const PlantedMeasure& mu, const GridSpec& spec);

/// |gamma|_e = mu(graph gamma) + |gamma|_d.
double path_length_exact(const PlantedMeasure& mu, const PolylinePath& path);

/// Sum of e over consecutive partition points of gamma; all points must be
/// grid nodes.
double path_length_partition(const GridMetric& e, const PolylinePath& path,
                             const Partition& partition);

struct AxiomWitness {
  std::size_t i = 0, j = 0, k = 0, l = 0;  // the pair (x_i, t_j; x_k, t_l)
  std::size_t z = 0, r = 0;                // intermediate node or second pair
  std::size_t z2 = 0;
};

struct AxiomCheck {
  std::string name;
  double tolerance = 0.0;
  double worst = 0.0;    // largest violation amount, 0 when none
  double largest = 0.0;  // largest amount seen, within tolerance or not
  std::size_t violations = 0;
  std::size_t checked = 0;
  AxiomWitness witness;
  bool ok() const { return violations == 0; }
};

struct AxiomReport {
  double tau_comp = 0.0;
  std::vector<AxiomCheck> checks;  // dominance, triangle, composition, quadrangle
  bool ok() const;
  const AxiomCheck& check(const std::string& name) const;
};

/// Verifies Dirichlet dominance, the reverse triangle inequality, the
/// composition law (max over grid nodes, within tau_comp) and the quadrangle
/// inequality. stride > 1 samples every stride-th node and layer.
AxiomReport check_metric_axioms(const GridMetric& e, std::size_t stride = 1,
                                double tol_scale = 1.0);

}  // namespace landscape
