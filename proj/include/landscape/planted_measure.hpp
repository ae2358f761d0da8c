#pragma once

// Planted network measures: finite systems of internally disjoint polyline
// segments, each carrying a piecewise-constant temporal density.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "landscape/geometry.hpp"

namespace landscape {

struct DensityPiece {
  double t0 = 0.0;
  double t1 = 0.0;
  double rho = 0.0;
};

/// Piecewise-constant nonnegative function of time. Zero off its pieces.
class PiecewiseDensity {
 public:
  PiecewiseDensity() = default;
  explicit PiecewiseDensity(std::vector<DensityPiece> pieces);

  static PiecewiseDensity constant(double t0, double t1, double rho);

  const std::vector<DensityPiece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }

  /// Right-continuous value at r.
  double at(double r) const;
  /// Integral of rho^power over [a, b]; power 1 is the mass.
  double integral(double a, double b, double power = 1.0) const;
  PiecewiseDensity restricted(double a, double b) const;
  double max_value() const;

 private:
  std::vector<DensityPiece> pieces_;
};

class WeightedSegment {
 public:
  WeightedSegment(PolylinePath path, PiecewiseDensity density);

  const PolylinePath& path() const { return path_; }
  const PiecewiseDensity& density() const { return density_; }
  double start_time() const { return path_.start_time(); }
  double end_time() const { return path_.end_time(); }

 private:
  PolylinePath path_;
  PiecewiseDensity density_;
};

using SegmentNetwork = std::vector<WeightedSegment>;

struct NetworkViolation {
  std::size_t first = 0;
  std::size_t second = 0;
  double time = 0.0;
};

struct NetworkValidation {
  bool ok = true;
  /// Minimal pointwise gap over overlapping closed time domains; absent when
  /// no two segments share a time.
  std::optional<double> separation;
  std::optional<NetworkViolation> violation;
};

NetworkValidation validate_network(const SegmentNetwork& network);

class NetworkError : public std::runtime_error {
 public:
  NetworkError(const std::string& what, NetworkViolation violation)
      : std::runtime_error(what), violation_(violation) {}
  const NetworkViolation& violation() const { return violation_; }

 private:
  NetworkViolation violation_;
};

struct TimeInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// A measure whose network is internally disjoint (checked on construction).
class PlantedMeasure {
 public:
  PlantedMeasure() = default;
  explicit PlantedMeasure(SegmentNetwork network);

  const SegmentNetwork& segments() const { return network_; }
  bool empty() const { return network_.empty(); }
  std::size_t size() const { return network_.size(); }

 private:
  SegmentNetwork network_;
};

/// Measure of the graph of a path: integral of the density over the times at
/// which the path coincides with a segment.
double measure_of_path_graph(const PlantedMeasure& mu, const PolylinePath& path);

/// Closed intervals of [lo, hi] on which two polylines coincide.
std::vector<TimeInterval> coincidence_intervals(const PolylinePath& a,
                                                const PolylinePath& b);

/// K(mu) = sum over segments of the integral of rho^{3/2} dt.
double kruzhkov_entropy(const PlantedMeasure& mu);

/// I(e_mu) = 4/3 K(mu).
double rate_of_measure(const PlantedMeasure& mu);

PlantedMeasure restrict(const PlantedMeasure& mu, TimeInterval region);
PlantedMeasure restrict(const PlantedMeasure& mu,
                        const std::vector<std::size_t>& segment_indices);

/// Straight segment with one constant density over its whole domain.
WeightedSegment constant_segment(SpaceTimePoint from, SpaceTimePoint to,
                                 double rho);

}  // namespace landscape
