#pragma once

// Space-time points, directed point pairs, polyline paths and the Dirichlet
// metric d(x,s;y,t) = -(y-x)^2/(t-s).

#include <cstddef>
#include <span>
#include <vector>

namespace landscape {

/// Absolute tolerance used for coordinate comparisons throughout the library.
inline constexpr double kTolerance = 1e-9;

struct SpaceTimePoint {
  double x = 0.0;  // space
  double t = 0.0;  // time
};

bool same_point(const SpaceTimePoint& a, const SpaceTimePoint& b,
                double tol = kTolerance);

/// An ordered pair (x,s;y,t) with s < t.
class TemporalPair {
 public:
  TemporalPair(SpaceTimePoint p, SpaceTimePoint q);
  TemporalPair(double x, double s, double y, double t)
      : TemporalPair(SpaceTimePoint{x, s}, SpaceTimePoint{y, t}) {}

  const SpaceTimePoint& start() const { return p_; }
  const SpaceTimePoint& end() const { return q_; }
  double duration() const { return q_.t - p_.t; }

 private:
  SpaceTimePoint p_;
  SpaceTimePoint q_;
};

/// Continuous piecewise-linear path t -> x. Breakpoint times strictly increase.
class PolylinePath {
 public:
  explicit PolylinePath(std::vector<SpaceTimePoint> breakpoints);

  static PolylinePath straight(SpaceTimePoint from, SpaceTimePoint to);

  std::span<const SpaceTimePoint> breakpoints() const { return points_; }
  std::size_t piece_count() const { return points_.size() - 1; }
  double start_time() const { return points_.front().t; }
  double end_time() const { return points_.back().t; }
  double duration() const { return end_time() - start_time(); }
  SpaceTimePoint front() const { return points_.front(); }
  SpaceTimePoint back() const { return points_.back(); }

  bool covers(double r, double tol = kTolerance) const;

  /// Linear interpolation; throws std::out_of_range outside the domain.
  double value_at(double r) const;

  /// Slope of the piece containing r. At a breakpoint the piece to the right
  /// is used (the one to the left at the end time).
  double slope_at(double r) const;

  /// Index of the piece [b_i, b_{i+1}] holding r, right-continuous.
  std::size_t piece_index(double r) const;

  /// The path restricted to [a, b] (clamped to the domain); a < b required.
  PolylinePath restricted(double a, double b) const;

  bool is_straight(double tol = kTolerance) const;

 private:
  std::vector<SpaceTimePoint> points_;
};

/// Ordered partition r_0 < ... < r_k of an interval.
class Partition {
 public:
  explicit Partition(std::vector<double> times);

  static Partition uniform(double a, double b, std::size_t cells);

  std::span<const double> times() const { return times_; }
  std::size_t cell_count() const { return times_.size() - 1; }
  double front() const { return times_.front(); }
  double back() const { return times_.back(); }
  /// Largest gap between consecutive times.
  double mesh() const;

 private:
  std::vector<double> times_;
};

double dirichlet_distance(const TemporalPair& u);
double dirichlet_distance(SpaceTimePoint p, SpaceTimePoint q);

/// |gamma|_d = -sum over pieces of slope^2 * duration.
double dirichlet_energy(const PolylinePath& path);

/// Sorted union of two time lists restricted to [lo, hi], duplicates merged.
std::vector<double> merge_times(std::span<const double> a,
                                std::span<const double> b, double lo,
                                double hi);

}  // namespace landscape
