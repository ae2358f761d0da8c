#include "landscape/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace landscape {

bool same_point(const SpaceTimePoint& a, const SpaceTimePoint& b, double tol) {
  return std::abs(a.x - b.x) <= tol && std::abs(a.t - b.t) <= tol;
}

TemporalPair::TemporalPair(SpaceTimePoint p, SpaceTimePoint q) : p_(p), q_(q) {
  if (!std::isfinite(p.x) || !std::isfinite(p.t) || !std::isfinite(q.x) ||
      !std::isfinite(q.t)) {
    throw std::invalid_argument("TemporalPair: non-finite coordinate");
  }
  if (!(p.t < q.t)) {
    throw std::invalid_argument("TemporalPair: start time must precede end time");
  }
}

PolylinePath::PolylinePath(std::vector<SpaceTimePoint> breakpoints)
    : points_(std::move(breakpoints)) {
  if (points_.size() < 2) {
    throw std::invalid_argument("PolylinePath: need at least two breakpoints");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].t)) {
      throw std::invalid_argument("PolylinePath: non-finite breakpoint");
    }
    if (i > 0 && !(points_[i - 1].t < points_[i].t)) {
      throw std::invalid_argument(
          "PolylinePath: breakpoint times must strictly increase");
    }
  }
}

PolylinePath PolylinePath::straight(SpaceTimePoint from, SpaceTimePoint to) {
  return PolylinePath({from, to});
}

bool PolylinePath::covers(double r, double tol) const {
  return r >= start_time() - tol && r <= end_time() + tol;
}

std::size_t PolylinePath::piece_index(double r) const {
  if (!covers(r)) {
    throw std::out_of_range("PolylinePath: time " + std::to_string(r) +
                            " outside domain");
  }
  // First breakpoint strictly after r, then step back one.
  auto it = std::upper_bound(
      points_.begin(), points_.end(), r,
      [](double value, const SpaceTimePoint& p) { return value < p.t; });
  std::size_t idx = it == points_.begin()
                        ? 0
                        : static_cast<std::size_t>(it - points_.begin()) - 1;
  return std::min(idx, piece_count() - 1);
}

double PolylinePath::value_at(double r) const {
  const std::size_t i = piece_index(r);
  const auto& a = points_[i];
  const auto& b = points_[i + 1];
  const double lambda = (r - a.t) / (b.t - a.t);
  if (lambda <= 0.0) return a.x;
  if (lambda >= 1.0) return b.x;
  return a.x + lambda * (b.x - a.x);
}

double PolylinePath::slope_at(double r) const {
  const std::size_t i = piece_index(r);
  return (points_[i + 1].x - points_[i].x) / (points_[i + 1].t - points_[i].t);
}

PolylinePath PolylinePath::restricted(double a, double b) const {
  a = std::max(a, start_time());
  b = std::min(b, end_time());
  if (!(a < b)) {
    throw std::invalid_argument("PolylinePath::restricted: empty interval");
  }
  std::vector<SpaceTimePoint> pts;
  pts.push_back({value_at(a), a});
  for (const auto& p : points_) {
    if (p.t > a + kTolerance && p.t < b - kTolerance) pts.push_back(p);
  }
  pts.push_back({value_at(b), b});
  return PolylinePath(std::move(pts));
}

bool PolylinePath::is_straight(double tol) const {
  const auto& a = points_.front();
  const auto& b = points_.back();
  for (const auto& p : points_) {
    const double line = a.x + (p.t - a.t) * (b.x - a.x) / (b.t - a.t);
    if (std::abs(line - p.x) > tol) return false;
  }
  return true;
}

Partition::Partition(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) {
    throw std::invalid_argument("Partition: need at least two times");
  }
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i - 1] < times_[i])) {
      throw std::invalid_argument("Partition: times must strictly increase");
    }
  }
}

Partition Partition::uniform(double a, double b, std::size_t cells) {
  if (cells == 0 || !(a < b)) {
    throw std::invalid_argument("Partition::uniform: bad interval or cell count");
  }
  std::vector<double> t(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    t[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(cells);
  }
  t.back() = b;
  return Partition(std::move(t));
}

double Partition::mesh() const {
  double m = 0.0;
  for (std::size_t i = 1; i < times_.size(); ++i) {
    m = std::max(m, times_[i] - times_[i - 1]);
  }
  return m;
}

double dirichlet_distance(SpaceTimePoint p, SpaceTimePoint q) {
  const double dx = q.x - p.x;
  return -dx * dx / (q.t - p.t);
}

double dirichlet_distance(const TemporalPair& u) {
  return dirichlet_distance(u.start(), u.end());
}

double dirichlet_energy(const PolylinePath& path) {
  double total = 0.0;
  const auto pts = path.breakpoints();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    total += dirichlet_distance(pts[i - 1], pts[i]);
  }
  return total;
}

std::vector<double> merge_times(std::span<const double> a,
                                std::span<const double> b, double lo,
                                double hi) {
  std::vector<double> out;
  out.reserve(a.size() + b.size() + 2);
  out.push_back(lo);
  for (double t : a) {
    if (t > lo && t < hi) out.push_back(t);
  }
  for (double t : b) {
    if (t > lo && t < hi) out.push_back(t);
  }
  out.push_back(hi);
  std::sort(out.begin(), out.end());
  std::vector<double> merged;
  merged.reserve(out.size());
  for (double t : out) {
    if (merged.empty() || t - merged.back() > kTolerance * 1e-3) {
      merged.push_back(t);
    }
  }
  if (merged.back() != hi) merged.back() = hi;
  return merged;
}

}  // namespace landscape
