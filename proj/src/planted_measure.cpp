#include "landscape/planted_measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace landscape {

PiecewiseDensity::PiecewiseDensity(std::vector<DensityPiece> pieces)
    : pieces_(std::move(pieces)) {
  std::sort(pieces_.begin(), pieces_.end(),
            [](const DensityPiece& a, const DensityPiece& b) { return a.t0 < b.t0; });
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (!std::isfinite(p.rho) || !std::isfinite(p.t0) || !std::isfinite(p.t1)) {
      throw std::invalid_argument("PiecewiseDensity: non-finite piece");
    }
    if (p.rho < 0.0) {
      throw std::invalid_argument("PiecewiseDensity: negative density");
    }
    if (!(p.t0 < p.t1)) {
      throw std::invalid_argument("PiecewiseDensity: piece with t0 >= t1");
    }
    if (i > 0 && p.t0 < pieces_[i - 1].t1 - kTolerance) {
      throw std::invalid_argument("PiecewiseDensity: overlapping pieces");
    }
  }
}

PiecewiseDensity PiecewiseDensity::constant(double t0, double t1, double rho) {
  return PiecewiseDensity({DensityPiece{t0, t1, rho}});
}

double PiecewiseDensity::at(double r) const {
  for (const auto& p : pieces_) {
    if (r >= p.t0 && r < p.t1) return p.rho;
  }
  // The final instant belongs to the last piece that ends there.
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
    if (std::abs(r - it->t1) <= kTolerance) return it->rho;
  }
  return 0.0;
}

double PiecewiseDensity::integral(double a, double b, double power) const {
  double total = 0.0;
  for (const auto& p : pieces_) {
    const double lo = std::max(a, p.t0);
    const double hi = std::min(b, p.t1);
    if (hi > lo) total += std::pow(p.rho, power) * (hi - lo);
  }
  return total;
}

PiecewiseDensity PiecewiseDensity::restricted(double a, double b) const {
  std::vector<DensityPiece> out;
  for (const auto& p : pieces_) {
    const double lo = std::max(a, p.t0);
    const double hi = std::min(b, p.t1);
    if (hi > lo) out.push_back({lo, hi, p.rho});
  }
  return PiecewiseDensity(std::move(out));
}

double PiecewiseDensity::max_value() const {
  double m = 0.0;
  for (const auto& p : pieces_) m = std::max(m, p.rho);
  return m;
}

WeightedSegment::WeightedSegment(PolylinePath path, PiecewiseDensity density)
    : path_(std::move(path)), density_(std::move(density)) {
  for (const auto& p : density_.pieces()) {
    if (p.t0 < path_.start_time() - kTolerance ||
        p.t1 > path_.end_time() + kTolerance) {
      throw std::invalid_argument(
          "WeightedSegment: density piece outside the path domain");
    }
  }
}

WeightedSegment constant_segment(SpaceTimePoint from, SpaceTimePoint to,
                                 double rho) {
  return WeightedSegment(PolylinePath::straight(from, to),
                         PiecewiseDensity::constant(from.t, to.t, rho));
}

namespace {

std::vector<double> breakpoint_times(const PolylinePath& p) {
  std::vector<double> t;
  for (const auto& b : p.breakpoints()) t.push_back(b.t);
  return t;
}

}  // namespace

NetworkValidation validate_network(const SegmentNetwork& network) {
  NetworkValidation result;
  for (std::size_t i = 0; i < network.size(); ++i) {
    const auto& a = network[i].path();
    const auto ta = breakpoint_times(a);
    for (std::size_t j = i + 1; j < network.size(); ++j) {
      const auto& b = network[j].path();
      const double lo = std::max(a.start_time(), b.start_time());
      const double hi = std::min(a.end_time(), b.end_time());
      if (lo > hi + kTolerance) continue;
      auto gap_at = [&](double r) { return b.value_at(r) - a.value_at(r); };
      auto note_gap = [&](double g) {
        const double abs_gap = std::abs(g);
        if (!result.separation || abs_gap < *result.separation) {
          result.separation = abs_gap;
        }
      };
      if (hi - lo <= kTolerance) {
        note_gap(gap_at(std::clamp(lo, a.start_time(), a.end_time())));
        continue;
      }
      const auto tb = breakpoint_times(b);
      const auto times = merge_times(ta, tb, lo, hi);
      std::vector<double> gaps(times.size());
      for (std::size_t k = 0; k < times.size(); ++k) {
        gaps[k] = gap_at(times[k]);
        note_gap(gaps[k]);
      }
      auto report = [&](double r) {
        result.ok = false;
        result.violation = NetworkViolation{i, j, r};
      };
      for (std::size_t k = 0; k + 1 < times.size() && result.ok; ++k) {
        const double g0 = gaps[k];
        const double g1 = gaps[k + 1];
        const bool z0 = std::abs(g0) <= kTolerance;
        const bool z1 = std::abs(g1) <= kTolerance;
        if (z0 && k > 0) {
          report(times[k]);
        } else if (z0 && z1) {
          report(0.5 * (times[k] + times[k + 1]));
        } else if (!z0 && !z1 && (g0 < 0.0) != (g1 < 0.0)) {
          report(times[k] + (times[k + 1] - times[k]) * g0 / (g0 - g1));
        }
      }
      if (!result.ok) return result;
    }
  }
  return result;
}

PlantedMeasure::PlantedMeasure(SegmentNetwork network)
    : network_(std::move(network)) {
  const auto check = validate_network(network_);
  if (!check.ok) {
    const auto& v = *check.violation;
    std::ostringstream msg;
    msg << "segments " << v.first << " and " << v.second
        << " are not internally disjoint (meet at t=" << v.time << ")";
    throw NetworkError(msg.str(), v);
  }
}

std::vector<TimeInterval> coincidence_intervals(const PolylinePath& a,
                                                const PolylinePath& b) {
  std::vector<TimeInterval> out;
  const double lo = std::max(a.start_time(), b.start_time());
  const double hi = std::min(a.end_time(), b.end_time());
  if (!(hi - lo > kTolerance)) return out;
  const auto times = merge_times(breakpoint_times(a), breakpoint_times(b), lo, hi);
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const bool z0 = std::abs(a.value_at(times[k]) - b.value_at(times[k])) <= kTolerance;
    const bool z1 =
        std::abs(a.value_at(times[k + 1]) - b.value_at(times[k + 1])) <= kTolerance;
    if (!(z0 && z1)) continue;
    if (!out.empty() && std::abs(out.back().hi - times[k]) <= kTolerance) {
      out.back().hi = times[k + 1];
    } else {
      out.push_back({times[k], times[k + 1]});
    }
  }
  return out;
}

double measure_of_path_graph(const PlantedMeasure& mu, const PolylinePath& path) {
  double total = 0.0;
  for (const auto& seg : mu.segments()) {
    for (const auto& iv : coincidence_intervals(seg.path(), path)) {
      total += seg.density().integral(iv.lo, iv.hi);
    }
  }
  return total;
}

double kruzhkov_entropy(const PlantedMeasure& mu) {
  double total = 0.0;
  for (const auto& seg : mu.segments()) {
    total += seg.density().integral(seg.start_time(), seg.end_time(), 1.5);
  }
  return total;
}

double rate_of_measure(const PlantedMeasure& mu) {
  return 4.0 / 3.0 * kruzhkov_entropy(mu);
}

PlantedMeasure restrict(const PlantedMeasure& mu, TimeInterval region) {
  SegmentNetwork out;
  for (const auto& seg : mu.segments()) {
    const double lo = std::max(region.lo, seg.start_time());
    const double hi = std::min(region.hi, seg.end_time());
    if (!(hi - lo > kTolerance)) continue;
    out.emplace_back(seg.path().restricted(lo, hi), seg.density().restricted(lo, hi));
  }
  return PlantedMeasure(std::move(out));
}

PlantedMeasure restrict(const PlantedMeasure& mu,
                        const std::vector<std::size_t>& segment_indices) {
  SegmentNetwork out;
  for (std::size_t idx : segment_indices) {
    if (idx >= mu.size()) {
      throw std::out_of_range("restrict: segment index out of range");
    }
    out.push_back(mu.segments()[idx]);
  }
  return PlantedMeasure(std::move(out));
}

}  // namespace landscape
