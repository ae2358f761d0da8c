#include "landscape/symmetry.hpp"

#include <cmath>
#include <stdexcept>

namespace landscape {

namespace {

void require_finite(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("SymmetryMap: non-finite parameter");
}

}  // namespace

SymmetryMap SymmetryMap::time_shift(double r) {
  require_finite(r);
  return {SymmetryKind::TimeShift, r};
}

SymmetryMap SymmetryMap::space_shift(double c) {
  require_finite(c);
  return {SymmetryKind::SpaceShift, c};
}

SymmetryMap SymmetryMap::shear(double c) {
  require_finite(c);
  return {SymmetryKind::Shear, c};
}

SymmetryMap SymmetryMap::kpz_rescale(double q) {
  require_finite(q);
  if (!(q > 0.0)) throw std::invalid_argument("SymmetryMap: rescale factor must be positive");
  return {SymmetryKind::KpzRescale, q};
}

SymmetryMap SymmetryMap::inverse() const {
  if (kind_ == SymmetryKind::KpzRescale) return {kind_, 1.0 / param_};
  return {kind_, -param_};
}

SpaceTimePoint SymmetryMap::apply(const SpaceTimePoint& p) const {
  switch (kind_) {
    case SymmetryKind::TimeShift:
      return {p.x, p.t + param_};
    case SymmetryKind::SpaceShift:
      return {p.x + param_, p.t};
    case SymmetryKind::Shear:
      return {p.x + param_ * p.t, p.t};
    case SymmetryKind::KpzRescale:
      return {param_ * param_ * p.x, param_ * param_ * param_ * p.t};
  }
  return p;
}

TemporalPair SymmetryMap::apply(const TemporalPair& u) const {
  return TemporalPair(apply(u.start()), apply(u.end()));
}

PolylinePath SymmetryMap::apply(const PolylinePath& path) const {
  std::vector<SpaceTimePoint> pts;
  pts.reserve(path.breakpoints().size());
  for (const auto& p : path.breakpoints()) pts.push_back(apply(p));
  return PolylinePath(std::move(pts));
}

PiecewiseDensity SymmetryMap::apply(const PiecewiseDensity& density) const {
  std::vector<DensityPiece> out;
  out.reserve(density.pieces().size());
  for (const auto& piece : density.pieces()) {
    DensityPiece p = piece;
    if (kind_ == SymmetryKind::TimeShift) {
      p.t0 += param_;
      p.t1 += param_;
    } else if (kind_ == SymmetryKind::KpzRescale) {
      const double q3 = param_ * param_ * param_;
      p.t0 *= q3;
      p.t1 *= q3;
      p.rho /= param_ * param_;
    }
    out.push_back(p);
  }
  return PiecewiseDensity(std::move(out));
}

WeightedSegment SymmetryMap::apply(const WeightedSegment& segment) const {
  return WeightedSegment(apply(segment.path()), apply(segment.density()));
}

PlantedMeasure SymmetryMap::apply(const PlantedMeasure& mu) const {
  SegmentNetwork out;
  out.reserve(mu.size());
  for (const auto& seg : mu.segments()) out.push_back(apply(seg));
  return PlantedMeasure(std::move(out));
}

double SymmetryMap::metric_value(const TemporalPair& u, double value) const {
  switch (kind_) {
    case SymmetryKind::TimeShift:
    case SymmetryKind::SpaceShift:
      return value;
    case SymmetryKind::Shear:
      // The excess over d is transported; d itself picks up the shear.
      return value - dirichlet_distance(u) + dirichlet_distance(apply(u));
    case SymmetryKind::KpzRescale:
      return param_ * value;
  }
  return value;
}

}  // namespace landscape
