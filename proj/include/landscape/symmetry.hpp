#pragma once

#include "landscape/geometry.hpp"
#include "landscape/planted_measure.hpp"

namespace landscape {

enum class SymmetryKind { TimeShift, SpaceShift, Shear, KpzRescale };

/// One of the four landscape symmetries.
///   time shift r:   (x, t) -> (x, t + r)
///   space shift c:  (x, t) -> (x + c, t)
///   shear c:        (x, t) -> (x + c t, t)
///   KPZ rescale q:  (x, t) -> (q^2 x, q^3 t), metric values times q,
///                   temporal densities divided by q^2.
/// Densities are otherwise unchanged, so the rate of a transported measure is
/// the rate of the original.
class SymmetryMap {
 public:
  static SymmetryMap time_shift(double r);
  static SymmetryMap space_shift(double c);
  static SymmetryMap shear(double c);
  static SymmetryMap kpz_rescale(double q);

  SymmetryKind kind() const { return kind_; }
  double parameter() const { return param_; }
  SymmetryMap inverse() const;

  SpaceTimePoint apply(const SpaceTimePoint& p) const;
  TemporalPair apply(const TemporalPair& u) const;
  PolylinePath apply(const PolylinePath& path) const;
  PiecewiseDensity apply(const PiecewiseDensity& density) const;
  WeightedSegment apply(const WeightedSegment& segment) const;
  PlantedMeasure apply(const PlantedMeasure& mu) const;

  /// Value of the transported metric at apply(u), given the value e(u).
  double metric_value(const TemporalPair& u, double value) const;

 private:
  SymmetryMap(SymmetryKind kind, double param) : kind_(kind), param_(param) {}

  SymmetryKind kind_;
  double param_;
};

}  // namespace landscape
