#pragma once

#include <cstddef>
#include <vector>

#include "landscape/geometry.hpp"
#include "landscape/planted_measure.hpp"

namespace landscape {

/// D_q e_mu(theta): -theta^2 off the support; on a segment with slope v and
/// density rho, the concave majorant of -theta^2 and a spike of height
/// rho - v^2 at theta = v.
struct GradientProfile {
  bool on_support = false;
  double slope = 0.0;  // v
  double rho = 0.0;

  double operator()(double theta) const;
  /// Interval outside which the profile equals -theta^2.
  double window_lo() const;
  double window_hi() const;
};

/// Throws std::invalid_argument when q is an endpoint of a segment's domain.
GradientProfile gradient_profile(const PlantedMeasure& mu, SpaceTimePoint q);

std::vector<double> sample_profile(const GradientProfile& profile,
                                   const std::vector<double>& thetas);

/// Finite-difference surrogate e_mu(q; q + (h theta, h)) / h.
std::vector<double> gradient_profile_fd(const PlantedMeasure& mu, SpaceTimePoint q,
                                        const std::vector<double>& thetas, double h,
                                        std::size_t cells = 200);

/// Q(f) = 1/4 int (f'^2 - 4 theta^2) d theta, exact for the closed form.
double q_energy(const GradientProfile& profile);

/// Q of a sampled profile, linear between samples. The first and last
/// samples must sit on -theta^2 within tol.
double q_energy(const std::vector<double>& thetas, const std::vector<double>& values,
                double tol = 1e-6);

/// sup over the grid of D_q e(theta) + theta^2.
double density_from_gradient(const PlantedMeasure& mu, SpaceTimePoint q,
                             const std::vector<double>& thetas);

/// Uniform theta grid on [lo, hi] with n cells.
std::vector<double> theta_grid(double lo, double hi, std::size_t n);

}  // namespace landscape
