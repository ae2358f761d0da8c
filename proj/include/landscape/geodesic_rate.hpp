#pragma once

// The geodesic rate J(f) for profiles f on [0,1] with f(0) = f(1) = 0:
//
//   minimize   4/3 sum_k rho_k^{3/2} dt_k      over rho >= 0 per cell
//   subject to sum_{i<=k<j} rho_k dt_k >= Var[f' | [t_i, t_j]] (t_j - t_i)
//
// for every pair of grid times t_i < t_j.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace landscape {

/// Piecewise-linear f on a time grid 0 = t_0 < ... < t_n = 1.
class ProfileFunction {
 public:
  ProfileFunction(std::vector<double> times, std::vector<double> slopes);

  /// Linear interpolation of (t, f) breakpoints, refined so that every cell
  /// is at most 1/cells long. Breakpoint times are kept as grid times.
  static ProfileFunction from_breakpoints(
      const std::vector<std::pair<double, double>>& points, std::size_t cells);

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& slopes() const { return slopes_; }
  std::size_t cell_count() const { return slopes_.size(); }
  double value_at(double t) const;
  ProfileFunction scaled(double a) const;
  /// (t, f) at every grid time.
  std::vector<std::pair<double, double>> breakpoints() const;

 private:
  std::vector<double> times_;
  std::vector<double> slopes_;
};

struct JOptions {
  double tol = 1e-6;
  /// Budget in single-constraint dual updates.
  std::size_t max_updates = 400'000'000;
  /// Start from randomly perturbed multipliers instead of zero.
  bool perturb_start = false;
  std::uint64_t seed = 0;
};

struct JSolution {
  std::vector<double> times;
  std::vector<double> rho;  // per cell
  double objective = 0.0;
  double dual_value = 0.0;
  double max_violation = 0.0;    // largest constraint shortfall of rho
  double duality_residual = 0.0; // (objective - dual) / max(1, objective)
  std::size_t constraints = 0;   // constraints with positive right-hand side
  std::size_t updates = 0;
  bool converged = false;
  std::string diagnostic;
};

JSolution jrate_solve(const ProfileFunction& f, const JOptions& options = {});

/// Closed form for the two-piece profile with apex 1 at time a.
double jrate_two_piece(double a);

struct JBounds {
  double lower = 0.0;  // 4/3 (int f'^2)^{3/2}
  double upper = 0.0;  // 4/3 int |f'|^3
};

JBounds jrate_bounds(const ProfileFunction& f);

struct ScalingReport {
  double j_f = 0.0;
  double j_af = 0.0;
  double expected = 0.0;  // |a|^3 J(f)
  double relative_error = 0.0;
};

ScalingReport jrate_scaling_check(const ProfileFunction& f, double a,
                                  const JOptions& options = {});

/// The profile of f on [a, b] seen from its endpoints: time rescaled to
/// [0, 1], chord removed, space scaled by (b - a)^{-2/3}.
ProfileFunction affine_piece(const ProfileFunction& f, double a, double b,
                             std::size_t cells);

struct SuperadditivityReport {
  std::vector<double> pieces;
  double piece_sum = 0.0;
  double total = 0.0;
  bool ok = false;
};

SuperadditivityReport jrate_superadditivity_check(
    const ProfileFunction& f, const std::vector<std::pair<double, double>>& intervals,
    std::size_t cells, const JOptions& options = {});

struct IotaValue {
  double t = 0.0;
  double radicand = 0.0;
  double b = 0.0;
  double iota = 0.0;
};

/// Evaluates the conjectured iota(t) formula as printed, b first.
IotaValue iota_eval(double t);

/// Profile families.
ProfileFunction tent_profile(double apex_time, std::size_t cells, double height = 1.0);
ProfileFunction trapezoid_profile(double beta, double alpha, std::size_t cells);

/// Blocks of the profile whose slope on [1/(j+1), 1/j) is +j^{1/3} then
/// -j^{1/3} on halves. Per-block rate 4/3 int |f'|^3 = 4/3 / (j + 1).
double l3l2_block_rate(std::size_t j);
/// int f'^2 over block j.
double l3l2_block_energy(std::size_t j);
/// Blocks 1..blocks, zero on [0, 1/(blocks+1)], each half split into
/// cells_per_half cells.
ProfileFunction l3l2_profile(std::size_t blocks, std::size_t cells_per_half);

}  // namespace landscape
