#include "landscape/gradient_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "landscape/metric_eval.hpp"

namespace landscape {

double GradientProfile::operator()(double theta) const {
  const double parabola = -theta * theta;
  if (!on_support) return parabola;
  const double root = std::sqrt(rho);
  const double off = theta - slope;
  if (std::abs(off) >= root) return parabola;
  // Tangent lines from the spike (v, rho - v^2) to the parabola.
  return rho - slope * slope - 2.0 * root * std::abs(off) - 2.0 * slope * off;
}

double GradientProfile::window_lo() const {
  return on_support ? slope - std::sqrt(rho) : 0.0;
}

double GradientProfile::window_hi() const {
  return on_support ? slope + std::sqrt(rho) : 0.0;
}

GradientProfile gradient_profile(const PlantedMeasure& mu, SpaceTimePoint q) {
  GradientProfile profile;
  for (const auto& seg : mu.segments()) {
    const auto& path = seg.path();
    if (!path.covers(q.t)) continue;
    if (std::abs(q.t - path.start_time()) <= kTolerance ||
        std::abs(q.t - path.end_time()) <= kTolerance) {
      if (std::abs(path.value_at(std::clamp(q.t, path.start_time(), path.end_time())) - q.x) <=
          kTolerance) {
        throw std::invalid_argument("gradient_profile: q is a segment endpoint");
      }
      continue;
    }
    if (std::abs(path.value_at(q.t) - q.x) > kTolerance) continue;
    profile.on_support = true;
    profile.slope = path.slope_at(q.t);
    profile.rho = seg.density().at(q.t);
    return profile;
  }
  return profile;
}

std::vector<double> sample_profile(const GradientProfile& profile,
                                   const std::vector<double>& thetas) {
  std::vector<double> out;
  out.reserve(thetas.size());
  for (double th : thetas) out.push_back(profile(th));
  return out;
}

std::vector<double> gradient_profile_fd(const PlantedMeasure& mu, SpaceTimePoint q,
                                        const std::vector<double>& thetas, double h,
                                        std::size_t cells) {
  if (!(h > 0.0)) throw std::invalid_argument("gradient_profile_fd: h must be positive");
  std::vector<double> out;
  out.reserve(thetas.size());
  for (double th : thetas) {
    const SpaceTimePoint end{q.x + h * th, q.t + h};
    out.push_back(evaluate_emu_between(mu, q, end, cells) / h);
  }
  return out;
}

double q_energy(const GradientProfile& profile) {
  if (!profile.on_support || profile.rho <= 0.0) return 0.0;
  // Inside the window f' = -2 (sqrt(rho) sgn(theta - v) + v).
  const double root = std::sqrt(profile.rho);
  const double v = profile.slope;
  const double left = (v - root) * (v - root);   // (f'/2)^2 left of v
  const double right = (v + root) * (v + root);  // (f'/2)^2 right of v
  auto cube = [](double a) { return a * a * a; };
  const double lo = v - root, hi = v + root;
  return left * root + right * root - (cube(hi) - cube(lo)) / 3.0;
}

double q_energy(const std::vector<double>& thetas, const std::vector<double>& values,
                double tol) {
  if (thetas.size() != values.size() || thetas.size() < 2) {
    throw std::invalid_argument("q_energy: need matching theta and value samples");
  }
  for (std::size_t idx : {std::size_t{0}, thetas.size() - 1}) {
    if (std::abs(values[idx] + thetas[idx] * thetas[idx]) > tol) {
      throw std::invalid_argument("q_energy: profile tails do not match -theta^2");
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < thetas.size(); ++i) {
    const double a = thetas[i], b = thetas[i + 1];
    const double s = (values[i + 1] - values[i]) / (b - a);
    total += s * s * (b - a) - 4.0 * (b * b * b - a * a * a) / 3.0;
  }
  return total / 4.0;
}

double density_from_gradient(const PlantedMeasure& mu, SpaceTimePoint q,
                             const std::vector<double>& thetas) {
  const auto profile = gradient_profile(mu, q);
  double best = 0.0;
  for (double th : thetas) best = std::max(best, profile(th) + th * th);
  return best;
}

std::vector<double> theta_grid(double lo, double hi, std::size_t n) {
  if (!(lo < hi) || n == 0) throw std::invalid_argument("theta_grid: bad range");
  std::vector<double> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
  }
  return out;
}

}  // namespace landscape
