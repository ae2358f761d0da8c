#include "landscape/geodesic_rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace landscape {

ProfileFunction::ProfileFunction(std::vector<double> times, std::vector<double> slopes)
    : times_(std::move(times)), slopes_(std::move(slopes)) {
  if (times_.size() < 2 || slopes_.size() + 1 != times_.size()) {
    throw std::invalid_argument("ProfileFunction: need n+1 times and n slopes");
  }
  if (std::abs(times_.front()) > 1e-12 || std::abs(times_.back() - 1.0) > 1e-12) {
    throw std::invalid_argument("ProfileFunction: time grid must span [0, 1]");
  }
  double closure = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < slopes_.size(); ++i) {
    if (!(times_[i] < times_[i + 1])) {
      throw std::invalid_argument("ProfileFunction: times must strictly increase");
    }
    if (!std::isfinite(slopes_[i])) {
      throw std::invalid_argument("ProfileFunction: non-finite slope");
    }
    const double dt = times_[i + 1] - times_[i];
    closure += slopes_[i] * dt;
    scale += std::abs(slopes_[i]) * dt;
  }
  if (std::abs(closure) > 1e-9 * std::max(1.0, scale)) {
    throw std::invalid_argument("ProfileFunction: f(1) must equal f(0) = 0");
  }
}

ProfileFunction ProfileFunction::from_breakpoints(
    const std::vector<std::pair<double, double>>& points, std::size_t cells) {
  if (points.size() < 2) {
    throw std::invalid_argument("ProfileFunction: need at least two breakpoints");
  }
  if (std::abs(points.front().second) > 1e-12 || std::abs(points.back().second) > 1e-12) {
    throw std::invalid_argument("ProfileFunction: f(0) and f(1) must be 0");
  }
  cells = std::max<std::size_t>(cells, 1);
  std::vector<double> times;
  std::vector<double> values;
  for (std::size_t p = 0; p + 1 < points.size(); ++p) {
    const auto [t0, f0] = points[p];
    const auto [t1, f1] = points[p + 1];
    if (!(t0 < t1)) throw std::invalid_argument("ProfileFunction: times must increase");
    const auto pieces = static_cast<std::size_t>(
        std::max(1.0, std::ceil((t1 - t0) * static_cast<double>(cells) - 1e-9)));
    for (std::size_t s = 0; s < pieces; ++s) {
      const double lambda = static_cast<double>(s) / static_cast<double>(pieces);
      times.push_back(t0 + lambda * (t1 - t0));
      values.push_back(f0 + lambda * (f1 - f0));
    }
  }
  times.push_back(points.back().first);
  values.push_back(points.back().second);
  std::vector<double> slopes(times.size() - 1);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    slopes[i] = (values[i + 1] - values[i]) / (times[i + 1] - times[i]);
  }
  return ProfileFunction(std::move(times), std::move(slopes));
}

double ProfileFunction::value_at(double t) const {
  if (t < -1e-12 || t > 1.0 + 1e-12) {
    throw std::out_of_range("ProfileFunction: time outside [0, 1]");
  }
  double f = 0.0;
  for (std::size_t i = 0; i < slopes_.size(); ++i) {
    if (t <= times_[i]) break;
    f += slopes_[i] * (std::min(t, times_[i + 1]) - times_[i]);
  }
  return f;
}

ProfileFunction ProfileFunction::scaled(double a) const {
  std::vector<double> s(slopes_);
  for (double& v : s) v *= a;
  return ProfileFunction(times_, std::move(s));
}

std::vector<std::pair<double, double>> ProfileFunction::breakpoints() const {
  std::vector<std::pair<double, double>> out{{times_.front(), 0.0}};
  double f = 0.0;
  for (std::size_t i = 0; i < slopes_.size(); ++i) {
    f += slopes_[i] * (times_[i + 1] - times_[i]);
    out.emplace_back(times_[i + 1], f);
  }
  out.back().second = 0.0;
  return out;
}

namespace {

// Range-add / range-sum tree over cells with weights dt. Each node keeps
// sum dt, sum dt*L and sum dt*L^2 for the multiplier field L.
class WeightedTree {
 public:
  explicit WeightedTree(const std::vector<double>& weights) : n_(weights.size()) {
    sw_.assign(4 * n_, 0.0);
    s1_.assign(4 * n_, 0.0);
    s2_.assign(4 * n_, 0.0);
    lazy_.assign(4 * n_, 0.0);
    build(1, 0, n_, weights);
  }

  struct Sums {
    double w = 0.0, l1 = 0.0, l2 = 0.0;
  };

  Sums query(std::size_t a, std::size_t b) { return query(1, 0, n_, a, b); }
  void add(std::size_t a, std::size_t b, double delta) { add(1, 0, n_, a, b, delta); }

  void values(std::vector<double>& out) {
    out.assign(n_, 0.0);
    collect(1, 0, n_, 0.0, out);
  }

 private:
  void build(std::size_t node, std::size_t lo, std::size_t hi, const std::vector<double>& w) {
    if (hi - lo == 1) {
      sw_[node] = w[lo];
      return;
    }
    const std::size_t mid = (lo + hi) / 2;
    build(2 * node, lo, mid, w);
    build(2 * node + 1, mid, hi, w);
    sw_[node] = sw_[2 * node] + sw_[2 * node + 1];
  }

  void apply(std::size_t node, double delta) {
    s2_[node] += 2.0 * delta * s1_[node] + delta * delta * sw_[node];
    s1_[node] += delta * sw_[node];
    lazy_[node] += delta;
  }

  void push(std::size_t node) {
    if (lazy_[node] != 0.0) {
      apply(2 * node, lazy_[node]);
      apply(2 * node + 1, lazy_[node]);
      lazy_[node] = 0.0;
    }
  }

  Sums query(std::size_t node, std::size_t lo, std::size_t hi, std::size_t a, std::size_t b) {
    if (b <= lo || hi <= a) return {};
    if (a <= lo && hi <= b) return {sw_[node], s1_[node], s2_[node]};
    push(node);
    const std::size_t mid = (lo + hi) / 2;
    const Sums l = query(2 * node, lo, mid, a, b);
    const Sums r = query(2 * node + 1, mid, hi, a, b);
    return {l.w + r.w, l.l1 + r.l1, l.l2 + r.l2};
  }

  void add(std::size_t node, std::size_t lo, std::size_t hi, std::size_t a, std::size_t b,
           double delta) {
    if (b <= lo || hi <= a) return;
    if (a <= lo && hi <= b) {
      apply(node, delta);
      return;
    }
    push(node);
    const std::size_t mid = (lo + hi) / 2;
    add(2 * node, lo, mid, a, b, delta);
    add(2 * node + 1, mid, hi, a, b, delta);
    s1_[node] = s1_[2 * node] + s1_[2 * node + 1];
    s2_[node] = s2_[2 * node] + s2_[2 * node + 1];
  }

  void collect(std::size_t node, std::size_t lo, std::size_t hi, double carry,
               std::vector<double>& out) {
    if (hi - lo == 1) {
      out[lo] = s1_[node] / sw_[node] + carry;
      return;
    }
    carry += lazy_[node];
    const std::size_t mid = (lo + hi) / 2;
    collect(2 * node, lo, mid, carry, out);
    collect(2 * node + 1, mid, hi, carry, out);
  }

  std::size_t n_;
  std::vector<double> sw_, s1_, s2_, lazy_;
};

struct Constraint {
  std::size_t i = 0;
  std::size_t j = 0;
  double rhs = 0.0;
  double lambda = 0.0;
};

// One exact coordinate step on a multiplier. Returns |change|.
double update(Constraint& c, WeightedTree& tree) {
  const auto s = tree.query(c.i, c.j);
  const double mass = s.l2 / 4.0;
  if (c.lambda == 0.0 && mass >= c.rhs) return 0.0;
  const double half_b = s.l1 / 2.0;
  const double quarter_w = s.w / 4.0;
  const double disc = half_b * half_b - 4.0 * quarter_w * (mass - c.rhs);
  double delta;
  if (disc < 0.0) {
    delta = -c.lambda;
  } else {
    const double root = std::sqrt(disc);
    delta = half_b + root > 0.0 ? 2.0 * (c.rhs - mass) / (half_b + root)
                                : std::sqrt(c.rhs / quarter_w);
    delta = std::max(delta, -c.lambda);
  }
  if (delta == 0.0) return 0.0;
  c.lambda += delta;
  tree.add(c.i, c.j, delta);
  return std::abs(delta);
}

struct Evaluation {
  std::vector<double> rho;
  double objective = 0.0;
  double dual = 0.0;
  double violation = 0.0;
};

// Primal point from the multipliers, scaled up until every constraint holds.
Evaluation evaluate(const std::vector<double>& dt, const std::vector<double>& field,
                    const std::vector<Constraint>& cons) {
  const std::size_t n = dt.size();
  Evaluation ev;
  ev.rho.resize(n);
  std::vector<double> prefix(n + 1, 0.0);
  double cubic = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double l = std::max(0.0, field[k]);
    ev.rho[k] = l * l / 4.0;
    prefix[k + 1] = prefix[k] + ev.rho[k] * dt[k];
    cubic += dt[k] * l * l * l / 12.0;
  }
  double scale = 1.0;
  double linear = 0.0;
  for (const auto& c : cons) {
    const double mass = prefix[c.j] - prefix[c.i];
    if (mass < c.rhs) scale = std::max(scale, mass > 0.0 ? c.rhs / mass : 1e300);
    linear += c.lambda * c.rhs;
  }
  double objective = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ev.rho[k] *= scale;
    objective += std::pow(ev.rho[k], 1.5) * dt[k];
  }
  ev.objective = 4.0 / 3.0 * objective;
  ev.dual = linear - cubic;
  prefix.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + ev.rho[k] * dt[k];
  for (const auto& c : cons) {
    ev.violation = std::max(ev.violation, c.rhs - (prefix[c.j] - prefix[c.i]));
  }
  return ev;
}

}  // namespace

JSolution jrate_solve(const ProfileFunction& f, const JOptions& options) {
  const auto& t = f.times();
  const auto& s = f.slopes();
  const std::size_t n = f.cell_count();
  std::vector<double> dt(n);
  std::vector<double> p1(n + 1, 0.0), p2(n + 1, 0.0);
  double energy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    dt[k] = t[k + 1] - t[k];
    p1[k + 1] = p1[k] + s[k] * dt[k];
    p2[k + 1] = p2[k] + s[k] * s[k] * dt[k];
    energy += s[k] * s[k] * dt[k];
  }

  std::vector<Constraint> cons;
  const double floor = 1e-13 * std::max(1.0, energy);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      const double m1 = p1[j] - p1[i];
      const double rhs = (p2[j] - p2[i]) - m1 * m1 / (t[j] - t[i]);
      if (rhs > floor) cons.push_back({i, j, rhs, 0.0});
    }
  }

  JSolution sol;
  sol.times = t;
  sol.constraints = cons.size();
  if (cons.empty()) {
    sol.rho.assign(n, 0.0);
    sol.converged = true;
    return sol;
  }

  WeightedTree tree(dt);
  if (options.perturb_start) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double level = 2.0 * std::sqrt(energy) / static_cast<double>(cons.size());
    for (auto& c : cons) {
      c.lambda = level * unit(rng);
      tree.add(c.i, c.j, c.lambda);
    }
  }

  std::vector<double> field;
  Evaluation best;
  best.objective = std::numeric_limits<double>::infinity();
  std::size_t updates = 0;
  std::vector<std::size_t> active;
  for (;;) {
    for (auto& c : cons) update(c, tree);
    updates += cons.size();
    active.clear();
    for (std::size_t a = 0; a < cons.size(); ++a) {
      if (cons[a].lambda > 0.0) active.push_back(a);
    }
    for (int sweep = 0; sweep < 40 && !active.empty(); ++sweep) {
      double moved = 0.0;
      for (std::size_t a : active) moved = std::max(moved, update(cons[a], tree));
      updates += active.size();
      if (moved < 1e-15) break;
    }
    tree.values(field);
    auto ev = evaluate(dt, field, cons);
    const double gap = (ev.objective - ev.dual) / std::max(1.0, ev.objective);
    if (ev.objective < best.objective) {
      best = std::move(ev);
      sol.duality_residual = gap;
    }
    if (gap <= options.tol) {
      sol.converged = true;
      break;
    }
    if (updates >= options.max_updates) break;
  }

  sol.rho = best.rho;
  sol.objective = best.objective;
  sol.dual_value = best.dual;
  sol.max_violation = std::max(0.0, best.violation);
  sol.updates = updates;
  if (!sol.converged) {
    std::ostringstream msg;
    msg << "update budget of " << options.max_updates
        << " exhausted; best relative duality gap " << sol.duality_residual;
    sol.diagnostic = msg.str();
  }
  return sol;
}

double jrate_two_piece(double a) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("jrate_two_piece: a must lie in (0, 1)");
  a = std::min(a, 1.0 - a);
  const double b = 1.0 - a;
  return (3.0 - 4.0 * a * a) / (6.0 * b * b * b * a * a);
}

JBounds jrate_bounds(const ProfileFunction& f) {
  double sq = 0.0, cube = 0.0;
  for (std::size_t k = 0; k < f.cell_count(); ++k) {
    const double dt = f.times()[k + 1] - f.times()[k];
    const double v = std::abs(f.slopes()[k]);
    sq += v * v * dt;
    cube += v * v * v * dt;
  }
  return {4.0 / 3.0 * std::pow(sq, 1.5), 4.0 / 3.0 * cube};
}

ScalingReport jrate_scaling_check(const ProfileFunction& f, double a,
                                  const JOptions& options) {
  ScalingReport r;
  r.j_f = jrate_solve(f, options).objective;
  r.j_af = jrate_solve(f.scaled(a), options).objective;
  r.expected = std::pow(std::abs(a), 3.0) * r.j_f;
  const double denom = std::max(std::abs(r.j_af), 1e-300);
  r.relative_error = r.j_af == 0.0 && r.expected == 0.0 ? 0.0
                                                         : std::abs(r.j_af - r.expected) / denom;
  return r;
}

ProfileFunction affine_piece(const ProfileFunction& f, double a, double b,
                             std::size_t cells) {
  if (!(0.0 <= a && a < b && b <= 1.0)) {
    throw std::invalid_argument("affine_piece: need 0 <= a < b <= 1");
  }
  const double len = b - a;
  const double fa = f.value_at(a);
  const double fb = f.value_at(b);
  const double factor = std::pow(len, -2.0 / 3.0);
  auto mapped = [&](double tt) {
    const double r = (tt - a) / len;
    return factor * (f.value_at(tt) - fa - r * (fb - fa));
  };
  std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
  for (double tt : f.times()) {
    if (tt > a + 1e-12 && tt < b - 1e-12) pts.emplace_back((tt - a) / len, mapped(tt));
  }
  pts.emplace_back(1.0, 0.0);
  return ProfileFunction::from_breakpoints(pts, cells);
}

SuperadditivityReport jrate_superadditivity_check(
    const ProfileFunction& f, const std::vector<std::pair<double, double>>& intervals,
    std::size_t cells, const JOptions& options) {
  SuperadditivityReport r;
  r.total = jrate_solve(f, options).objective;
  for (const auto& [a, b] : intervals) {
    const double j = jrate_solve(affine_piece(f, a, b, cells), options).objective;
    r.pieces.push_back(j);
    r.piece_sum += j;
  }
  // Each side carries its own discretization error, hence the 1% slack.
  r.ok = r.piece_sum <= r.total * 1.01 + options.tol;
  return r;
}

IotaValue iota_eval(double t) {
  if (!(t > 0.0 && t <= 0.5)) throw std::invalid_argument("iota_eval: t must lie in (0, 1/2]");
  IotaValue v;
  v.t = t;
  const double s2t = std::sqrt(2.0 * t);
  const double p32 = std::pow(2.0 * t, 1.5);
  const double p52 = std::pow(2.0 * t, 2.5);
  v.radicand = 72.0 * t * t + 6.0 * p32 - 143.0 * t - 12.0 * s2t + 72.0;
  if (v.radicand < 0.0) {
    throw std::domain_error("iota_eval: negative radicand in b");
  }
  v.b = std::sqrt(v.radicand) / ((9.0 - 8.0 * t) * std::sqrt(t));
  const double num = -p52 * (9.0 * v.b + 4.0) + 6.0 * t * t * (25.0 * v.b + 13.0) -
                     2.0 * p32 * (26.0 * v.b + 19.0) - 48.0 * s2t + 24.0;
  const double c = 3.0 - std::sqrt(8.0 * t);
  v.iota = num / (3.0 * c * c * c * (1.0 - t) * (1.0 - t) * t * t);
  return v;
}

ProfileFunction tent_profile(double apex_time, std::size_t cells, double height) {
  if (!(apex_time > 0.0 && apex_time < 1.0)) {
    throw std::invalid_argument("tent_profile: apex must lie in (0, 1)");
  }
  return ProfileFunction::from_breakpoints({{0.0, 0.0}, {apex_time, height}, {1.0, 0.0}},
                                           cells);
}

ProfileFunction trapezoid_profile(double beta, double alpha, std::size_t cells) {
  if (!(beta > 0.0 && beta < 0.5)) {
    throw std::invalid_argument("trapezoid_profile: beta must lie in (0, 1/2)");
  }
  return ProfileFunction::from_breakpoints(
      {{0.0, 0.0}, {beta, alpha}, {1.0 - beta, alpha}, {1.0, 0.0}}, cells);
}

double l3l2_block_rate(std::size_t j) {
  if (j == 0) throw std::invalid_argument("l3l2 blocks start at j = 1");
  const double jj = static_cast<double>(j);
  // |f'|^3 = j on a block of length 1/(j(j+1)).
  return 4.0 / 3.0 * jj * (1.0 / (jj * (jj + 1.0)));
}

double l3l2_block_energy(std::size_t j) {
  if (j == 0) throw std::invalid_argument("l3l2 blocks start at j = 1");
  const double jj = static_cast<double>(j);
  return std::pow(jj, 2.0 / 3.0) / (jj * (jj + 1.0));
}

ProfileFunction l3l2_profile(std::size_t blocks, std::size_t cells_per_half) {
  if (blocks == 0 || cells_per_half == 0) {
    throw std::invalid_argument("l3l2_profile: need at least one block and one cell");
  }
  std::vector<double> times{0.0};
  std::vector<double> slopes;
  const double start = 1.0 / static_cast<double>(blocks + 1);
  // The flat part gets cells comparable to the smallest block.
  const std::size_t flat_cells = 2 * cells_per_half;
  for (std::size_t c = 1; c <= flat_cells; ++c) {
    times.push_back(start * static_cast<double>(c) / static_cast<double>(flat_cells));
    slopes.push_back(0.0);
  }
  for (std::size_t j = blocks; j >= 1; --j) {
    const double jj = static_cast<double>(j);
    const double lo = 1.0 / (jj + 1.0);
    const double mid = (1.0 + 1.0 / (2.0 * jj)) / (jj + 1.0);
    const double hi = 1.0 / jj;
    const double slope = std::cbrt(jj);
    for (int half = 0; half < 2; ++half) {
      const double a = half == 0 ? lo : mid;
      const double b = half == 0 ? mid : hi;
      for (std::size_t c = 1; c <= cells_per_half; ++c) {
        times.push_back(a + (b - a) * static_cast<double>(c) / static_cast<double>(cells_per_half));
        slopes.push_back(half == 0 ? slope : -slope);
      }
    }
    times.back() = hi;
  }
  times.back() = 1.0;
  return ProfileFunction(std::move(times), std::move(slopes));
}

}  // namespace landscape
