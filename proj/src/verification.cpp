#include "landscape/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "landscape/geodesic_extract.hpp"
#include "landscape/geodesic_rate.hpp"
#include "landscape/gradient_field.hpp"
#include "landscape/metric_eval.hpp"
#include "landscape/multipoint.hpp"
#include "landscape/planted_measure.hpp"
#include "landscape/rate_function.hpp"
#include "landscape/symmetry.hpp"

namespace landscape {
namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double relative_error(double computed, double expected) {
  return std::abs(computed - expected) / std::max(std::abs(expected), 1e-300);
}

std::string fmt(const char* pattern, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

// Collects cases for one criterion.
class Cases {
 public:
  explicit Cases(double scale) : scale_(scale) {}

  void relative(std::string label, double computed, double expected, double tol) {
    add(std::move(label), expected, computed, relative_error(computed, expected), tol);
  }
  void absolute(std::string label, double computed, double expected, double tol) {
    add(std::move(label), expected, computed, std::abs(computed - expected), tol);
  }
  // computed <= bound + tol
  void at_most(std::string label, double computed, double bound, double tol) {
    add(std::move(label), bound, computed, std::max(0.0, computed - bound), tol);
  }
  void holds(std::string label, bool ok) {
    add(std::move(label), 1.0, ok ? 1.0 : 0.0, ok ? 0.0 : 1.0, 0.0);
  }

  std::vector<CaseResult> take() { return std::move(cases_); }

 private:
  void add(std::string label, double expected, double computed, double error,
           double tol) {
    cases_.push_back({std::move(label), expected, computed, error, tol * scale_});
  }

  double scale_;
  std::vector<CaseResult> cases_;
};

// Segments in disjoint spatial bands, each a two- or three-piece polyline with
// one or two density pieces.
PlantedMeasure random_network(Rng& rng) {
  const std::size_t count = uniform_int(rng, 1, 3);
  SegmentNetwork network;
  for (std::size_t i = 0; i < count; ++i) {
    const double band = -0.9 + 0.7 * static_cast<double>(i);
    const double t0 = uniform(rng, 0.0, 0.3);
    const double t1 = uniform(rng, 0.7, 1.0);
    const std::size_t pieces = uniform_int(rng, 1, 2);
    std::vector<SpaceTimePoint> points;
    for (std::size_t k = 0; k <= pieces; ++k) {
      const double t = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(pieces);
      points.push_back({band + uniform(rng, 0.0, 0.5), t});
    }
    std::vector<DensityPiece> density;
    if (uniform_int(rng, 0, 1) == 0) {
      density.push_back({t0, t1, uniform(rng, 0.2, 2.5)});
    } else {
      const double mid = uniform(rng, t0 + 0.1 * (t1 - t0), t1 - 0.1 * (t1 - t0));
      density.push_back({t0, mid, uniform(rng, 0.2, 2.5)});
      density.push_back({mid, t1, uniform(rng, 0.2, 2.5)});
    }
    network.emplace_back(PolylinePath(points), PiecewiseDensity(density));
  }
  return PlantedMeasure(std::move(network));
}

PlantedMeasure vertical_measure(double rho) {
  return PlantedMeasure({constant_segment({0, 0}, {0, 1}, rho)});
}

PlantedMeasure aligned_v_measure() {
  return PlantedMeasure({constant_segment({0, 0}, {-0.75, 0.75}, 2.0),
                         constant_segment({0, 0}, {0.75, 0.75}, 1.5)});
}

PlantedMeasure aligned_y_measure() {
  return PlantedMeasure({constant_segment({0, 0}, {0, 0.25}, 2.0),
                         constant_segment({0, 0.25}, {-0.75, 1}, 2.5),
                         constant_segment({0, 0.25}, {0.75, 1}, 2.0)});
}

// Grid with hx = ht = 1/16 on [-1, 1] x [0, 1]. The networks below pass
// through grid nodes at every layer.
GridSpec small_grid() { return GridSpec{-1.0, 1.0, 0.0, 1.0, 32, 16}; }

struct NamedMeasure {
  std::string name;
  PlantedMeasure mu;
};

std::vector<NamedMeasure> geodesic_measures() {
  return {{"empty", PlantedMeasure()},
          {"vertical", vertical_measure(1.0)},
          {"V", aligned_v_measure()},
          {"Y", aligned_y_measure()}};
}

// 1
void one_point(Cases& c, const VerifyOptions&) {
  const TemporalPair u(0, 0, 0, 1);
  for (double alpha : {0.5, 1.0, 2.0}) {
    const double expected = 4.0 / 3.0 * std::pow(alpha, 1.5);
    c.relative(fmt("closed form alpha=%g", alpha), one_point_rate(alpha, u), expected, 0.01);
    c.relative(fmt("solver alpha=%g", alpha), solve_multipoint({{u, alpha}}).rate,
               expected, 0.01);
  }
}

// 2
void two_point(Cases& c, const VerifyOptions&) {
  for (double alpha : {-0.5, 0.0, 1.0}) {
    const std::vector<PointConstraint> constraints = {
        {TemporalPair(0, 0, -1, 1), alpha}, {TemporalPair(0, 0, 1, 1), alpha}};
    const MultipointSolution sol = solve_multipoint(constraints);
    const double expected =
        alpha <= 0 ? 8.0 / 3.0 * std::pow(1 + alpha, 1.5)
                   : 4.0 / 3.0 + 2 * alpha + 4.0 / 3.0 * std::pow(1 + alpha, 1.5);
    c.relative(fmt("rate alpha=%g", alpha), sol.rate, expected, 0.02);
    const std::string want = alpha <= 0 ? "V" : "Y";
    c.holds(fmt("topology alpha=%g is ", alpha) + want + " (got " + sol.label + ")",
            sol.label == want);
    if (alpha == 1.0) {
      double t_star = std::numeric_limits<double>::quiet_NaN();
      for (const auto& node : sol.topology.nodes) {
        if (node.junction) t_star = node.point.t;
      }
      c.absolute("junction time alpha=1", t_star, 3 - 2 * std::sqrt(2.0), 0.02);
    }
  }
}

// 3
void tent(Cases& c, const VerifyOptions& options) {
  JOptions jopt;
  jopt.seed = options.seed;
  const JSolution half = jrate_solve(tent_profile(0.5, 400), jopt);
  c.relative("a=1/2", half.objective, 32.0 / 3.0, 0.01);
  const JSolution quarter = jrate_solve(tent_profile(0.25, 400), jopt);
  c.relative("a=1/4", quarter.objective, 1408.0 / 81.0, 0.02);
  c.absolute("a=1/4 two-piece closed form", jrate_two_piece(0.25), 1408.0 / 81.0, 1e-12);
}

// 4
void scaling(Cases& c, const VerifyOptions& options) {
  JOptions jopt;
  jopt.seed = options.seed;
  const ScalingReport r = jrate_scaling_check(tent_profile(0.5, 400), 2.0, jopt);
  c.relative("J(2f)/J(f)", r.j_af / r.j_f, 8.0, 0.01);
}

ProfileFunction random_profile(Rng& rng, std::size_t cells) {
  const std::size_t interior = uniform_int(rng, 1, 4);
  std::vector<double> times;
  while (times.size() < interior) {
    const double t = uniform(rng, 0.05, 0.95);
    if (std::all_of(times.begin(), times.end(),
                    [&](double s) { return std::abs(s - t) > 0.05; })) {
      times.push_back(t);
    }
  }
  std::sort(times.begin(), times.end());
  std::vector<std::pair<double, double>> points = {{0.0, 0.0}};
  for (double t : times) points.emplace_back(t, uniform(rng, -1.0, 1.0));
  points.emplace_back(1.0, 0.0);
  return ProfileFunction::from_breakpoints(points, cells);
}

// 5
void sandwich(Cases& c, const VerifyOptions& options) {
  JOptions jopt;
  jopt.seed = options.seed;
  Rng rng(options.seed + 5);
  for (int k = 0; k < 20; ++k) {
    const ProfileFunction f = random_profile(rng, 64);
    const JBounds b = jrate_bounds(f);
    const JSolution s = jrate_solve(f, jopt);
    c.at_most(fmt("profile %g lower <= J", k), b.lower, s.objective, 1e-6);
    c.at_most(fmt("profile %g J <= upper", k), s.objective, b.upper, 1e-6);
  }
  const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> flat = {
      {"tent", {{0, 0}, {0.5, 1}, {1, 0}}},
      {"zigzag", {{0, 0}, {0.25, 0.25}, {0.5, 0}, {0.75, -0.25}, {1, 0}}},
      {"two speeds", {{0, 0}, {0.25, 0.5}, {0.5, 0}, {0.75, -0.25}, {1, 0}}}};
  for (const auto& [name, points] : flat) {
    const ProfileFunction f = ProfileFunction::from_breakpoints(points, 200);
    const JBounds b = jrate_bounds(f);
    const JSolution s = jrate_solve(f, jopt);
    c.relative(name + " J = upper", s.objective, b.upper, 0.01);
  }
}

// 6
void trapezoid(Cases& c, const VerifyOptions& options) {
  JOptions jopt;
  jopt.seed = options.seed;
  for (double beta : {0.125, 0.25}) {
    const JSolution s = jrate_solve(trapezoid_profile(beta, 1.0, 400), jopt);
    c.relative(fmt("beta=%g", beta), s.objective, 4.0 / 3.0 * std::pow(2 / beta, 1.5), 0.02);
  }
}

// 7
void divergent(Cases& c, const VerifyOptions& options) {
  constexpr std::size_t kBlocks = 50;
  // 4/3 int |f'|^3 over each block, summed cell by cell.
  const ProfileFunction f = l3l2_profile(kBlocks, 1);
  double worst = 0.0;
  for (std::size_t j = 1; j <= kBlocks; ++j) {
    const double lo = 1.0 / static_cast<double>(j + 1);
    const double hi = 1.0 / static_cast<double>(j);
    double cubic = 0.0;
    for (std::size_t k = 0; k < f.cell_count(); ++k) {
      const double a = f.times()[k];
      const double b = f.times()[k + 1];
      if (a >= lo - 1e-15 && b <= hi + 1e-15) {
        cubic += std::pow(std::abs(f.slopes()[k]), 3) * (b - a);
      }
    }
    worst = std::max(worst, relative_error(l3l2_block_rate(j), 4.0 / 3.0 * cubic));
  }
  c.absolute("block rates j<=50 against 4/3 int |f'|^3", worst, 0.0, 1e-12);

  JOptions jopt;
  jopt.seed = options.seed;
  for (std::size_t j : {1, 3, 10, 50}) {
    const double lo = 1.0 / static_cast<double>(j + 1);
    const double hi = 1.0 / static_cast<double>(j);
    const JSolution s = jrate_solve(affine_piece(f, lo, hi, 200), jopt);
    c.relative(fmt("solver block j=%g", static_cast<double>(j)), s.objective,
               l3l2_block_rate(j), 0.02);
  }

  constexpr std::size_t kTruncation = 10;
  double partial = 0.0;
  for (std::size_t j = 1; j <= kTruncation; ++j) partial += l3l2_block_rate(j);
  const JSolution s = jrate_solve(l3l2_profile(kTruncation, 8), jopt);
  c.relative("solver on 10 blocks", s.objective, partial, 0.02);

  bool increasing = true;
  double sum = 0.0;
  for (std::size_t j = 1; j <= kBlocks; ++j) {
    const double next = sum + l3l2_block_rate(j);
    increasing = increasing && next > sum;
    sum = next;
  }
  c.holds("partial sums strictly increase to j=50", increasing);

  // Block energies decay like j^{-4/3}; the remainder past N is bounded by the
  // integral 3 N^{-1/3}.
  constexpr std::size_t kSummed = 1'000'000;
  double tail = 0.0;
  for (std::size_t j = kSummed; j > kBlocks; --j) tail += l3l2_block_energy(j);
  tail += 3.0 * std::pow(static_cast<double>(kSummed), -1.0 / 3.0);
  c.at_most("energy tail beyond j=50", tail, 0.0, 1e-3);
}

// 8
void metric(Cases& c, const VerifyOptions&) {
  const GridSpec fine{-1.0, 1.0, 0.0, 1.0, 400, 400};
  const PlantedMeasure vertical = vertical_measure(1.0);
  c.relative("ride e(0,0;0,1)", evaluate_emu(vertical, TemporalPair(0, 0, 0, 1), fine), 1.0,
             0.01);
  c.absolute("empty e(0,0;0,1)", evaluate_emu(PlantedMeasure(), TemporalPair(0, 0, 0, 1), fine),
             0.0, 0.01);
  c.relative("cross e(-1,0;1,1)", evaluate_emu(vertical, TemporalPair(-1, 0, 1, 1), fine), -4.0,
             0.01);
  for (const auto& [name, mu] : geodesic_measures()) {
    const AxiomReport report = check_metric_axioms(evaluate_emu_grid(mu, small_grid()));
    for (const auto& check : report.checks) {
      c.absolute(name + " " + check.name + " violations",
                 static_cast<double>(check.violations), 0.0, 0.0);
    }
  }
}

// 9
void theta_relation(Cases& c, const VerifyOptions& options) {
  Rng rng(options.seed + 9);
  for (int k = 0; k < 10; ++k) {
    const RateReport r = network_rate(random_network(rng));
    c.at_most(fmt("network %g", k), r.theta, 0.75 * r.rate, 1e-6);
  }
  const RateReport v = network_rate(vertical_measure(1.5));
  c.relative("vertical equality", v.theta, 0.75 * v.rate, 0.01);
}

// 10
void partition(Cases& c, const VerifyOptions&) {
  struct Example {
    std::string name;
    PlantedMeasure mu;
    PolylinePath path;
  };
  const std::vector<Example> examples = {
      {"dirichlet", PlantedMeasure(),
       PolylinePath({{0, 0}, {0.3, 0.5}, {-0.2, 1}})},
      {"vertical", vertical_measure(1.0), PolylinePath::straight({0, 0}, {0, 1})},
      {"partial ride",
       PlantedMeasure({constant_segment({0.2, 0.3}, {0.2, 0.7}, 2.0)}),
       PolylinePath({{0, 0}, {0.2, 0.3}, {0.2, 0.7}, {0, 1}})}};
  for (const auto& ex : examples) {
    const double exact = path_rate(ex.mu, ex.path);
    double above = 0.0;
    double at_finest = 0.0;
    for (std::size_t n = 1; n <= 256; n *= 2) {
      const Partition p = Partition::uniform(0.0, 1.0, n);
      at_finest = partition_rate(ex.path, weight_function(ex.mu, ex.path, p));
      above = std::max(above, at_finest - exact);
    }
    c.at_most(ex.name + " partition rate <= path rate", exact + above, exact, 1e-12);
    if (exact == 0.0) {
      c.absolute(ex.name + " mesh 1/256", at_finest, exact, 1e-12);
    } else {
      c.relative(ex.name + " mesh 1/256", at_finest, exact, 0.01);
    }
  }
}

// 11
void gradient(Cases& c, const VerifyOptions&) {
  const SpaceTimePoint q{0.0, 0.5};
  for (double rho : {1.0, 4.0}) {
    const PlantedMeasure mu({constant_segment({-0.25, 0}, {0.25, 1}, rho)});
    const GradientProfile profile = gradient_profile(mu, q);
    const double expected = 4.0 / 3.0 * std::pow(rho, 1.5);
    c.relative(fmt("closed form rho=%g", rho), q_energy(profile), expected, 1e-12);
    const auto thetas = theta_grid(profile.window_lo() - 0.5, profile.window_hi() + 0.5, 400);
    for (double h : {1e-2, 5e-3}) {
      const auto values = gradient_profile_fd(mu, q, thetas, h);
      c.relative(fmt("finite difference rho=%g", rho) + fmt(" h=%g", h),
                 q_energy(thetas, values, 1e-6), expected, 0.02);
    }
  }
}

// 12
void iota(Cases& c, const VerifyOptions&) {
  const double target = 8.0 / 27.0;
  const double at3 = iota_eval(1e-3).iota * 1e-6;
  const double at4 = iota_eval(1e-4).iota * 1e-8;
  c.absolute("iota(t) t^2 at t=1e-3", at3, target, 0.01);
  c.at_most("error at t=1e-4 below error at t=1e-3", std::abs(at4 - target),
            std::abs(at3 - target), 0.0);
}

// 13
void symmetry(Cases& c, const VerifyOptions& options) {
  Rng rng(options.seed + 13);
  for (int k = 0; k < 5; ++k) {
    const PlantedMeasure mu = random_network(rng);
    const double base = rate_of_measure(mu);
    const std::vector<std::pair<std::string, SymmetryMap>> maps = {
        {"time shift", SymmetryMap::time_shift(uniform(rng, -2, 2))},
        {"space shift", SymmetryMap::space_shift(uniform(rng, -2, 2))},
        {"shear", SymmetryMap::shear(uniform(rng, -2, 2))},
        {"KPZ rescale", SymmetryMap::kpz_rescale(uniform(rng, 0.5, 2))}};
    for (const auto& [name, map] : maps) {
      c.relative(fmt("network %g ", k) + name, rate_of_measure(map.apply(mu)), base, 1e-9);
    }
  }
}

// 14
void geodesics(Cases& c, const VerifyOptions&) {
  const GridSpec spec = small_grid();
  const double tau = tau_comp(spec);
  for (const auto& [name, mu] : geodesic_measures()) {
    const GridMetric e = evaluate_emu_grid(mu, spec);
    const double m = theta_total(e);
    double shortfall = 0.0;
    double wander = 0.0;
    std::size_t count = 0;
    for (std::size_t j : {std::size_t{0}, spec.nt / 4}) {
      for (std::size_t l : {spec.nt / 2 + 2, spec.nt}) {
        for (std::size_t i = 0; i <= spec.nx; i += 4) {
          for (std::size_t k = 0; k <= spec.nx; k += 4) {
            const PolylinePath path = rightmost_geodesic(e, i, j, k, l);
            const Partition p = grid_partition(spec, spec.t(j), spec.t(l));
            const double length = path_length_partition(e, path, p);
            shortfall = std::max(shortfall, std::abs(e.at(i, j, k, l) - length));
            // Grid geodesics sit on nodes, so they may stray by one spacing.
            const WanderReport w = wander_check(path, m, spec.hx());
            wander = std::max(wander, w.ok ? 0.0 : 1.0);
            ++count;
          }
        }
      }
    }
    c.at_most(name + " |e(u) - partition length|", shortfall, 0.0, tau);
    c.absolute(name + fmt(" wander failures over %g geodesics", static_cast<double>(count)),
               wander, 0.0, 0.0);
  }
}

struct Entry {
  CriterionInfo info;
  double time_limit;
  std::function<void(Cases&, const VerifyOptions&)> run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> list = {
      {{1, "one-point rate", "multipoint"}, 10.0, one_point},
      {{2, "two-point V/Y", "multipoint"}, 60.0, two_point},
      {{3, "tent geodesic rate", "jrate"}, 240.0, tent},
      {{4, "scaling law", "jrate"}, 0.0, scaling},
      {{5, "norm sandwich", "jrate"}, 0.0, sandwich},
      {{6, "trapezoid equality", "jrate"}, 0.0, trapezoid},
      {{7, "divergent family", "jrate"}, 0.0, divergent},
      {{8, "metric evaluator", "metric"}, 30.0, metric},
      {{9, "theta-rate relation", "rate"}, 0.0, theta_relation},
      {{10, "partition convergence", "rate"}, 0.0, partition},
      {{11, "gradient identity", "gradient"}, 0.0, gradient},
      {{12, "iota asymptotic", "iota"}, 0.0, iota},
      {{13, "symmetry invariance", "rate"}, 0.0, symmetry},
      {{14, "geodesic extraction", "metric"}, 0.0, geodesics},
  };
  return list;
}

}  // namespace

const std::vector<CriterionInfo>& criteria() {
  static const std::vector<CriterionInfo> list = [] {
    std::vector<CriterionInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return list;
}

bool criterion_selected(const CriterionInfo& info, const std::string& filter) {
  if (filter.empty()) return true;
  return filter == info.group || filter == std::to_string(info.id) ||
         info.name.find(filter) != std::string::npos;
}

CriterionResult run_criterion(int id, const VerifyOptions& options) {
  const auto& list = entries();
  const auto it = std::find_if(list.begin(), list.end(),
                               [&](const Entry& e) { return e.info.id == id; });
  if (it == list.end()) throw std::out_of_range("no criterion " + std::to_string(id));

  CriterionResult result;
  result.id = id;
  result.name = it->info.name;
  result.group = it->info.group;
  result.time_limit = it->time_limit;
  Cases cases(options.tol_scale);
  const auto start = std::chrono::steady_clock::now();
  try {
    it->run(cases, options);
  } catch (const std::exception& ex) {
    result.detail = ex.what();
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.cases = cases.take();

  double worst_ratio = -1.0;
  bool ok = result.detail.empty() && !result.cases.empty();
  for (const auto& c : result.cases) {
    ok = ok && c.ok();
    double ratio = c.error == 0.0 ? 0.0 : c.error / c.tolerance;
    if (std::isnan(ratio)) ratio = std::numeric_limits<double>::infinity();
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      result.worst = c;
    }
  }
  if (result.time_limit > 0 && result.seconds > result.time_limit) {
    ok = false;
    result.detail = fmt("exceeded %g s", result.time_limit);
  }
  result.passed = ok;
  return result;
}

std::vector<CriterionResult> run_verification(const VerifyOptions& options) {
  std::vector<CriterionResult> out;
  for (const auto& info : criteria()) {
    if (criterion_selected(info, options.filter)) out.push_back(run_criterion(info.id, options));
  }
  return out;
}

void print_results(std::ostream& out, const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    char line[512];
    std::snprintf(line, sizeof line,
                  "%s %2d %-22s expected=%.9g computed=%.9g error=%.3g tol=%.3g "
                  "(%.2fs) [%s]",
                  r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.worst.expected,
                  r.worst.computed, r.worst.error, r.worst.tolerance, r.seconds,
                  r.worst.label.c_str());
    out << line;
    if (!r.detail.empty()) out << " " << r.detail;
    out << '\n';
    if (!r.passed) {
      for (const auto& c : r.cases) {
        if (c.ok()) continue;
        std::snprintf(line, sizeof line,
                      "       %s: expected=%.9g computed=%.9g error=%.3g tol=%.3g",
                      c.label.c_str(), c.expected, c.computed, c.error, c.tolerance);
        out << line << '\n';
      }
    }
  }
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.passed; });
}

}  // namespace landscape
