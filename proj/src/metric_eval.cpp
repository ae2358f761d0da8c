#include "landscape/metric_eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "landscape/parallel.hpp"

namespace landscape {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double flight(double x0, double t0, double x1, double t1) {
  const double dx = x1 - x0;
  return -dx * dx / (t1 - t0);
}

struct State {
  std::size_t layer = 0;
  double x = 0.0;
  std::ptrdiff_t prev = -1;  // same segment, previous layer
  double ride = 0.0;         // gain of the ride from prev
};

// Flattened states of one measure over a fixed list of layer times.
struct StateGraph {
  std::vector<double> layers;
  std::vector<State> states;
  std::vector<std::size_t> begin;  // states of layer j: [begin[j], begin[j+1])
  std::vector<std::vector<std::size_t>> groups;  // coincident states (size >= 2)
  std::vector<std::size_t> group_begin;

  std::size_t layer_of(double t) const {
    auto it = std::lower_bound(layers.begin(), layers.end(), t - kTolerance);
    if (it == layers.end() || std::abs(*it - t) > kTolerance) {
      throw std::logic_error("StateGraph: time is not a layer");
    }
    return static_cast<std::size_t>(it - layers.begin());
  }
};

// Sorted layer times: the given base times plus every event time of mu in
// [lo, hi]. Event times within tolerance of a base time snap to it.
std::vector<double> layer_times(const PlantedMeasure& mu, std::vector<double> base,
                                double lo, double hi) {
  std::vector<double> events;
  for (const auto& seg : mu.segments()) {
    for (const auto& p : seg.path().breakpoints()) events.push_back(p.t);
    for (const auto& piece : seg.density().pieces()) {
      events.push_back(piece.t0);
      events.push_back(piece.t1);
    }
  }
  std::sort(base.begin(), base.end());
  for (double t : events) {
    if (t < lo - kTolerance || t > hi + kTolerance) continue;
    auto it = std::lower_bound(base.begin(), base.end(), t - kTolerance);
    if (it != base.end() && std::abs(*it - t) <= kTolerance) continue;
    base.insert(it, t);
  }
  return base;
}

StateGraph build_graph(const PlantedMeasure& mu, std::vector<double> layers) {
  StateGraph g;
  g.layers = std::move(layers);
  const auto& segs = mu.segments();
  std::vector<std::ptrdiff_t> last(segs.size(), -1);
  g.begin.push_back(0);
  g.group_begin.push_back(0);
  for (std::size_t j = 0; j < g.layers.size(); ++j) {
    const double t = g.layers[j];
    const std::size_t first = g.states.size();
    for (std::size_t k = 0; k < segs.size(); ++k) {
      const auto& path = segs[k].path();
      if (!path.covers(t)) continue;
      State s;
      s.layer = j;
      s.x = path.value_at(std::clamp(t, path.start_time(), path.end_time()));
      if (last[k] >= 0 && g.states[last[k]].layer + 1 == j) {
        const auto& p = g.states[last[k]];
        const double t0 = g.layers[j - 1];
        s.prev = last[k];
        s.ride = segs[k].density().integral(t0, t) + flight(p.x, t0, s.x, t);
      }
      last[k] = static_cast<std::ptrdiff_t>(g.states.size());
      g.states.push_back(s);
    }
    std::vector<std::size_t> order(g.states.size() - first);
    for (std::size_t a = 0; a < order.size(); ++a) order[a] = first + a;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return g.states[a].x < g.states[b].x;
    });
    for (std::size_t a = 0; a < order.size();) {
      std::size_t b = a + 1;
      while (b < order.size() &&
             std::abs(g.states[order[b]].x - g.states[order[a]].x) <= kTolerance) {
        ++b;
      }
      if (b - a >= 2) g.groups.emplace_back(order.begin() + a, order.begin() + b);
      a = b;
    }
    g.begin.push_back(g.states.size());
    g.group_begin.push_back(g.groups.size());
  }
  return g;
}

// Best values from source p (at layer js) to every state.
std::vector<double> solve_from(const StateGraph& g, SpaceTimePoint p, std::size_t js) {
  std::vector<double> v(g.states.size(), kNegInf);
  for (std::size_t s = g.begin[js]; s < g.begin[js + 1]; ++s) {
    if (std::abs(g.states[s].x - p.x) <= kTolerance) v[s] = 0.0;
  }
  const std::size_t from = g.begin[js];
  for (std::size_t j = js + 1; j < g.layers.size(); ++j) {
    const double t = g.layers[j];
    for (std::size_t s = g.begin[j]; s < g.begin[j + 1]; ++s) {
      const State& st = g.states[s];
      double best = flight(p.x, p.t, st.x, t);
      for (std::size_t o = from; o < g.begin[j]; ++o) {
        if (v[o] == kNegInf) continue;
        const double cand = v[o] + flight(g.states[o].x, g.layers[g.states[o].layer], st.x, t);
        if (cand > best) best = cand;
      }
      if (st.prev >= 0 && v[st.prev] != kNegInf) {
        best = std::max(best, v[st.prev] + st.ride);
      }
      v[s] = best;
    }
    for (std::size_t gi = g.group_begin[j]; gi < g.group_begin[j + 1]; ++gi) {
      double m = kNegInf;
      for (std::size_t s : g.groups[gi]) m = std::max(m, v[s]);
      for (std::size_t s : g.groups[gi]) v[s] = m;
    }
  }
  return v;
}

double value_at_target(const StateGraph& g, const std::vector<double>& v,
                       SpaceTimePoint p, std::size_t js, SpaceTimePoint q,
                       std::size_t jq) {
  double best = flight(p.x, p.t, q.x, q.t);
  for (std::size_t o = g.begin[js]; o < g.begin[jq]; ++o) {
    if (v[o] == kNegInf) continue;
    best = std::max(best, v[o] + flight(g.states[o].x, g.layers[g.states[o].layer], q.x, q.t));
  }
  for (std::size_t s = g.begin[jq]; s < g.begin[jq + 1]; ++s) {
    if (std::abs(g.states[s].x - q.x) <= kTolerance) best = std::max(best, v[s]);
  }
  return best;
}

std::string describe(SpaceTimePoint p) {
  std::ostringstream os;
  os << "(" << p.x << ", " << p.t << ")";
  return os.str();
}

}  // namespace

void GridSpec::validate() const {
  if (!(x_min < x_max) || !(t_min < t_max)) {
    throw std::invalid_argument("GridSpec: empty space or time range");
  }
  if (nx < 2 || nt < 2) {
    throw std::invalid_argument("GridSpec: need at least 2 cells in each direction");
  }
}

double GridSpec::x(std::size_t i) const {
  if (i == nx) return x_max;
  return x_min + hx() * static_cast<double>(i);
}

double GridSpec::t(std::size_t j) const {
  if (j == nt) return t_max;
  return t_min + ht() * static_cast<double>(j);
}

std::optional<std::size_t> GridSpec::x_index(double v) const {
  const double f = (v - x_min) / hx();
  const double r = std::round(f);
  if (r < 0.0 || r > static_cast<double>(nx)) return std::nullopt;
  const auto i = static_cast<std::size_t>(r);
  if (std::abs(x(i) - v) > kTolerance * std::max(1.0, std::abs(v))) return std::nullopt;
  return i;
}

std::optional<std::size_t> GridSpec::t_index(double v) const {
  const double f = (v - t_min) / ht();
  const double r = std::round(f);
  if (r < 0.0 || r > static_cast<double>(nt)) return std::nullopt;
  const auto j = static_cast<std::size_t>(r);
  if (std::abs(t(j) - v) > kTolerance * std::max(1.0, std::abs(v))) return std::nullopt;
  return j;
}

double tau_comp(const GridSpec& spec) {
  const double hx = spec.hx();
  return 2.0 * hx * hx / spec.ht() + 1e-9;
}

GridMetric::GridMetric(GridSpec spec, MetricProvenance provenance)
    : spec_(spec), provenance_(provenance) {
  spec_.validate();
  nodes_ = spec_.node_count();
  layers_ = spec_.layer_count();
  const double pairs = static_cast<double>(layers_) * static_cast<double>(layers_ - 1) / 2.0;
  const double count = pairs * static_cast<double>(nodes_) * static_cast<double>(nodes_);
  if (count > static_cast<double>(kGridMetricCapacity)) {
    throw std::length_error("GridMetric: grid too large for all-pairs storage");
  }
  values_.assign(static_cast<std::size_t>(count), 0.0);
}

std::size_t GridMetric::index(std::size_t i, std::size_t j, std::size_t k,
                              std::size_t l) const {
  const std::size_t pair = j * (2 * layers_ - j - 1) / 2 + (l - j - 1);
  return (pair * nodes_ + i) * nodes_ + k;
}

GridMetric GridMetric::from_function(
    const GridSpec& spec,
    const std::function<double(SpaceTimePoint, SpaceTimePoint)>& value,
    MetricProvenance provenance) {
  GridMetric e(spec, provenance);
  const std::size_t n = spec.node_count();
  const std::size_t L = spec.layer_count();
  for (std::size_t j = 0; j < L; ++j) {
    for (std::size_t l = j + 1; l < L; ++l) {
      for (std::size_t i = 0; i < n; ++i) {
        double* row = e.row(i, j, l);
        for (std::size_t k = 0; k < n; ++k) {
          row[k] = value({spec.x(i), spec.t(j)}, {spec.x(k), spec.t(l)});
        }
      }
    }
  }
  return e;
}

double GridMetric::value(const TemporalPair& u) const {
  const auto i = spec_.x_index(u.start().x);
  const auto j = spec_.t_index(u.start().t);
  const auto k = spec_.x_index(u.end().x);
  const auto l = spec_.t_index(u.end().t);
  if (!i || !j || !k || !l) {
    throw std::out_of_range("GridMetric: pair " + describe(u.start()) + " -> " +
                            describe(u.end()) + " is off the grid");
  }
  return at(*i, *j, *k, *l);
}

double evaluate_emu(const PlantedMeasure& mu, const TemporalPair& u,
                    const GridSpec& spec) {
  spec.validate();
  const auto p = u.start();
  const auto q = u.end();
  const auto js = spec.t_index(p.t);
  const auto jq = spec.t_index(q.t);
  if (!spec.x_index(p.x) || !spec.x_index(q.x) || !js || !jq) {
    throw std::out_of_range("evaluate_emu: pair " + describe(p) + " -> " +
                            describe(q) + " is off the grid");
  }
  std::vector<double> base;
  for (std::size_t j = *js; j <= *jq; ++j) base.push_back(spec.t(j));
  const auto g = build_graph(mu, layer_times(mu, std::move(base), p.t, q.t));
  const std::size_t a = g.layer_of(p.t);
  const std::size_t b = g.layer_of(q.t);
  const auto v = solve_from(g, p, a);
  return value_at_target(g, v, p, a, q, b);
}

double evaluate_emu_between(const PlantedMeasure& mu, SpaceTimePoint p,
                            SpaceTimePoint q, std::size_t cells) {
  const TemporalPair u(p, q);
  const auto part = Partition::uniform(p.t, q.t, std::max<std::size_t>(cells, 1));
  std::vector<double> base(part.times().begin(), part.times().end());
  const auto g = build_graph(mu, layer_times(mu, std::move(base), p.t, q.t));
  const std::size_t a = g.layer_of(p.t);
  const std::size_t b = g.layer_of(q.t);
  const auto v = solve_from(g, p, a);
  return value_at_target(g, v, p, a, q, b);
}

GridMetric evaluate_emu_grid(const PlantedMeasure& mu, const GridSpec& spec) {
  GridMetric e(spec, MetricProvenance::DpFromMeasure);
  const std::size_t n = spec.node_count();
  const std::size_t L = spec.layer_count();
  std::vector<double> base(L);
  for (std::size_t j = 0; j < L; ++j) base[j] = spec.t(j);
  const auto g = build_graph(mu, layer_times(mu, base, spec.t_min, spec.t_max));
  std::vector<std::size_t> graph_layer(L);
  for (std::size_t j = 0; j < L; ++j) graph_layer[j] = g.layer_of(spec.t(j));

  parallel_for(n * (L - 1), [&](std::size_t task) {
    const std::size_t i = task % n;
    const std::size_t j = task / n;
    const SpaceTimePoint p{spec.x(i), spec.t(j)};
    const std::size_t js = graph_layer[j];
    const auto v = solve_from(g, p, js);
    for (std::size_t l = j + 1; l < L; ++l) {
      const double tq = spec.t(l);
      const std::size_t jq = graph_layer[l];
      double* row = e.row(i, j, l);
      for (std::size_t k = 0; k < n; ++k) row[k] = flight(p.x, p.t, spec.x(k), tq);
      for (std::size_t o = g.begin[js]; o < g.begin[jq]; ++o) {
        if (v[o] == -std::numeric_limits<double>::infinity()) continue;
        const double xo = g.states[o].x;
        const double to = g.layers[g.states[o].layer];
        for (std::size_t k = 0; k < n; ++k) {
          row[k] = std::max(row[k], v[o] + flight(xo, to, spec.x(k), tq));
        }
      }
      for (std::size_t s = g.begin[jq]; s < g.begin[jq + 1]; ++s) {
        if (const auto k = spec.x_index(g.states[s].x)) {
          row[*k] = std::max(row[*k], v[s]);
        }
      }
    }
  });
  return e;
}

double path_length_exact(const PlantedMeasure& mu, const PolylinePath& path) {
  return measure_of_path_graph(mu, path) + dirichlet_energy(path);
}

double path_length_partition(const GridMetric& e, const PolylinePath& path,
                             const Partition& partition) {
  const auto times = partition.times();
  double total = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const SpaceTimePoint a{path.value_at(times[i - 1]), times[i - 1]};
    const SpaceTimePoint b{path.value_at(times[i]), times[i]};
    total += e.value(TemporalPair(a, b));
  }
  return total;
}

bool AxiomReport::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const AxiomCheck& c) { return c.ok(); });
}

const AxiomCheck& AxiomReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("AxiomReport: no check named " + name);
}

namespace {

void note(AxiomCheck& c, double amount, const AxiomWitness& w) {
  ++c.checked;
  c.largest = std::max(c.largest, amount);
  if (amount > c.tolerance) {
    ++c.violations;
    if (amount > c.worst) {
      c.worst = amount;
      c.witness = w;
    }
  }
}

void absorb(AxiomCheck& into, const AxiomCheck& part) {
  into.checked += part.checked;
  into.violations += part.violations;
  into.largest = std::max(into.largest, part.largest);
  if (part.worst > into.worst) {
    into.worst = part.worst;
    into.witness = part.witness;
  }
}

std::vector<std::size_t> sampled(std::size_t count, std::size_t stride) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < count; i += stride) out.push_back(i);
  if (out.back() != count - 1) out.push_back(count - 1);
  return out;
}

}  // namespace

AxiomReport check_metric_axioms(const GridMetric& e, std::size_t stride,
                                double tol_scale) {
  const auto& spec = e.spec();
  stride = std::max<std::size_t>(stride, 1);
  const std::size_t n = spec.node_count();
  const std::size_t L = spec.layer_count();
  const auto xs = sampled(n, stride);
  const auto ts = sampled(L, stride);
  AxiomReport report;
  report.tau_comp = tau_comp(spec);
  const double tau = report.tau_comp * tol_scale;
  const double exact = 1e-9 * tol_scale;

  // One partial report per start layer, merged afterwards.
  std::vector<std::array<AxiomCheck, 4>> parts(ts.size());
  parallel_for(ts.size(), [&](std::size_t a) {
    auto& [dom, tri, comp, quad] = parts[a];
    dom.tolerance = exact;
    tri.tolerance = exact;
    comp.tolerance = tau;
    quad.tolerance = tau;
    const std::size_t j = ts[a];
    std::vector<double> best(n);
    for (std::size_t b = a + 1; b < ts.size(); ++b) {
      const std::size_t l = ts[b];
      for (std::size_t i : xs) {
        const double* direct = e.row(i, j, l);
        for (std::size_t k : xs) {
          const double d = flight(spec.x(i), spec.t(j), spec.x(k), spec.t(l));
          note(dom, (d - direct[k]) / (1.0 + std::abs(d)), {i, j, k, l});
        }
        // Triangle and composition through every intermediate layer.
        for (std::size_t r = j + 1; r < l; ++r) {
          if (stride > 1 && std::find(ts.begin(), ts.end(), r) == ts.end()) continue;
          const double* first = e.row(i, j, r);
          for (std::size_t k : xs) {
            double m = -std::numeric_limits<double>::infinity();
            std::size_t arg = 0;
            for (std::size_t z = 0; z < n; ++z) {
              const double s = first[z] + e.at(z, r, k, l);
              if (s >= m) {
                m = s;
                arg = z;
              }
            }
            const double v = direct[k];
            const AxiomWitness w{i, j, k, l, arg, r};
            note(tri, (m - v) / (1.0 + std::abs(v)), w);
            note(comp, v - m, w);
          }
        }
      }
      // Quadrangle: x < x', y < y' at the same pair of times.
      for (std::size_t ia = 0; ia < xs.size(); ++ia) {
        const double* rp = e.row(xs[ia], j, l);
        for (std::size_t ib = ia + 1; ib < xs.size(); ++ib) {
          const double* rq = e.row(xs[ib], j, l);
          for (std::size_t ka = 0; ka < xs.size(); ++ka) {
            for (std::size_t kb = ka + 1; kb < xs.size(); ++kb) {
              const double lhs = rp[xs[kb]] + rq[xs[ka]];
              const double rhs = rp[xs[ka]] + rq[xs[kb]];
              note(quad, lhs - rhs, {xs[ia], j, xs[ka], l, xs[ib], 0, xs[kb]});
            }
          }
        }
      }
    }
  });
  const char* names[4] = {"dominance", "triangle", "composition", "quadrangle"};
  for (std::size_t c = 0; c < 4; ++c) {
    AxiomCheck total;
    total.name = names[c];
    total.tolerance = c < 2 ? exact : tau;
    for (const auto& p : parts) absorb(total, p[c]);
    report.checks.push_back(total);
  }
  return report;
}

}  // namespace landscape
