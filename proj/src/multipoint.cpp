#include "landscape/multipoint.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "landscape/parallel.hpp"

namespace landscape {

double one_point_rate(double alpha, const TemporalPair& u) {
  const double excess = std::max(0.0, alpha - dirichlet_distance(u));
  return 4.0 / 3.0 * std::pow(excess, 1.5) / std::sqrt(u.duration());
}

TwoPointResult two_point_rate(double alpha) {
  TwoPointResult r;
  if (alpha < -1.0) {
    r.topology = "empty";
    return r;
  }
  if (alpha <= 0.0) {
    r.topology = "V";
    r.rate = 8.0 / 3.0 * std::pow(1.0 + alpha, 1.5);
    return r;
  }
  r.topology = "Y";
  r.rate = 4.0 / 3.0 + 2.0 * alpha + 4.0 / 3.0 * std::pow(1.0 + alpha, 1.5);
  const double root = std::sqrt(1.0 + 1.0 / alpha) - std::sqrt(1.0 / alpha);
  r.t_star = root * root;
  return r;
}

PlantedMeasure MultipointSolution::measure() const {
  SegmentNetwork net;
  for (const auto& e : topology.edges) {
    if (e.rho <= 0.0) continue;
    net.push_back(constant_segment(topology.nodes[e.from].point,
                                   topology.nodes[e.to].point, e.rho));
  }
  return PlantedMeasure(std::move(net));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A route is a node sequence; fixed nodes first, then junctions.
struct Layout {
  std::size_t fixed = 0;
  std::size_t junctions = 0;
  std::vector<std::vector<std::size_t>> routes;  // node sequences per active constraint
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::vector<std::size_t>> route_edges;
};

struct InnerResult {
  double rate = kInf;
  std::vector<double> rho;
};

// min 4/3 sum rho_e^{3/2} T_e  s.t.  sum_{e in R_i} rho_e T_e >= b_i, by exact
// coordinate ascent on the multipliers (rho_e = Lambda_e^2 / 4).
InnerResult solve_inner(const std::vector<double>& dur,
                        const std::vector<std::vector<std::size_t>>& routes,
                        const std::vector<double>& rhs) {
  const std::size_t m = dur.size();
  std::vector<double> lambda(routes.size(), 0.0);
  std::vector<double> field(m, 0.0);
  double scale = 1e-300;
  for (double b : rhs) scale = std::max(scale, std::abs(b));
  for (int sweep = 0; sweep < 20000; ++sweep) {
    double moved = 0.0;
    for (std::size_t i = 0; i < routes.size(); ++i) {
      double mass = 0.0, half_b = 0.0, quarter_w = 0.0;
      for (std::size_t e : routes[i]) {
        mass += dur[e] * field[e] * field[e] / 4.0;
        half_b += dur[e] * field[e] / 2.0;
        quarter_w += dur[e] / 4.0;
      }
      if (lambda[i] == 0.0 && mass >= rhs[i]) continue;
      const double disc = half_b * half_b - 4.0 * quarter_w * (mass - rhs[i]);
      double delta;
      if (disc < 0.0) {
        delta = -lambda[i];
      } else {
        const double root = std::sqrt(disc);
        delta = half_b + root > 0.0 ? 2.0 * (rhs[i] - mass) / (half_b + root)
                                    : std::sqrt(std::max(0.0, rhs[i]) / quarter_w);
        delta = std::max(delta, -lambda[i]);
      }
      lambda[i] += delta;
      for (std::size_t e : routes[i]) field[e] += delta;
      moved = std::max(moved, std::abs(delta));
    }
    if (moved <= 1e-15 * (1.0 + std::sqrt(scale))) break;
  }
  InnerResult r;
  r.rho.resize(m);
  for (std::size_t e = 0; e < m; ++e) r.rho[e] = field[e] * field[e] / 4.0;
  double factor = 1.0;
  for (std::size_t i = 0; i < routes.size(); ++i) {
    double mass = 0.0;
    for (std::size_t e : routes[i]) mass += r.rho[e] * dur[e];
    if (mass < rhs[i]) factor = std::max(factor, mass > 0.0 ? rhs[i] / mass : kInf);
  }
  if (!std::isfinite(factor)) return {};
  r.rate = 0.0;
  for (std::size_t e = 0; e < m; ++e) {
    r.rho[e] *= factor;
    r.rate += 4.0 / 3.0 * std::pow(r.rho[e], 1.5) * dur[e];
  }
  return r;
}

struct Problem {
  std::vector<SpaceTimePoint> fixed;
  std::vector<std::size_t> src, dst;  // fixed node of each active constraint
  std::vector<double> alpha;
  double x_lo = 0.0, x_hi = 0.0;
};

struct Evaluated {
  InnerResult inner;
  std::vector<SpaceTimePoint> nodes;
};

std::optional<Evaluated> evaluate_layout(const Problem& pb, const Layout& lay,
                                         const std::vector<SpaceTimePoint>& junctions) {
  Evaluated ev;
  ev.nodes = pb.fixed;
  ev.nodes.insert(ev.nodes.end(), junctions.begin(), junctions.end());
  std::vector<double> dur(lay.edges.size()), dist(lay.edges.size());
  for (std::size_t e = 0; e < lay.edges.size(); ++e) {
    const auto& a = ev.nodes[lay.edges[e].first];
    const auto& b = ev.nodes[lay.edges[e].second];
    if (!(b.t - a.t > 1e-12)) return std::nullopt;
    dur[e] = b.t - a.t;
    dist[e] = dirichlet_distance(a, b);
  }
  std::vector<double> rhs(lay.route_edges.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    double d = 0.0;
    for (std::size_t e : lay.route_edges[i]) d += dist[e];
    rhs[i] = pb.alpha[i] - d;
  }
  ev.inner = solve_inner(dur, lay.route_edges, rhs);
  if (!std::isfinite(ev.inner.rate)) return std::nullopt;
  // Uncharged edges are flights and may cross anything; charged ones must
  // form an internally disjoint network.
  SegmentNetwork net;
  for (std::size_t e = 0; e < lay.edges.size(); ++e) {
    if (ev.inner.rho[e] <= 0.0) continue;
    net.push_back(constant_segment(ev.nodes[lay.edges[e].first],
                                   ev.nodes[lay.edges[e].second], 0.0));
  }
  if (!validate_network(net).ok) return std::nullopt;
  return ev;
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

struct LayoutResult {
  double rate = kInf;
  std::vector<SpaceTimePoint> junctions;
  Evaluated best;
  bool boundary = false;
};

// Time window of each junction given the other node positions.
std::pair<double, double> junction_window(const Layout& lay, const std::vector<SpaceTimePoint>& nodes,
                                          std::size_t node) {
  double lo = -kInf, hi = kInf;
  for (const auto& r : lay.routes) {
    for (std::size_t p = 0; p < r.size(); ++p) {
      if (r[p] != node) continue;
      lo = std::max(lo, nodes[r[p - 1]].t);
      hi = std::min(hi, nodes[r[p + 1]].t);
    }
  }
  return {lo, hi};
}

LayoutResult optimize_layout(const Problem& pb, const Layout& lay,
                             const MultipointOptions& opt) {
  LayoutResult result;
  if (lay.junctions == 0) {
    if (auto ev = evaluate_layout(pb, lay, {})) {
      result.rate = ev->inner.rate;
      result.best = std::move(*ev);
    }
    return result;
  }
  const double span = std::max(1.0, pb.x_hi - pb.x_lo);
  const double x_lo = pb.x_lo - span;
  const double x_hi = pb.x_hi + span;
  const std::vector<double> fractions{0.05, 0.2, 0.4, 0.6, 0.8};

  for (double frac : fractions) {
    // Initial placement: junctions in order along their routes.
    std::vector<SpaceTimePoint> nodes = pb.fixed;
    nodes.resize(pb.fixed.size() + lay.junctions);
    bool placed = true;
    for (std::size_t jn = 0; jn < lay.junctions; ++jn) {
      const std::size_t node = pb.fixed.size() + jn;
      double lo = -kInf, hi = kInf, xs = 0.0;
      std::size_t uses = 0;
      for (std::size_t i = 0; i < lay.routes.size(); ++i) {
        const auto& r = lay.routes[i];
        if (std::find(r.begin(), r.end(), node) == r.end()) continue;
        const auto& a = pb.fixed[pb.src[i]];
        const auto& b = pb.fixed[pb.dst[i]];
        lo = std::max(lo, a.t);
        hi = std::min(hi, b.t);
        ++uses;
      }
      if (!(lo < hi)) {
        placed = false;
        break;
      }
      // Later junctions in a chain sit later in time.
      const double f = std::min(0.95, frac + 0.3 * static_cast<double>(jn));
      const double t = lo + f * (hi - lo);
      for (std::size_t i = 0; i < lay.routes.size(); ++i) {
        const auto& r = lay.routes[i];
        if (std::find(r.begin(), r.end(), node) == r.end()) continue;
        const auto& a = pb.fixed[pb.src[i]];
        const auto& b = pb.fixed[pb.dst[i]];
        xs += a.x + (b.x - a.x) * (t - a.t) / (b.t - a.t);
      }
      nodes[node] = {xs / static_cast<double>(uses), t};
    }
    if (!placed) continue;

    auto junction_points = [&] {
      return std::vector<SpaceTimePoint>(nodes.begin() + static_cast<std::ptrdiff_t>(pb.fixed.size()),
                                         nodes.end());
    };
    auto objective = [&] {
      auto ev = evaluate_layout(pb, lay, junction_points());
      return ev ? ev->inner.rate : kInf;
    };
    double current = objective();
    for (std::size_t round = 0; round < opt.max_rounds; ++round) {
      double moved = 0.0;
      for (std::size_t jn = 0; jn < lay.junctions; ++jn) {
        const std::size_t node = pb.fixed.size() + jn;
        for (int coord = 0; coord < 2; ++coord) {
          double lo, hi;
          if (coord == 0) {
            lo = x_lo;
            hi = x_hi;
          } else {
            std::tie(lo, hi) = junction_window(lay, nodes, node);
            lo += opt.eps_t;
            hi -= opt.eps_t;
            if (!(lo < hi)) continue;
          }
          double& slot = coord == 0 ? nodes[node].x : nodes[node].t;
          const double old = slot;
          auto along = [&](double v) {
            slot = v;
            return objective();
          };
          // Coarse scan to locate the basin, then golden section inside it.
          const int samples = 24;
          double best_v = old, best_f = current;
          for (int s = 0; s <= samples; ++s) {
            const double v = lo + (hi - lo) * s / samples;
            const double fv = along(v);
            if (fv < best_f) {
              best_f = fv;
              best_v = v;
            }
          }
          const double step = (hi - lo) / samples;
          const double a = std::max(lo, best_v - step);
          const double b = std::min(hi, best_v + step);
          const double refined = golden_min(along, a, b, opt.move_tol * 0.1);
          const double fr = along(refined);
          if (fr < best_f) {
            best_f = fr;
            best_v = refined;
          }
          if (best_f < current) {
            moved = std::max(moved, std::abs(best_v - old));
            slot = best_v;
            current = best_f;
          } else {
            slot = old;
          }
        }
      }
      if (moved < opt.move_tol) break;
    }
    if (current < result.rate) {
      result.rate = current;
      result.junctions = junction_points();
      result.best = *evaluate_layout(pb, lay, result.junctions);
    }
  }
  if (std::isfinite(result.rate)) {
    for (std::size_t jn = 0; jn < lay.junctions; ++jn) {
      const std::size_t node = pb.fixed.size() + jn;
      const auto [lo, hi] = junction_window(lay, result.best.nodes, node);
      const double t = result.best.nodes[node].t;
      if (t - lo < 1e-4 || hi - t < 1e-4) result.boundary = true;
    }
  }
  return result;
}

// Routes are node sequences from src to dst through junctions or fixed nodes.
std::vector<std::vector<std::vector<std::size_t>>> route_options(const Problem& pb,
                                                                 std::size_t junctions) {
  const std::size_t f = pb.fixed.size();
  std::vector<std::vector<std::vector<std::size_t>>> out(pb.src.size());
  for (std::size_t i = 0; i < pb.src.size(); ++i) {
    const std::size_t s = pb.src[i], d = pb.dst[i];
    auto& opts = out[i];
    opts.push_back({s, d});
    for (std::size_t a = 0; a < junctions; ++a) {
      opts.push_back({s, f + a, d});
      for (std::size_t b = 0; b < junctions; ++b) {
        if (b != a) opts.push_back({s, f + a, f + b, d});
      }
    }
    for (std::size_t v = 0; v < f; ++v) {
      if (pb.fixed[v].t > pb.fixed[s].t + kTolerance && pb.fixed[v].t < pb.fixed[d].t - kTolerance) {
        opts.push_back({s, v, d});
      }
    }
  }
  return out;
}

std::optional<Layout> make_layout(const Problem& pb,
                                  const std::vector<std::vector<std::size_t>>& routes,
                                  std::size_t max_junctions) {
  Layout lay;
  lay.fixed = pb.fixed.size();
  lay.routes = routes;
  // Junctions must be used in index order (no relabelled duplicates) and each
  // used one must serve at least two constraints.
  std::vector<std::size_t> uses(max_junctions, 0);
  std::size_t next = 0;
  for (const auto& r : routes) {
    for (std::size_t node : r) {
      if (node < lay.fixed) continue;
      const std::size_t jn = node - lay.fixed;
      if (jn > next) return std::nullopt;
      if (jn == next) ++next;
      ++uses[jn];
    }
  }
  lay.junctions = next;
  for (std::size_t jn = 0; jn < next; ++jn) {
    if (uses[jn] < 2) return std::nullopt;
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (const auto& r : routes) {
    std::vector<std::size_t> ids;
    for (std::size_t p = 0; p + 1 < r.size(); ++p) {
      const auto key = std::make_pair(r[p], r[p + 1]);
      if (index.count({r[p + 1], r[p]})) return std::nullopt;
      auto [it, fresh] = index.emplace(key, lay.edges.size());
      if (fresh) lay.edges.push_back(key);
      ids.push_back(it->second);
    }
    lay.route_edges.push_back(std::move(ids));
  }
  return lay;
}

std::string classify(const CandidateTopology& topo) {
  std::size_t used_routes = 0;
  for (const auto& r : topo.routes) used_routes += r.empty() ? 0 : 1;
  bool positive = false;
  for (const auto& e : topo.edges) positive |= e.rho > 0.0;
  if (!positive) return "empty";
  for (const auto& n : topo.nodes) {
    if (n.junction) return "Y";
  }
  if (topo.edges.size() == 1) return "single";
  std::vector<std::size_t> degree(topo.nodes.size(), 0);
  for (const auto& e : topo.edges) {
    ++degree[e.from];
    ++degree[e.to];
  }
  if (topo.edges.size() == 2 && used_routes == 2 &&
      std::any_of(degree.begin(), degree.end(), [](std::size_t d) { return d >= 2; })) {
    return "V";
  }
  return "tree";
}

}  // namespace

MultipointSolution solve_multipoint(const std::vector<PointConstraint>& constraints,
                                    const MultipointOptions& options) {
  if (constraints.empty()) throw std::invalid_argument("solve_multipoint: no constraints");
  MultipointSolution sol;
  sol.max_junctions = options.max_junctions;
  for (const auto& c : constraints) sol.alpha.push_back(c.alpha);

  // Duplicate pairs keep the largest alpha; constraints implied by e >= d drop.
  Problem pb;
  std::vector<std::optional<std::size_t>> active_of(constraints.size());
  auto node_of = [&](SpaceTimePoint p) {
    for (std::size_t v = 0; v < pb.fixed.size(); ++v) {
      if (same_point(pb.fixed[v], p)) return v;
    }
    pb.fixed.push_back(p);
    return pb.fixed.size() - 1;
  };
  for (std::size_t c = 0; c < constraints.size(); ++c) {
    const auto& u = constraints[c].u;
    if (constraints[c].alpha <= dirichlet_distance(u) + 1e-12) continue;
    const std::size_t s = node_of(u.start());
    const std::size_t d = node_of(u.end());
    bool merged = false;
    for (std::size_t a = 0; a < pb.src.size(); ++a) {
      if (pb.src[a] == s && pb.dst[a] == d) {
        pb.alpha[a] = std::max(pb.alpha[a], constraints[c].alpha);
        active_of[c] = a;
        merged = true;
      }
    }
    if (!merged) {
      active_of[c] = pb.src.size();
      pb.src.push_back(s);
      pb.dst.push_back(d);
      pb.alpha.push_back(constraints[c].alpha);
    }
  }

  std::vector<std::size_t> active_route;  // best layout's edges per active constraint
  if (!pb.src.empty()) {
    pb.x_lo = pb.x_hi = pb.fixed.front().x;
    for (const auto& p : pb.fixed) {
      pb.x_lo = std::min(pb.x_lo, p.x);
      pb.x_hi = std::max(pb.x_hi, p.x);
    }
    const auto options_per = route_options(pb, options.max_junctions);
    std::vector<Layout> layouts;
    std::vector<std::size_t> pick(pb.src.size(), 0);
    for (;;) {
      std::vector<std::vector<std::size_t>> routes;
      for (std::size_t i = 0; i < pick.size(); ++i) routes.push_back(options_per[i][pick[i]]);
      if (auto lay = make_layout(pb, routes, options.max_junctions)) layouts.push_back(*lay);
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == options_per[i].size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
    sol.topologies_tried = layouts.size();

    std::vector<LayoutResult> results(layouts.size());
    parallel_for(layouts.size(), [&](std::size_t a) {
      results[a] = optimize_layout(pb, layouts[a], options);
    });
    // Fewer junctions win unless more junctions pay off by junction_gain.
    std::vector<std::optional<std::size_t>> best_by_count(options.max_junctions + 1);
    for (std::size_t a = 0; a < layouts.size(); ++a) {
      if (!std::isfinite(results[a].rate)) continue;
      auto& slot = best_by_count[layouts[a].junctions];
      if (!slot || results[a].rate < results[*slot].rate) slot = a;
    }
    std::optional<std::size_t> chosen;
    for (const auto& cand : best_by_count) {
      if (!cand) continue;
      if (!chosen || results[*cand].rate < results[*chosen].rate * (1.0 - options.junction_gain)) {
        chosen = cand;
      }
    }
    if (!chosen) throw std::runtime_error("solve_multipoint: no feasible topology");
    const auto& lay = layouts[*chosen];
    const auto& res = results[*chosen];
    sol.rate = res.rate;
    sol.boundary_junction = res.boundary;
    for (std::size_t v = 0; v < res.best.nodes.size(); ++v) {
      sol.topology.nodes.push_back({res.best.nodes[v], v >= lay.fixed});
    }
    for (std::size_t e = 0; e < lay.edges.size(); ++e) {
      sol.topology.edges.push_back({lay.edges[e].first, lay.edges[e].second, res.best.inner.rho[e]});
    }
    sol.topology.routes.resize(constraints.size());
    for (std::size_t c = 0; c < constraints.size(); ++c) {
      if (active_of[c]) sol.topology.routes[c] = lay.route_edges[*active_of[c]];
    }
  } else {
    sol.topology.routes.resize(constraints.size());
  }

  for (std::size_t c = 0; c < constraints.size(); ++c) {
    const auto& route = sol.topology.routes[c];
    if (route.empty()) {
      sol.achieved.push_back(dirichlet_distance(constraints[c].u));
      continue;
    }
    double len = 0.0;
    for (std::size_t e : route) {
      const auto& edge = sol.topology.edges[e];
      const auto& a = sol.topology.nodes[edge.from].point;
      const auto& b = sol.topology.nodes[edge.to].point;
      len += edge.rho * (b.t - a.t) + dirichlet_distance(a, b);
    }
    sol.achieved.push_back(len);
  }
  sol.label = classify(sol.topology);
  return sol;
}

StructureReport verify_optimizer_structure(const MultipointSolution& sol, double tol) {
  StructureReport rep;
  auto fail = [&](const std::string& what) {
    rep.ok = false;
    rep.problems.push_back(what);
  };
  const auto& topo = sol.topology;
  for (std::size_t e = 0; e < topo.edges.size(); ++e) {
    const auto& edge = topo.edges[e];
    if (!(topo.nodes[edge.to].point.t > topo.nodes[edge.from].point.t)) {
      fail("edge " + std::to_string(e) + " is not time-increasing");
    }
    if (edge.rho < 0.0 || !std::isfinite(edge.rho)) {
      fail("edge " + std::to_string(e) + " has an invalid density");
    }
  }
  std::vector<std::size_t> degree(topo.nodes.size(), 0);
  std::vector<const NetworkEdge*> in(topo.nodes.size()), out(topo.nodes.size());
  for (const auto& e : topo.edges) {
    if (e.rho <= 0.0) continue;
    ++degree[e.from];
    ++degree[e.to];
    out[e.from] = &e;
    in[e.to] = &e;
  }
  // A point inside one straight segment of constant density, where a slack
  // route leaves by a flight, is not a junction of the measure.
  auto pass_through = [&](std::size_t v) {
    if (degree[v] != 2 || !in[v] || !out[v]) return false;
    const auto& a = topo.nodes[in[v]->from].point;
    const auto& j = topo.nodes[v].point;
    const auto& b = topo.nodes[out[v]->to].point;
    const double s1 = (j.x - a.x) / (j.t - a.t);
    const double s2 = (b.x - j.x) / (b.t - j.t);
    const double r1 = in[v]->rho, r2 = out[v]->rho;
    return std::abs(s1 - s2) <= 1e-5 * std::max(1.0, std::abs(s1)) &&
           std::abs(r1 - r2) <= 1e-6 * std::max(1.0, r1);
  };
  for (std::size_t v = 0; v < topo.nodes.size(); ++v) {
    if (topo.nodes[v].junction && degree[v] > 0 && degree[v] < 3 && !pass_through(v)) {
      std::ostringstream os;
      os << "junction " << v << " has degree " << degree[v];
      fail(os.str());
    }
  }
  for (std::size_t c = 0; c < sol.achieved.size(); ++c) {
    if (sol.achieved[c] < sol.alpha[c] - tol) {
      fail("constraint " + std::to_string(c) + " is not satisfied");
    }
  }
  // Every charged edge must serve at least one saturated constraint.
  for (std::size_t e = 0; e < topo.edges.size(); ++e) {
    if (topo.edges[e].rho <= tol) continue;
    bool serves_active = false;
    for (std::size_t c = 0; c < topo.routes.size(); ++c) {
      const auto& r = topo.routes[c];
      if (std::find(r.begin(), r.end(), e) != r.end() &&
          std::abs(sol.achieved[c] - sol.alpha[c]) <= tol * std::max(1.0, std::abs(sol.alpha[c]))) {
        serves_active = true;
      }
    }
    if (!serves_active) fail("edge " + std::to_string(e) + " carries density for slack constraints only");
  }
  return rep;
}

}  // namespace landscape
