// landscape-rate: command-line front end.
//
//   landscape-rate rate NETWORK.json [--grid NX,NT]
//   landscape-rate emu NETWORK.json --pairs PAIRS.csv [--grid NX,NT] [--out PATH]
//   landscape-rate jrate PROFILE.csv [--cells N] [--tol T] [--seed S] [--out PATH]
//   landscape-rate multipoint CONSTRAINTS.json [--out PATH]
//   landscape-rate verify [--filter NAME] [--tol-scale S] [--seed S]
//
// Exit codes: 0 ok, 1 internal error, 2 parse error, 3 invariant violation,
// 4 verification failure.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "landscape/geodesic_rate.hpp"
#include "landscape/io.hpp"
#include "landscape/metric_eval.hpp"
#include "landscape/multipoint.hpp"
#include "landscape/planted_measure.hpp"
#include "landscape/rate_function.hpp"
#include "landscape/verification.hpp"

namespace {

using nlohmann::json;
using namespace landscape;

enum Exit { kOk = 0, kInternal = 1, kParse = 2, kInvariant = 3, kVerify = 4 };

struct GridCells {
  std::size_t nx = 200;
  std::size_t nt = 200;
};

GridCells parse_grid(const std::string& text) {
  GridCells g;
  char sep = 0;
  std::istringstream in(text);
  if (!(in >> g.nx >> sep >> g.nt) || sep != ',' || !in.eof()) {
    throw ParseError("--grid expects NX,NT, got \"" + text + "\"");
  }
  return g;
}

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ParseError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

json rate_summary(const RateReport& r) {
  return {{"entropy", r.entropy},
          {"rate", r.rate},
          {"theta", r.theta},
          {"per_segment", r.per_segment},
          {"theta_grid",
           {{"x_min", r.theta_grid.x_min},
            {"x_max", r.theta_grid.x_max},
            {"t_min", r.theta_grid.t_min},
            {"t_max", r.theta_grid.t_max},
            {"nx", r.theta_grid.nx},
            {"nt", r.theta_grid.nt}}}};
}

int cmd_rate(const std::string& path, const std::optional<std::string>& grid) {
  const PlantedMeasure mu = parse_network(read_json_file(path));
  std::optional<GridSpec> spec;
  if (grid) {
    const GridCells cells = parse_grid(*grid);
    GridSpec s = default_grid(mu);
    s.nx = cells.nx;
    s.nt = cells.nt;
    spec = s;
  }
  std::cout << rate_summary(network_rate(mu, spec)).dump(2) << '\n';
  return kOk;
}

int cmd_emu(const std::string& network, const std::string& pairs, const std::string& grid,
            const std::string& out_path) {
  const PlantedMeasure mu = parse_network(read_json_file(network));
  const auto rows = read_csv_file(pairs, 4);
  const GridCells cells = parse_grid(grid);
  Output out(out_path);
  auto& os = out.stream();
  os << "x0,t0,x1,t1,e,d,theta\n";
  os.precision(12);
  for (const auto& row : rows) {
    const TemporalPair u(row[0], row[1], row[2], row[3]);
    const double e = evaluate_emu_between(mu, u.start(), u.end(), cells.nt);
    os << row[0] << ',' << row[1] << ',' << row[2] << ',' << row[3] << ',' << e << ','
       << dirichlet_distance(u) << ',' << theta_point(e, u) << '\n';
  }
  return kOk;
}

int cmd_jrate(const std::string& path, std::size_t cells, double tol, std::uint64_t seed,
              const std::string& out_path) {
  const ProfileFunction f = ProfileFunction::from_breakpoints(parse_profile_csv(path), cells);
  JOptions options;
  options.tol = tol;
  options.seed = seed;
  const JSolution s = jrate_solve(f, options);
  const JBounds b = jrate_bounds(f);
  const json summary = {{"objective", s.objective},
                        {"dual_value", s.dual_value},
                        {"lower_bound", b.lower},
                        {"upper_bound", b.upper},
                        {"max_violation", s.max_violation},
                        {"duality_residual", s.duality_residual},
                        {"constraints", s.constraints},
                        {"updates", s.updates},
                        {"cells", f.cell_count()},
                        {"converged", s.converged},
                        {"diagnostic", s.diagnostic}};
  std::cout << summary.dump(2) << '\n';
  if (!out_path.empty()) {
    Output out(out_path);
    auto& os = out.stream();
    os.precision(12);
    os << "t,rho\n";
    for (std::size_t k = 0; k < s.rho.size(); ++k) os << s.times[k] << ',' << s.rho[k] << '\n';
  }
  return kOk;
}

int cmd_multipoint(const std::string& path, const std::string& out_path) {
  const auto constraints = parse_constraints(read_json_file(path));
  const MultipointSolution sol = solve_multipoint(constraints);
  json doc = network_to_json(sol.measure());
  doc["rate"] = sol.rate;
  doc["label"] = sol.label;
  doc["alpha"] = sol.alpha;
  doc["achieved"] = sol.achieved;
  doc["boundary_junction"] = sol.boundary_junction;
  doc["topologies_tried"] = sol.topologies_tried;
  json junctions = json::array();
  for (const auto& node : sol.topology.nodes) {
    if (node.junction) junctions.push_back({node.point.x, node.point.t});
  }
  doc["junctions"] = junctions;
  Output out(out_path);
  out.stream() << doc.dump(2) << '\n';
  return kOk;
}

int cmd_verify(const std::string& filter, double tol_scale, std::uint64_t seed) {
  VerifyOptions options;
  options.filter = filter;
  options.tol_scale = tol_scale;
  options.seed = seed;
  const auto results = run_verification(options);
  if (results.empty()) throw ParseError("no criterion matches \"" + filter + "\"");
  print_results(std::cout, results);
  return all_passed(results) ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate functions of planted network metrics"};
  app.require_subcommand(1);

  std::string input;
  std::string grid = "200,200";
  std::string out;
  std::string pairs;
  std::string filter;
  double tol = 1e-6;
  double tol_scale = 1.0;
  std::uint64_t seed = 0;
  std::size_t cells = 400;

  auto* rate = app.add_subcommand("rate", "rate summary of a network");
  rate->add_option("network", input, "network JSON")->required();
  auto* rate_grid = rate->add_option("--grid", grid, "theta grid cells NX,NT");

  auto* emu = app.add_subcommand("emu", "metric values for point pairs");
  emu->add_option("network", input, "network JSON")->required();
  emu->add_option("--pairs", pairs, "CSV of x0,t0,x1,t1")->required();
  emu->add_option("--grid", grid, "NX,NT; NT time cells per pair")->capture_default_str();
  emu->add_option("--out", out, "output CSV");

  auto* jrate = app.add_subcommand("jrate", "geodesic rate of a profile");
  jrate->add_option("profile", input, "CSV of t,f")->required();
  jrate->add_option("--cells", cells, "largest cell is 1/cells")->capture_default_str();
  jrate->add_option("--tol", tol, "relative duality gap")->capture_default_str();
  jrate->add_option("--seed", seed)->capture_default_str();
  jrate->add_option("--out", out, "density CSV");

  auto* multi = app.add_subcommand("multipoint", "optimal network for point constraints");
  multi->add_option("constraints", input, "constraints JSON")->required();
  multi->add_option("--out", out, "output JSON");

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--filter", filter, "group, name or id");
  verify->add_option("--tol-scale", tol_scale, "multiplies every tolerance")
      ->capture_default_str();
  verify->add_option("--seed", seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*rate) {
      std::optional<std::string> g;
      if (*rate_grid) g = grid;
      return cmd_rate(input, g);
    }
    if (*emu) return cmd_emu(input, pairs, grid, out);
    if (*jrate) return cmd_jrate(input, cells, tol, seed, out);
    if (*multi) return cmd_multipoint(input, out);
    if (*verify) return cmd_verify(filter, tol_scale, seed);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const NetworkError& e) {
    std::cerr << "invalid network: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::length_error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::out_of_range& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
