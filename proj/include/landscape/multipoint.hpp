#pragma once

// inf { I(e) : e(u_i) >= alpha_i } over planted metrics. Optimal measures live
// on finitely many straight segments with constant density, meeting at
// constraint endpoints or at junctions of degree >= 3, so the search runs over
// small tree topologies with movable junctions.

#include <cstddef>
#include <string>
#include <vector>

#include "landscape/geometry.hpp"
#include "landscape/planted_measure.hpp"

namespace landscape {

struct PointConstraint {
  TemporalPair u;
  double alpha = 0.0;
};

/// 4/3 [(alpha - d(u))_+]^{3/2} / (t - s)^{1/2}.
double one_point_rate(double alpha, const TemporalPair& u);

struct TwoPointResult {
  double rate = 0.0;
  double t_star = 0.0;
  std::string topology;  // "V", "Y", or "empty" below alpha = -1
};

/// Closed form for e(0,0;-1,1) >= alpha and e(0,0;1,1) >= alpha.
TwoPointResult two_point_rate(double alpha);

struct NetworkNode {
  SpaceTimePoint point;
  bool junction = false;
};

struct NetworkEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  double rho = 0.0;
};

struct CandidateTopology {
  std::vector<NetworkNode> nodes;
  std::vector<NetworkEdge> edges;
  /// Edge indices of the route serving each input constraint; empty when
  /// the constraint is implied by e >= d.
  std::vector<std::vector<std::size_t>> routes;
};

struct MultipointOptions {
  std::size_t max_junctions = 2;
  double eps_t = 1e-6;
  double move_tol = 1e-8;
  std::size_t max_rounds = 60;
  /// A topology with junctions replaces a junction-free one only when it is
  /// better by more than this relative amount.
  double junction_gain = 1e-7;
};

struct MultipointSolution {
  double rate = 0.0;
  CandidateTopology topology;
  std::vector<double> achieved;  // route length for each constraint
  std::vector<double> alpha;
  std::string label;             // "empty", "single", "V", "Y" or "tree"
  bool boundary_junction = false;
  std::size_t topologies_tried = 0;
  std::size_t max_junctions = 0;
  PlantedMeasure measure() const;
};

MultipointSolution solve_multipoint(const std::vector<PointConstraint>& constraints,
                                    const MultipointOptions& options = {});

struct StructureReport {
  bool ok = true;
  std::vector<std::string> problems;
};

StructureReport verify_optimizer_structure(const MultipointSolution& sol,
                                           double tol = 1e-6);

}  // namespace landscape
