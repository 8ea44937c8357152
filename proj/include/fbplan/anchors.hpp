#pragma once

#include <vector>

#include "fbplan/esdf.hpp"
#include "fbplan/guidance.hpp"
#include "fbplan/model.hpp"

namespace fbplan {

struct AnchorParams {
  int n_theta = 60;
  double eps_goal = 0.6;          // m
  double delta_collision = 0.05;  // m
  double delta_tau = 1e-3;        // N m
  int max_iters = 200;        // longest anchor chain
  int max_expansions = 5000;  // candidate sets evaluated, backtracking included
  int max_discrepancy = 0;    // 0: greedy chain, no backtracking

  void validate() const;
};

/// Ordered anchors; the first is the initial state and the last the target.
struct AnchorSequence {
  std::vector<Configuration> states;
};

/// Lattice of successor states. The root steps one link length backwards
/// along the new heading psi - dtheta, so the previous root becomes the origin
/// of link 2; joint angles shift one place with the last one dropped.
std::vector<Configuration> candidate_set(const Configuration& q_init, const RobotModel& model,
                                         const AnchorParams& params);

/// Strict rotor clearance: every rotor centre has distance > R_p + delta_collision.
bool check_collision(const RobotModel& model, const Configuration& q, const DistanceField& field,
                     const AnchorParams& params);

bool check_controllability(const RobotModel& model, const Configuration& q, const AnchorParams& params);

/// Candidates passing both checks. With `from` given, also drops candidates
/// whose torque orientation differs from it: no controllable path joins them.
std::vector<Configuration> feasible_subset(const std::vector<Configuration>& candidates, const RobotModel& model,
                                           const DistanceField& field, const AnchorParams& params,
                                           const Configuration* from = nullptr);

/// Score of a candidate root against the reference: distance to the nearest
/// waypoint plus the fraction of the path remaining after it.
double progress_cost(const Vec2& root, const ReferencePath& path);

/// Lowest progress_cost; ties go to the earlier candidate.
/// Throws EmptyFeasibleSet.
Configuration select_best(const std::vector<Configuration>& feasible, const ReferencePath& path);

/// Anchor chain from q_init until the root is within eps_goal of the target
/// root, with q_target appended. The greedy chain (cheapest feasible candidate
/// at every step) is tried first; on a dead end and max_discrepancy > 0,
/// chains deviating from it in up to that many rank steps are tried. Throws InfeasibleEndpoint (also when
/// the endpoints have opposite torque orientation) or AnchorGenerationFailed
/// (detail = iteration).
AnchorSequence generate_anchor_states(const Configuration& q_init, const Configuration& q_target,
                                      const RobotModel& model, const DistanceField& field,
                                      const ReferencePath& path, const AnchorParams& params);

}  // namespace fbplan
