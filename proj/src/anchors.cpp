#include "fbplan/anchors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "fbplan/torque_polytope.hpp"

namespace fbplan {

void AnchorParams::validate() const {
  if (n_theta < 2) throw Error(ErrorCode::InvalidArgument, "n_theta must be >= 2");
  if (!(eps_goal > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps_goal must be > 0");
  if (max_iters <= 0) throw Error(ErrorCode::InvalidArgument, "max_iters must be > 0");
  if (max_expansions <= 0) throw Error(ErrorCode::InvalidArgument, "max_expansions must be > 0");
  if (max_discrepancy < 0) throw Error(ErrorCode::InvalidArgument, "max_discrepancy must be >= 0");
}

std::vector<Configuration> candidate_set(const Configuration& q_init, const RobotModel& model,
                                         const AnchorParams& params) {
  check_configuration(model, q_init);
  params.validate();
  std::vector<Configuration> out;
  out.reserve(params.n_theta);
  const double step = (model.theta_max - model.theta_min) / (params.n_theta - 1);
  const int nj = model.n_joints;
  for (int k = 0; k < params.n_theta; ++k) {
    const double dtheta = model.theta_min + k * step;
    Configuration q(model.dim());
    const double psi = q_init[kYawIndex] - dtheta;
    q[0] = q_init[0] - model.link_length * std::cos(psi);
    q[1] = q_init[1] - model.link_length * std::sin(psi);
    q[kYawIndex] = psi;
    q[kFirstJointIndex] = dtheta;
    for (int j = 1; j < nj; ++j) q[kFirstJointIndex + j] = q_init[kFirstJointIndex + j - 1];
    out.push_back(std::move(q));
  }
  return out;
}

bool check_collision(const RobotModel& model, const Configuration& q, const DistanceField& field,
                     const AnchorParams& params) {
  const KinematicState ks = compute_kinematics(model, q, false);
  const std::size_t n = ks.rotor_world.size();
  std::vector<double> xs(n), ys(n), d(n), gx(n), gy(n);
  std::vector<std::uint8_t> oob(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = ks.rotor_world[i].x();
    ys[i] = ks.rotor_world[i].y();
  }
  field.query_batch(xs.data(), ys.data(), n, d.data(), gx.data(), gy.data(), oob.data());
  const double threshold = model.propeller_radius + params.delta_collision;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(d[i] > threshold)) return false;
  }
  return true;
}

bool check_controllability(const RobotModel& model, const Configuration& q, const AnchorParams& params) {
  return tau_min(model, q) > params.delta_tau;
}

std::vector<Configuration> feasible_subset(const std::vector<Configuration>& candidates, const RobotModel& model,
                                           const DistanceField& field, const AnchorParams& params,
                                           const Configuration* from) {
  const int side = from ? torque_orientation(model, *from) : 0;
  std::vector<Configuration> out;
  for (const Configuration& q : candidates) {
    if (side != 0 && torque_orientation(model, q) != side) continue;
    if (check_collision(model, q, field, params) && check_controllability(model, q, params)) out.push_back(q);
  }
  return out;
}

double progress_cost(const Vec2& root, const ReferencePath& path) {
  const std::size_t np = path.waypoints.size();
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < np; ++i) {
    const double d = (path.waypoints[i] - root).norm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best_d + (1.0 - static_cast<double>(best + 1) / static_cast<double>(np));
}

Configuration select_best(const std::vector<Configuration>& feasible, const ReferencePath& path) {
  if (feasible.empty()) throw Error(ErrorCode::EmptyFeasibleSet, "no feasible candidate");
  if (path.waypoints.empty()) throw Error(ErrorCode::InvalidArgument, "reference path is empty");
  std::size_t best = 0;
  double best_j = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < feasible.size(); ++c) {
    const double j = progress_cost(feasible[c].head<2>(), path);
    if (j < best_j) {
      best_j = j;
      best = c;
    }
  }
  return feasible[best];
}

AnchorSequence generate_anchor_states(const Configuration& q_init, const Configuration& q_target,
                                      const RobotModel& model, const DistanceField& field,
                                      const ReferencePath& path, const AnchorParams& params) {
  check_configuration(model, q_init);
  check_configuration(model, q_target);
  params.validate();
  const std::array<std::pair<const Configuration*, const char*>, 2> ends{{{&q_init, "initial"}, {&q_target, "target"}}};
  for (const auto& [q, name] : ends) {
    if (!check_collision(model, *q, field, params)) {
      throw Error(ErrorCode::InfeasibleEndpoint, std::string(name) + " state violates rotor clearance");
    }
    if (!check_controllability(model, *q, params)) {
      throw Error(ErrorCode::InfeasibleEndpoint, std::string(name) + " state is not controllable");
    }
  }

  if (torque_orientation(model, q_init) != torque_orientation(model, q_target)) {
    throw Error(ErrorCode::InfeasibleEndpoint, "initial and target states have opposite torque orientation");
  }

  // Limited-discrepancy search over candidates in cost order. Pass k allows
  // option ranks summing to at most k along the chain, so pass 0 is the plain
  // greedy chain; passes stop at max_discrepancy. Chain length is capped by
  // max_iters and candidate-set evaluations by max_expansions.
  const Vec2 goal = q_target.head<2>();
  int expansions = 0;
  bool pruned = false;
  int greedy_dead_end = -1;  // depth of the first empty feasible set on pass 0
  AnchorSequence seq;
  seq.states.push_back(q_init);

  auto expand = [&](const Configuration& from) {
    if (expansions >= params.max_expansions) {
      throw Error(ErrorCode::AnchorGenerationFailed,
                  "no chain within " + std::to_string(params.max_expansions) + " expansions", expansions);
    }
    ++expansions;
    std::vector<Configuration> feasible =
        feasible_subset(candidate_set(from, model, params), model, field, params, &from);
    std::vector<double> cost(feasible.size());
    for (std::size_t c = 0; c < feasible.size(); ++c) cost[c] = progress_cost(feasible[c].head<2>(), path);
    std::vector<std::size_t> order(feasible.size());
    for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });
    std::vector<Configuration> sorted;
    sorted.reserve(order.size());
    for (std::size_t c : order) sorted.push_back(std::move(feasible[c]));
    return sorted;
  };

  std::function<bool(int, int)> search = [&](int depth, int allowance) {
    if ((seq.states.back().head<2>() - goal).norm() <= params.eps_goal) return true;
    if (depth >= params.max_iters) return false;
    const std::vector<Configuration> options = expand(seq.states.back());
    if (options.empty() && greedy_dead_end < 0) greedy_dead_end = depth;
    const std::size_t tried = std::min(options.size(), static_cast<std::size_t>(allowance) + 1);
    if (tried < options.size()) pruned = true;
    for (std::size_t rank = 0; rank < tried; ++rank) {
      seq.states.push_back(options[rank]);
      if (search(depth + 1, allowance - static_cast<int>(rank))) return true;
      seq.states.pop_back();
    }
    return false;
  };

  bool found = false;
  for (int allowance = 0; allowance <= params.max_discrepancy && !found; ++allowance) {
    pruned = false;
    found = search(0, allowance);
    if (!pruned) break;
  }
  if (!found) {
    if (greedy_dead_end >= 0) {
      throw Error(ErrorCode::AnchorGenerationFailed,
                  "no feasible candidate at iteration " + std::to_string(greedy_dead_end), greedy_dead_end);
    }
    throw Error(ErrorCode::AnchorGenerationFailed,
                "no convergence within " + std::to_string(params.max_iters) + " iterations", params.max_iters);
  }
  seq.states.push_back(q_target);
  return seq;
}

}  // namespace fbplan
