#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fbplan/planner.hpp"
#include "fbplan/scenario.hpp"

namespace fbplan {

struct TrajectoryLengths {
  double root = 0.0;         // arc length of the root position (m)
  double generalized = 0.0;  // arc length in configuration space
};

/// Arc lengths by dense polyline sampling of each segment.
TrajectoryLengths trajectory_lengths(const GlobalTrajectory& traj, int samples_per_segment = 2000);

struct TrialRecord {
  int trial = 0;
  Ablation arm = Ablation::Full;
  double start_x = 0.0;
  bool success = false;
  std::string failure;  // violation kind or error code; empty on success
  double time = 0.0;    // s, wall clock around plan()
  int anchors = 0;
  TrajectoryLengths lengths;
  double max_speed_ratio = 0.0;
  double min_tau = 0.0;
  double min_clearance = 0.0;
};

struct ArmStats {
  Ablation arm = Ablation::Full;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  double time_mean = 0.0;  // over all trials
  double time_std = 0.0;
  double root_mean = 0.0;  // lengths over successes only
  double root_std = 0.0;
  double generalized_mean = 0.0;
  double generalized_std = 0.0;
  std::map<std::string, int> failures;
};

struct BenchmarkOptions {
  std::vector<Ablation> arms;  // empty: the campaign's arms
  int trials = 0;              // 0: the campaign's count
  int threads = 0;             // 0: PlannerConfig default
  std::function<void(const TrialRecord&)> on_trial;
};

struct BenchmarkResult {
  std::vector<TrialRecord> trials;
  std::vector<ArmStats> stats;
};

/// Trials run sequentially; instance i is the i-th draw from a generator
/// seeded with the config seed and is shared by every arm.
BenchmarkResult run_benchmark(const ScenarioConfig& config, const BenchmarkOptions& options);

ArmStats summarize(Ablation arm, const std::vector<TrialRecord>& trials);

}  // namespace fbplan
