#include "fbplan/benchmark.hpp"

#include <chrono>
#include <cmath>

namespace fbplan {

TrajectoryLengths trajectory_lengths(const GlobalTrajectory& traj, int samples_per_segment) {
  TrajectoryLengths out;
  for (const SplineSegment& seg : traj.segments()) {
    Vec prev = seg.evaluate(0.0);
    for (int m = 1; m <= samples_per_segment; ++m) {
      const double t = m == samples_per_segment ? seg.duration() : seg.duration() * m / samples_per_segment;
      const Vec q = seg.evaluate(t);
      out.root += (q.head<2>() - prev.head<2>()).norm();
      out.generalized += (q - prev).norm();
      prev = q;
    }
  }
  return out;
}

namespace {

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return;
  for (double x : v) sd += (x - mean) * (x - mean);
  sd = std::sqrt(sd / static_cast<double>(v.size() - 1));
}

}  // namespace

ArmStats summarize(Ablation arm, const std::vector<TrialRecord>& trials) {
  ArmStats s;
  s.arm = arm;
  std::vector<double> times, roots, gens;
  for (const TrialRecord& t : trials) {
    if (t.arm != arm) continue;
    ++s.trials;
    times.push_back(t.time);
    if (t.success) {
      ++s.successes;
      roots.push_back(t.lengths.root);
      gens.push_back(t.lengths.generalized);
    } else {
      ++s.failures[t.failure];
    }
  }
  s.success_rate = s.trials ? static_cast<double>(s.successes) / s.trials : 0.0;
  mean_std(times, s.time_mean, s.time_std);
  mean_std(roots, s.root_mean, s.root_std);
  mean_std(gens, s.generalized_mean, s.generalized_std);
  return s;
}

BenchmarkResult run_benchmark(const ScenarioConfig& config, const BenchmarkOptions& options) {
  const std::vector<Ablation> arms = options.arms.empty() ? config.campaign.arms : options.arms;
  const int trials = options.trials > 0 ? options.trials : config.campaign.trials;
  const Scene scene = build_scene(config);
  const EsdfGrid esdf = build_map(config, scene);

  std::mt19937_64 rng(config.seed);
  std::vector<Instance> instances;
  instances.reserve(trials);
  for (int i = 0; i < trials; ++i) instances.push_back(sample_instance(rng, config));

  BenchmarkResult result;
  for (Ablation arm : arms) {
    PlannerConfig pc = config.planner;
    pc.ablation = arm;
    if (options.threads > 0) pc.threads = options.threads;
    for (int i = 0; i < trials; ++i) {
      TrialRecord rec;
      rec.trial = i;
      rec.arm = arm;
      rec.start_x = instances[i].start[0];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const PlanResult pr = plan(instances[i].start, instances[i].goal, config.robot, esdf, pc);
        rec.time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rec.anchors = static_cast<int>(pr.anchors.states.size());
        rec.success = pr.validation.success;
        rec.failure = rec.success ? "" : to_string(pr.validation.first_kind);
        rec.max_speed_ratio = pr.validation.max_speed_ratio;
        rec.min_tau = pr.validation.min_tau;
        rec.min_clearance = pr.validation.min_clearance;
        rec.lengths = trajectory_lengths(pr.trajectory);
      } catch (const Error& e) {
        rec.time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rec.success = false;
        rec.failure = to_string(e.code());
      }
      if (options.on_trial) options.on_trial(rec);
      result.trials.push_back(rec);
    }
    result.stats.push_back(summarize(arm, result.trials));
  }
  return result;
}

}  // namespace fbplan
