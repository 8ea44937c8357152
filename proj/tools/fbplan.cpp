#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fbplan/benchmark.hpp"
#include "fbplan/io.hpp"
#include "fbplan/kernels.hpp"
#include "fbplan/scenario.hpp"
#include "gradcheck.hpp"

namespace fs = std::filesystem;
using namespace fbplan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPlanFailure = 1;
constexpr int kExitConfigError = 2;

void print_validation(const ValidationReport& v) {
  std::printf("validation: %s  min_clearance=%.4f m  min_tau=%.4g N m  max_speed_ratio=%.3f  samples=%d\n",
              v.success ? "ok" : "FAILED", v.min_clearance, v.min_tau, v.max_speed_ratio, v.samples);
  if (!v.success) {
    std::printf("first violation: %s at t=%.3f s (segment %d)\n", to_string(v.first_kind), v.first_time,
                v.first_segment);
  }
}

struct PlanArgs {
  std::string config;
  std::string out_dir = ".";
  bool svg = false;
  bool csv = false;
  double rate = 100.0;
};

int run_plan(const PlanArgs& args) {
  const ScenarioConfig cfg = load_scenario(args.config);
  const Scene scene = build_scene(cfg);
  const EsdfGrid esdf = build_map(cfg, scene);
  const PlanResult result = plan(cfg.start, cfg.goal, cfg.robot, esdf, cfg.planner);

  std::printf("anchor states: %zu  segments: %zu  duration: %.3f s  planning time: %.3f s\n",
              result.anchors.states.size(), result.reports.size(), result.trajectory.duration(),
              result.wall_time);
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const SolveReport& r = result.reports[i];
    std::printf("  segment %zu: %s after %d iterations, energy=%.4g collision=%.3g ctrl=%.3g, %.3f s\n", i,
                to_string(r.termination), r.iterations, r.energy, r.collision, r.controllability, r.wall_time);
  }
  print_validation(result.validation);
  const TrajectoryLengths len = trajectory_lengths(result.trajectory);
  std::printf("root length: %.3f m  generalized length: %.3f\n", len.root, len.generalized);

  const fs::path out(args.out_dir);
  fs::create_directories(out);
  write_text(out / "report.json", plan_report_json(result));
  write_trajectory_csv(out / "trajectory.csv", sample_commands(result.trajectory, args.rate));
  if (args.csv) {
    write_anchors_csv(out / "anchors.csv", result.anchors);
    write_path_csv(out / "path.csv", result.path);
  }
  if (args.svg) {
    SvgContent content;
    content.grid = &esdf;
    content.path = &result.path;
    content.anchors = result.anchors.states;
    const int snapshots = 12;
    for (int k = 0; k <= snapshots; ++k) {
      const double t = k == snapshots ? result.trajectory.duration() : result.trajectory.duration() * k / snapshots;
      content.snapshots.push_back(result.trajectory.evaluate(t));
    }
    write_text(out / "scene.svg", render_svg(cfg.robot, content));
  }
  return result.validation.success ? kExitOk : kExitPlanFailure;
}

struct BenchArgs {
  std::string config;
  std::vector<std::string> arms;
  int trials = 0;
  int threads = 0;
  std::string out_dir = ".";
  bool quiet = false;
};

int run_bench(const BenchArgs& args) {
  const ScenarioConfig cfg = load_scenario(args.config);
  BenchmarkOptions opts;
  for (const std::string& name : args.arms) {
    const auto arm = parse_ablation(name);
    if (!arm) throw Error(ErrorCode::ConfigError, "key 'arms': unknown arm '" + name + "'");
    opts.arms.push_back(*arm);
  }
  opts.trials = args.trials;
  opts.threads = args.threads;
  if (!args.quiet) {
    opts.on_trial = [](const TrialRecord& t) {
      std::fprintf(stderr, "%-6s trial %3d x=%.3f %s %s %.2f s\n", to_string(t.arm), t.trial, t.start_x,
                   t.success ? "ok" : "fail", t.failure.c_str(), t.time);
    };
  }
  const BenchmarkResult res = run_benchmark(cfg, opts);

  std::printf("%-8s %7s %9s %16s %18s %18s\n", "arm", "trials", "success", "time (s)", "root length (m)",
              "gen. length");
  for (const ArmStats& s : res.stats) {
    std::printf("%-8s %7d %8.1f%% %7.3f +- %6.3f %8.3f +- %6.3f %8.3f +- %6.3f\n", to_string(s.arm), s.trials,
                100.0 * s.success_rate, s.time_mean, s.time_std, s.root_mean, s.root_std, s.generalized_mean,
                s.generalized_std);
    for (const auto& [kind, count] : s.failures) std::printf("         failure %-22s %d\n", kind.c_str(), count);
  }
  const fs::path out(args.out_dir);
  fs::create_directories(out);
  write_stats_csv(out / "stats.csv", res.stats);
  write_trials_csv(out / "trials.csv", res.trials);
  return kExitOk;
}

int run_validate(const std::string& traj_path, const std::string& config) {
  const ScenarioConfig cfg = load_scenario(config);
  const EsdfGrid esdf = build_map(cfg, build_scene(cfg));
  const std::vector<CommandSample> samples = read_trajectory_csv(traj_path);
  if (!samples.empty() && samples.front().q.size() != cfg.robot.dim()) {
    throw Error(ErrorCode::ConfigError, "key 'robot.n_joints': does not match the trajectory columns");
  }
  const ValidationReport v = validate_samples(samples, cfg.robot, esdf, cfg.planner.local);
  print_validation(v);
  return v.success ? kExitOk : kExitPlanFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory planner for planar multi-link aerial robots"};
  app.require_subcommand(1);

  PlanArgs plan_args;
  CLI::App* plan_cmd = app.add_subcommand("plan", "Plan one start/goal query from a scenario file");
  plan_cmd->add_option("config", plan_args.config, "Scenario file")->required()->check(CLI::ExistingFile);
  plan_cmd->add_option("--out-dir", plan_args.out_dir, "Output directory");
  plan_cmd->add_flag("--svg", plan_args.svg, "Write scene.svg");
  plan_cmd->add_flag("--csv", plan_args.csv, "Also write anchors.csv and path.csv");
  plan_cmd->add_option("--rate", plan_args.rate, "Command sampling rate (Hz)")->check(CLI::PositiveNumber);

  BenchArgs bench_args;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run the randomized campaign of a scenario file");
  bench_cmd->add_option("config", bench_args.config, "Scenario file")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--arms", bench_args.arms, "Arms: full, no_as, no_lp, no_pc")->delimiter(',');
  bench_cmd->add_option("--trials", bench_args.trials, "Trials per arm")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--threads", bench_args.threads, "Segment workers")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--out-dir", bench_args.out_dir, "Output directory for stats.csv and trials.csv");
  bench_cmd->add_flag("--quiet", bench_args.quiet, "No per-trial progress on stderr");

  std::string traj_path, validate_config;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a sampled trajectory against a scenario");
  validate_cmd->add_option("trajectory", traj_path, "Trajectory CSV")->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("config", validate_config, "Scenario file")->required()->check(CLI::ExistingFile);

  std::string module = "all";
  CLI::App* grad_cmd = app.add_subcommand("gradcheck", "Compare analytic gradients with finite differences");
  grad_cmd->add_option("--module", module, "Module")->check(CLI::IsMember({"all", "spline", "penalty", "polytope"}));

  CLI::App* info_cmd = app.add_subcommand("info", "Print the active kernel variant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*plan_cmd) return run_plan(plan_args);
    if (*bench_cmd) return run_bench(bench_args);
    if (*validate_cmd) return run_validate(traj_path, validate_config);
    if (*grad_cmd) return tools::run_gradcheck(module, std::cout) ? kExitOk : kExitPlanFailure;
    if (*info_cmd) {
      std::printf("kernels: %s (detected %s)\n", kernels::to_string(kernels::active_isa()),
                  kernels::to_string(kernels::detect_isa()));
      return kExitOk;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    const bool config = e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::ParseError ||
                        e.code() == ErrorCode::IoError || e.code() == ErrorCode::InvalidArgument;
    return config ? kExitConfigError : kExitPlanFailure;
  }
  return kExitOk;
}
