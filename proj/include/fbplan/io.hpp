#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fbplan/benchmark.hpp"
#include "fbplan/planner.hpp"

namespace fbplan {

/// Header `t,q0..q{D-1},dq0..dq{D-1}`; one sample per line.
void write_trajectory_csv(const std::filesystem::path& path, const std::vector<CommandSample>& samples);
std::vector<CommandSample> read_trajectory_csv(const std::filesystem::path& path);

/// Header `index,q0..q{D-1}`; one configuration per line.
void write_anchors_csv(const std::filesystem::path& path, const AnchorSequence& anchors);
AnchorSequence read_anchors_csv(const std::filesystem::path& path);

void write_path_csv(const std::filesystem::path& path, const ReferencePath& ref);

/// One row per arm.
void write_stats_csv(const std::filesystem::path& path, const std::vector<ArmStats>& stats);
void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialRecord>& trials);

/// Solver reports and validation as JSON text.
std::string plan_report_json(const PlanResult& result);

struct SvgContent {
  const EsdfGrid* grid = nullptr;
  const ReferencePath* path = nullptr;
  std::vector<Configuration> anchors;
  std::vector<Configuration> snapshots;
};

/// Top-down view: occupied cells, reference path, anchor and trajectory
/// snapshots drawn as link polylines with rotor discs of radius R_p.
std::string render_svg(const RobotModel& model, const SvgContent& content);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace fbplan
