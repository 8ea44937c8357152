#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fbplan/esdf.hpp"
#include "fbplan/planner.hpp"

namespace fbplan {

/// Flat `section.key = value` text; `#` starts a comment.
class KeyValueFile {
 public:
  static KeyValueFile parse(const std::string& text, const std::string& origin = "<string>");
  static KeyValueFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& raw(const std::string& key) const;
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> words(const std::string& key) const;
  bool boolean(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return values_; }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  std::string origin_;
};

enum class SceneType { Empty, SingleGap, DualGap, TripleGap, Poles, UPassage, File };

const char* to_string(SceneType t);

struct SceneSpec {
  SceneType type = SceneType::SingleGap;
  double width = 0.7;            // gap or corridor width (m)
  double wall_thickness = 0.2;   // m
  double wall_x = 0.0;           // near face of the first wall (m)
  double gap_center_y = 0.25;    // m
  double x_offset = 1.2;         // spacing between consecutive walls (m)
  double y_offset = 0.0;         // lateral shift of alternate gaps (m)
  double pole_radius = 0.15;     // m
  std::vector<Vec2> pole_centers;
  double u_length = 2.4;         // length of the U legs (m)
  double u_rise = 1.6;           // distance between the U legs (m)
  std::filesystem::path cloud_path;
};

struct MapSpec {
  Bounds2 bounds;
  bool bounds_set = false;
  double resolution = 0.1;
  double z_lo = -0.5;
  double z_hi = 0.5;
};

enum class GoalMode { Fixed, Mirrored };

struct CampaignSpec {
  int trials = 50;
  double x_min = 0.5;
  double x_max = 1.32;
  double y = 0.25;
  double yaw_deg = 5.0;
  std::vector<double> joints_deg{90.0, 90.0, 90.0};
  GoalMode goal_mode = GoalMode::Fixed;
  double goal_x = -2.0;
  double goal_y = 0.25;
  double goal_yaw_deg = 5.0;
  std::vector<double> goal_joints_deg{90.0, 90.0, 90.0};
  std::vector<Ablation> arms{Ablation::Full, Ablation::NoAnchorStates, Ablation::NoLocalPlanning,
                             Ablation::NoParallel};
};

struct ScenarioConfig {
  SceneSpec scene;
  MapSpec map;
  RobotModel robot;
  PlannerConfig planner;
  Configuration start;
  Configuration goal;
  std::uint64_t seed = 0;
  CampaignSpec campaign;
};

/// Builds a config from parsed keys. Unknown keys and bad values throw
/// Error(ConfigError) naming the key. Relative paths resolve against `base_dir`.
ScenarioConfig make_scenario(const KeyValueFile& kv, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Every key make_scenario understands.
const std::set<std::string>& known_keys();

/// Configuration from root position, yaw and joint angles in degrees.
Configuration make_configuration(const RobotModel& model, const Vec2& position, double yaw_deg,
                                 const std::vector<double>& joints_deg);

struct Scene {
  PointCloud cloud;
  Bounds2 bounds;
};

/// Synthetic obstacle points on a 0.1 m lattice. Throws ConfigError for
/// impossible geometry.
Scene build_scene(const ScenarioConfig& config);

/// Cloud voxelized over the scene bounds and converted to a signed field.
EsdfGrid build_map(const ScenarioConfig& config, const Scene& scene);

struct Instance {
  Configuration start;
  Configuration goal;
};

/// Start root x uniform in [x_min, x_max]; everything else fixed. The goal is
/// either the configured one or the start mirrored across the first wall.
Instance sample_instance(std::mt19937_64& rng, const ScenarioConfig& config);

}  // namespace fbplan
