#include "fbplan/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fbplan {

namespace {

constexpr double kLattice = 0.1;  // spacing of synthetic obstacle points (m)

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::ConfigError, "key '" + key + "': " + what);
}

long lattice_index(double v) { return std::lround(v / kLattice); }

bool on_lattice(double v) { return std::abs(v / kLattice - std::round(v / kLattice)) < 1e-6; }

// Wall occupying [near - thickness, near] in x and [y_lo, y_hi] in y, with one
// opening of `width` centred at `gap_y`.
void add_wall(PointCloud& cloud, double near, double thickness, double y_lo, double y_hi, double gap_y,
              double width) {
  const double lo_edge = gap_y - 0.5 * width;
  const double hi_edge = gap_y + 0.5 * width;
  if (!on_lattice(lo_edge) || !on_lattice(hi_edge) || !on_lattice(near) || !on_lattice(thickness)) {
    throw Error(ErrorCode::ConfigError, "wall faces and gap edges must lie on the 0.1 m point lattice");
  }
  const long g_lo = lattice_index(lo_edge);
  const long g_hi = lattice_index(hi_edge);
  for (long ix = lattice_index(near - thickness); ix <= lattice_index(near); ++ix) {
    for (long iy = lattice_index(y_lo); iy <= lattice_index(y_hi); ++iy) {
      if (iy > g_lo && iy < g_hi) continue;
      cloud.points.emplace_back(ix * kLattice, iy * kLattice, 0.0);
    }
  }
}

Bounds2 snap_bounds(const Vec2& lo, const Vec2& hi, double res) {
  // Cell centres land on multiples of the resolution.
  Bounds2 b;
  b.min = Vec2(std::floor(lo.x() / res - 1e-9) * res - 0.5 * res, std::floor(lo.y() / res - 1e-9) * res - 0.5 * res);
  b.max = Vec2(std::ceil(hi.x() / res + 1e-9) * res + 0.5 * res, std::ceil(hi.y() / res + 1e-9) * res + 0.5 * res);
  return b;
}

double distance_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

std::vector<double> degrees_list(const KeyValueFile& kv, const std::string& key, int expected) {
  std::vector<double> v = kv.numbers(key);
  if (static_cast<int>(v.size()) != expected) {
    config_error(key, "expected " + std::to_string(expected) + " values, got " + std::to_string(v.size()));
  }
  return v;
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text, const std::string& origin) {
  KeyValueFile kv;
  kv.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError, origin + ":" + std::to_string(line_no) + ": expected 'key = value'", line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::ConfigError, origin + ":" + std::to_string(line_no) + ": empty key", line_no);
    }
    if (kv.values_.count(key)) {
      throw Error(ErrorCode::ConfigError, origin + ":" + std::to_string(line_no) + ": key '" + key + "' repeated",
                  line_no);
    }
    kv.values_[key] = trim(line.substr(eq + 1));
    kv.lines_[key] = line_no;
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

const std::string& KeyValueFile::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) config_error(key, "missing");
  return it->second;
}

double KeyValueFile::number(const std::string& key) const {
  const std::string& s = raw(key);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    config_error(key, "not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) config_error(key, "not a number: '" + s + "'");
  return v;
}

int KeyValueFile::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 2e9) config_error(key, "not an integer");
  return static_cast<int>(v);
}

std::vector<std::string> KeyValueFile::words(const std::string& key) const {
  std::string s = raw(key);
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::vector<double> KeyValueFile::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& w : words(key)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(w, &used);
    } catch (const std::exception&) {
      config_error(key, "not a number: '" + w + "'");
    }
    if (used != w.size() || !std::isfinite(v)) config_error(key, "not a number: '" + w + "'");
    out.push_back(v);
  }
  return out;
}

bool KeyValueFile::boolean(const std::string& key) const {
  const std::string& s = raw(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  config_error(key, "expected true or false");
}

const char* to_string(SceneType t) {
  switch (t) {
    case SceneType::Empty: return "empty";
    case SceneType::SingleGap: return "single_gap";
    case SceneType::DualGap: return "dual_gap";
    case SceneType::TripleGap: return "triple_gap";
    case SceneType::Poles: return "poles";
    case SceneType::UPassage: return "u_passage";
    case SceneType::File: return "file";
  }
  return "unknown";
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "scene.type", "scene.width", "scene.wall_thickness", "scene.wall_x", "scene.gap_center_y",
      "scene.x_offset", "scene.y_offset", "scene.pole_radius", "scene.pole_centers", "scene.u_length",
      "scene.u_rise", "scene.cloud",
      "map.x_min", "map.x_max", "map.y_min", "map.y_max", "map.resolution", "map.z_min", "map.z_max",
      "robot.n_joints", "robot.link_length", "robot.propeller_radius", "robot.theta_min_deg",
      "robot.theta_max_deg", "robot.drag_coefficient", "robot.spin_signs", "robot.max_thrust", "robot.link_mass",
      "planner.alpha_v", "planner.alpha_K", "planner.v_max", "planner.omega_max", "planner.delta_collision",
      "planner.delta_tau", "planner.collision_weight", "planner.collision_margin", "planner.controllability_margin", "planner.f_tol",
      "planner.time_budget", "planner.n_free", "planner.degree", "planner.max_iterations",
      "planner.constraint_penalty", "planner.deterministic", "planner.n_theta", "planner.eps_goal",
      "planner.max_anchor_iters", "planner.max_anchor_expansions", "planner.max_anchor_discrepancy", "planner.guidance_clearance", "planner.threads",
      "start.position", "start.yaw_deg", "start.joints_deg",
      "goal.position", "goal.yaw_deg", "goal.joints_deg",
      "seed", "ablation",
      "campaign.trials", "campaign.x_min", "campaign.x_max", "campaign.y", "campaign.yaw_deg",
      "campaign.joints_deg", "campaign.goal_mode", "campaign.goal_x", "campaign.goal_y",
      "campaign.goal_yaw_deg", "campaign.goal_joints_deg", "campaign.arms",
  };
  return keys;
}

Configuration make_configuration(const RobotModel& model, const Vec2& position, double yaw_deg,
                                 const std::vector<double>& joints_deg) {
  if (static_cast<int>(joints_deg.size()) != model.n_joints) {
    throw Error(ErrorCode::InvalidArgument, "joint list does not match the model");
  }
  Configuration q(model.dim());
  q[0] = position.x();
  q[1] = position.y();
  q[kYawIndex] = deg2rad(yaw_deg);
  for (int j = 0; j < model.n_joints; ++j) q[kFirstJointIndex + j] = deg2rad(joints_deg[j]);
  return q;
}

ScenarioConfig make_scenario(const KeyValueFile& kv, const std::filesystem::path& base_dir) {
  for (const auto& [key, value] : kv.entries()) {
    if (!known_keys().count(key)) config_error(key, "unknown key");
  }
  ScenarioConfig c;
  auto num = [&](const char* key, double& target) {
    if (kv.has(key)) target = kv.number(key);
  };
  auto integer = [&](const char* key, int& target) {
    if (kv.has(key)) target = kv.integer(key);
  };

  // Robot first: later lists depend on its joint count.
  RobotModel& r = c.robot;
  integer("robot.n_joints", r.n_joints);
  if (r.n_joints < 1) config_error("robot.n_joints", "must be >= 1");
  if (kv.has("robot.spin_signs")) {
    r.spin_signs.clear();
    for (double s : kv.numbers("robot.spin_signs")) r.spin_signs.push_back(static_cast<int>(s));
  } else {
    r.spin_signs.clear();
    for (int i = 0; i < r.n_rotors(); ++i) r.spin_signs.push_back(i % 2 == 0 ? 1 : -1);
  }
  num("robot.link_length", r.link_length);
  num("robot.propeller_radius", r.propeller_radius);
  if (kv.has("robot.theta_min_deg")) r.theta_min = deg2rad(kv.number("robot.theta_min_deg"));
  if (kv.has("robot.theta_max_deg")) r.theta_max = deg2rad(kv.number("robot.theta_max_deg"));
  num("robot.drag_coefficient", r.drag_coefficient);
  num("robot.max_thrust", r.max_thrust);
  num("robot.link_mass", r.link_mass);
  try {
    r.validate();
  } catch (const Error& e) {
    config_error("robot", e.what());
  }

  SceneSpec& s = c.scene;
  if (kv.has("scene.type")) {
    const std::string& t = kv.raw("scene.type");
    if (t == "empty") s.type = SceneType::Empty;
    else if (t == "single_gap") s.type = SceneType::SingleGap;
    else if (t == "dual_gap") s.type = SceneType::DualGap;
    else if (t == "triple_gap") s.type = SceneType::TripleGap;
    else if (t == "poles") s.type = SceneType::Poles;
    else if (t == "u_passage") s.type = SceneType::UPassage;
    else if (t == "file") s.type = SceneType::File;
    else config_error("scene.type", "unknown scene '" + t + "'");
  }
  num("scene.width", s.width);
  num("scene.wall_thickness", s.wall_thickness);
  num("scene.wall_x", s.wall_x);
  num("scene.gap_center_y", s.gap_center_y);
  num("scene.x_offset", s.x_offset);
  num("scene.y_offset", s.y_offset);
  num("scene.pole_radius", s.pole_radius);
  num("scene.u_length", s.u_length);
  num("scene.u_rise", s.u_rise);
  if (kv.has("scene.pole_centers")) {
    const std::vector<double> v = kv.numbers("scene.pole_centers");
    if (v.size() % 2 != 0) config_error("scene.pole_centers", "expected x, y pairs");
    for (std::size_t i = 0; i < v.size(); i += 2) s.pole_centers.emplace_back(v[i], v[i + 1]);
  }
  if (kv.has("scene.cloud")) {
    s.cloud_path = kv.raw("scene.cloud");
    if (s.cloud_path.is_relative() && !base_dir.empty()) s.cloud_path = base_dir / s.cloud_path;
  }
  if (!(s.width > 0.0)) config_error("scene.width", "must be > 0");
  if (!(s.wall_thickness > 0.0)) config_error("scene.wall_thickness", "must be > 0");
  if (s.type == SceneType::File && s.cloud_path.empty()) config_error("scene.cloud", "required for file scenes");

  MapSpec& m = c.map;
  num("map.resolution", m.resolution);
  if (!(m.resolution > 0.0)) config_error("map.resolution", "must be > 0");
  num("map.z_min", m.z_lo);
  num("map.z_max", m.z_hi);
  const int bound_keys = kv.has("map.x_min") + kv.has("map.x_max") + kv.has("map.y_min") + kv.has("map.y_max");
  if (bound_keys != 0 && bound_keys != 4) config_error("map.x_min", "give all four map bounds or none");
  if (bound_keys == 4) {
    m.bounds_set = true;
    m.bounds.min = Vec2(kv.number("map.x_min"), kv.number("map.y_min"));
    m.bounds.max = Vec2(kv.number("map.x_max"), kv.number("map.y_max"));
    if (!(m.bounds.max.x() > m.bounds.min.x() && m.bounds.max.y() > m.bounds.min.y())) {
      config_error("map.x_max", "bounds are empty");
    }
  }

  PlannerConfig& p = c.planner;
  num("planner.alpha_v", p.local.alpha_v);
  num("planner.alpha_K", p.local.alpha_K);
  num("planner.v_max", p.local.v_max);
  num("planner.omega_max", p.local.omega_max);
  num("planner.delta_collision", p.local.delta_collision);
  num("planner.delta_tau", p.local.delta_tau);
  num("planner.collision_weight", p.local.collision_weight);
  num("planner.collision_margin", p.local.collision_margin);
  num("planner.controllability_margin", p.local.controllability_margin);
  num("planner.f_tol", p.local.f_tol);
  num("planner.time_budget", p.local.time_budget);
  integer("planner.n_free", p.local.n_free);
  integer("planner.degree", p.local.degree);
  integer("planner.max_iterations", p.local.max_iterations);
  num("planner.constraint_penalty", p.local.constraint_penalty);
  if (kv.has("planner.deterministic")) p.local.deterministic = kv.boolean("planner.deterministic");
  integer("planner.n_theta", p.anchors.n_theta);
  p.anchors.eps_goal = r.link_length;
  num("planner.eps_goal", p.anchors.eps_goal);
  integer("planner.max_anchor_iters", p.anchors.max_iters);
  integer("planner.max_anchor_expansions", p.anchors.max_expansions);
  integer("planner.max_anchor_discrepancy", p.anchors.max_discrepancy);
  num("planner.guidance_clearance", p.guidance_clearance);
  integer("planner.threads", p.threads);
  p.anchors.delta_collision = p.local.delta_collision;
  p.anchors.delta_tau = p.local.delta_tau;
  if (kv.has("ablation")) {
    const auto a = parse_ablation(kv.raw("ablation"));
    if (!a) config_error("ablation", "unknown arm '" + kv.raw("ablation") + "'");
    p.ablation = *a;
  }
  try {
    p.local.validate();
    p.anchors.validate();
  } catch (const Error& e) {
    config_error("planner", e.what());
  }

  auto read_state = [&](const std::string& prefix, Vec2 pos, double yaw, std::vector<double> joints) {
    if (kv.has(prefix + ".position")) {
      const std::vector<double> v = kv.numbers(prefix + ".position");
      if (v.size() != 2) config_error(prefix + ".position", "expected x, y");
      pos = Vec2(v[0], v[1]);
    }
    if (kv.has(prefix + ".yaw_deg")) yaw = kv.number(prefix + ".yaw_deg");
    if (kv.has(prefix + ".joints_deg")) joints = degrees_list(kv, prefix + ".joints_deg", r.n_joints);
    return make_configuration(r, pos, yaw, joints);
  };
  const std::vector<double> square(r.n_joints, 90.0);
  c.start = read_state("start", Vec2(1.0, 0.25), 5.0, square);
  c.goal = read_state("goal", Vec2(-2.0, 0.25), 5.0, square);

  if (kv.has("seed")) {
    const double v = kv.number("seed");
    if (v < 0 || v != std::floor(v)) config_error("seed", "must be a non-negative integer");
    c.seed = static_cast<std::uint64_t>(v);
  }

  CampaignSpec& cs = c.campaign;
  cs.joints_deg = square;
  cs.goal_joints_deg = square;
  integer("campaign.trials", cs.trials);
  if (cs.trials < 1) config_error("campaign.trials", "must be >= 1");
  num("campaign.x_min", cs.x_min);
  num("campaign.x_max", cs.x_max);
  if (!(cs.x_max >= cs.x_min)) config_error("campaign.x_max", "must be >= campaign.x_min");
  num("campaign.y", cs.y);
  num("campaign.yaw_deg", cs.yaw_deg);
  if (kv.has("campaign.joints_deg")) cs.joints_deg = degrees_list(kv, "campaign.joints_deg", r.n_joints);
  if (kv.has("campaign.goal_mode")) {
    const std::string& g = kv.raw("campaign.goal_mode");
    if (g == "fixed") cs.goal_mode = GoalMode::Fixed;
    else if (g == "mirrored") cs.goal_mode = GoalMode::Mirrored;
    else config_error("campaign.goal_mode", "expected fixed or mirrored");
  }
  num("campaign.goal_x", cs.goal_x);
  num("campaign.goal_y", cs.goal_y);
  num("campaign.goal_yaw_deg", cs.goal_yaw_deg);
  if (kv.has("campaign.goal_joints_deg")) {
    cs.goal_joints_deg = degrees_list(kv, "campaign.goal_joints_deg", r.n_joints);
  }
  if (kv.has("campaign.arms")) {
    cs.arms.clear();
    for (const std::string& w : kv.words("campaign.arms")) {
      const auto a = parse_ablation(w);
      if (!a) config_error("campaign.arms", "unknown arm '" + w + "'");
      cs.arms.push_back(*a);
    }
    if (cs.arms.empty()) config_error("campaign.arms", "no arms listed");
  }
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return make_scenario(KeyValueFile::load(path), path.parent_path());
}

Scene build_scene(const ScenarioConfig& config) {
  const SceneSpec& s = config.scene;
  Scene scene;
  Vec2 lo = config.start.head<2>().cwiseMin(config.goal.head<2>());
  Vec2 hi = config.start.head<2>().cwiseMax(config.goal.head<2>());
  const double reach = config.robot.n_links() * config.robot.link_length;

  switch (s.type) {
    case SceneType::Empty:
      lo -= Vec2::Constant(reach + 1.0);
      hi += Vec2::Constant(reach + 1.0);
      break;
    case SceneType::SingleGap:
    case SceneType::DualGap:
    case SceneType::TripleGap: {
      const int walls = s.type == SceneType::SingleGap ? 1 : (s.type == SceneType::DualGap ? 2 : 3);
      const double far_wall = s.wall_x - (walls - 1) * s.x_offset - s.wall_thickness;
      lo = Vec2(std::min(lo.x() - reach, far_wall - reach - 1.0), s.gap_center_y - std::abs(s.y_offset) - 2.8);
      hi = Vec2(std::max(hi.x() + reach, s.wall_x + reach + 1.0), s.gap_center_y + std::abs(s.y_offset) + 2.8);
      if (walls > 1 && !(s.x_offset > s.wall_thickness)) {
        throw Error(ErrorCode::ConfigError, "key 'scene.x_offset': walls overlap");
      }
      for (int w = 0; w < walls; ++w) {
        const double gap_y = s.gap_center_y + (w % 2 == 1 ? s.y_offset : 0.0);
        add_wall(scene.cloud, s.wall_x - w * s.x_offset, s.wall_thickness, lo.y(), hi.y(), gap_y, s.width);
      }
      break;
    }
    case SceneType::Poles: {
      if (s.pole_centers.empty()) throw Error(ErrorCode::ConfigError, "key 'scene.pole_centers': no poles given");
      if (!(s.pole_radius >= 0.0)) throw Error(ErrorCode::ConfigError, "key 'scene.pole_radius': must be >= 0");
      for (const Vec2& c : s.pole_centers) {
        const long r = static_cast<long>(std::ceil(s.pole_radius / kLattice)) + 1;
        for (long ix = lattice_index(c.x()) - r; ix <= lattice_index(c.x()) + r; ++ix) {
          for (long iy = lattice_index(c.y()) - r; iy <= lattice_index(c.y()) + r; ++iy) {
            const Vec2 p(ix * kLattice, iy * kLattice);
            if ((p - c).norm() <= s.pole_radius + 1e-9) scene.cloud.points.emplace_back(p.x(), p.y(), 0.0);
          }
        }
        lo = lo.cwiseMin(c);
        hi = hi.cwiseMax(c);
      }
      lo -= Vec2::Constant(reach);
      hi += Vec2::Constant(reach);
      break;
    }
    case SceneType::UPassage: {
      // Corridor centre line: in along -x, across along +y, back along +x.
      const double y0 = s.gap_center_y;
      const double x_open = s.wall_x;
      const double x_turn = s.wall_x - s.u_length;
      const std::vector<Vec2> line{{x_open, y0}, {x_turn, y0}, {x_turn, y0 + s.u_rise}, {x_open, y0 + s.u_rise}};
      if (!(s.u_rise > s.width + 0.2) || !(s.u_length > s.width)) {
        throw Error(ErrorCode::ConfigError, "key 'scene.u_rise': U legs overlap");
      }
      const double pad = 0.5 * s.width + 0.3;
      for (long ix = lattice_index(x_turn - pad); ix <= lattice_index(x_open); ++ix) {
        for (long iy = lattice_index(y0 - pad); iy <= lattice_index(y0 + s.u_rise + pad); ++iy) {
          const Vec2 p(ix * kLattice, iy * kLattice);
          double d = std::numeric_limits<double>::infinity();
          for (std::size_t k = 0; k + 1 < line.size(); ++k) d = std::min(d, distance_to_segment(p, line[k], line[k + 1]));
          if (d >= 0.5 * s.width - 1e-9) scene.cloud.points.emplace_back(p.x(), p.y(), 0.0);
        }
      }
      lo = lo.cwiseMin(Vec2(x_turn - pad, y0 - pad)) - Vec2::Constant(0.5);
      hi = hi.cwiseMax(Vec2(x_open, y0 + s.u_rise + pad)) + Vec2::Constant(reach);
      // The block between the legs runs to the map edge so the corridor is the only route.
      for (long ix = lattice_index(x_open) + 1; ix <= lattice_index(hi.x()) + 1; ++ix) {
        for (long iy = lattice_index(y0 + 0.5 * s.width); iy <= lattice_index(y0 + s.u_rise - 0.5 * s.width); ++iy) {
          scene.cloud.points.emplace_back(ix * kLattice, iy * kLattice, 0.0);
        }
      }
      break;
    }
    case SceneType::File: {
      scene.cloud = load_point_cloud(s.cloud_path);
      for (const Vec3& p : scene.cloud.points) {
        lo = lo.cwiseMin(p.head<2>());
        hi = hi.cwiseMax(p.head<2>());
      }
      lo -= Vec2::Constant(1.0);
      hi += Vec2::Constant(1.0);
      break;
    }
  }
  if (config.map.bounds_set) {
    scene.bounds = config.map.bounds;
  } else {
    scene.bounds = snap_bounds(lo, hi, config.map.resolution);
  }
  return scene;
}

EsdfGrid build_map(const ScenarioConfig& config, const Scene& scene) {
  return build_esdf(voxelize(scene.cloud, config.map.resolution, scene.bounds, config.map.z_lo, config.map.z_hi));
}

Instance sample_instance(std::mt19937_64& rng, const ScenarioConfig& config) {
  const CampaignSpec& cs = config.campaign;
  const RobotModel& model = config.robot;
  std::uniform_real_distribution<double> ux(cs.x_min, cs.x_max);
  const double x = cs.x_max > cs.x_min ? ux(rng) : cs.x_min;
  Instance inst;
  inst.start = make_configuration(model, Vec2(x, cs.y), cs.yaw_deg, cs.joints_deg);
  if (cs.goal_mode == GoalMode::Fixed) {
    inst.goal = make_configuration(model, Vec2(cs.goal_x, cs.goal_y), cs.goal_yaw_deg, cs.goal_joints_deg);
  } else {
    // Reflect the start footprint [x, x + L cos(yaw)] across the first wall's mid-plane.
    const double mid = config.scene.wall_x - 0.5 * config.scene.wall_thickness;
    const double extent = model.link_length * std::cos(deg2rad(cs.yaw_deg));
    inst.goal = make_configuration(model, Vec2(2.0 * mid - x - extent, cs.y), cs.yaw_deg, cs.joints_deg);
  }
  return inst;
}

}  // namespace fbplan
