#include "fbplan/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace fbplan {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.precision(17);
  return out;
}

std::vector<double> split_numbers(const std::string& line, int line_no, const std::string& file) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (cell.empty() || used != cell.size()) {
      throw Error(ErrorCode::ParseError, file + ":" + std::to_string(line_no) + ": bad number '" + cell + "'", line_no);
    }
    out.push_back(v);
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const std::vector<CommandSample>& samples) {
  std::ofstream out = open_out(path);
  const Eigen::Index d = samples.empty() ? 0 : samples.front().q.size();
  out << 't';
  for (Eigen::Index j = 0; j < d; ++j) out << ",q" << j;
  for (Eigen::Index j = 0; j < d; ++j) out << ",dq" << j;
  out << '\n';
  for (const CommandSample& s : samples) {
    out << s.t;
    for (Eigen::Index j = 0; j < d; ++j) out << ',' << s.q[j];
    for (Eigen::Index j = 0; j < d; ++j) out << ',' << s.q_dot[j];
    out << '\n';
  }
}

std::vector<CommandSample> read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, path.string() + ": empty file", 1);
  const long columns = std::count(line.begin(), line.end(), ',') + 1;
  if (columns < 3 || columns % 2 == 0) {
    throw Error(ErrorCode::ParseError, path.string() + ": header must be t, q..., dq...", 1);
  }
  const int d = static_cast<int>((columns - 1) / 2);
  std::vector<CommandSample> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<double> v = split_numbers(line, line_no, path.string());
    if (static_cast<long>(v.size()) != columns) {
      throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": wrong column count",
                  line_no);
    }
    CommandSample s;
    s.t = v[0];
    s.q = Eigen::Map<const Vec>(v.data() + 1, d);
    s.q_dot = Eigen::Map<const Vec>(v.data() + 1 + d, d);
    out.push_back(std::move(s));
  }
  return out;
}

void write_anchors_csv(const std::filesystem::path& path, const AnchorSequence& anchors) {
  std::ofstream out = open_out(path);
  const Eigen::Index d = anchors.states.empty() ? 0 : anchors.states.front().size();
  out << "index";
  for (Eigen::Index j = 0; j < d; ++j) out << ",q" << j;
  out << '\n';
  for (std::size_t i = 0; i < anchors.states.size(); ++i) {
    out << i;
    for (Eigen::Index j = 0; j < d; ++j) out << ',' << anchors.states[i][j];
    out << '\n';
  }
}

AnchorSequence read_anchors_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  AnchorSequence seq;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<double> v = split_numbers(line, line_no, path.string());
    if (v.size() < 2) throw Error(ErrorCode::ParseError, path.string() + ": short row", line_no);
    seq.states.push_back(Eigen::Map<const Vec>(v.data() + 1, static_cast<Eigen::Index>(v.size() - 1)));
  }
  return seq;
}

void write_path_csv(const std::filesystem::path& path, const ReferencePath& ref) {
  std::ofstream out = open_out(path);
  out << "x,y\n";
  for (const Vec2& p : ref.waypoints) out << p.x() << ',' << p.y() << '\n';
}

void write_stats_csv(const std::filesystem::path& path, const std::vector<ArmStats>& stats) {
  std::ofstream out = open_out(path);
  out << "arm,trials,successes,success_rate,time_mean,time_std,root_length_mean,root_length_std,"
         "generalized_length_mean,generalized_length_std\n";
  for (const ArmStats& s : stats) {
    out << to_string(s.arm) << ',' << s.trials << ',' << s.successes << ',' << s.success_rate << ',' << s.time_mean
        << ',' << s.time_std << ',' << s.root_mean << ',' << s.root_std << ',' << s.generalized_mean << ','
        << s.generalized_std << '\n';
  }
}

void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialRecord>& trials) {
  std::ofstream out = open_out(path);
  out << "arm,trial,start_x,success,failure,time,anchors,root_length,generalized_length,max_speed_ratio,"
         "min_tau,min_clearance\n";
  for (const TrialRecord& t : trials) {
    out << to_string(t.arm) << ',' << t.trial << ',' << t.start_x << ',' << (t.success ? 1 : 0) << ','
        << t.failure << ',' << t.time << ',' << t.anchors << ',' << t.lengths.root << ','
        << t.lengths.generalized << ',' << t.max_speed_ratio << ',' << t.min_tau << ',' << t.min_clearance << '\n';
  }
}

std::string plan_report_json(const PlanResult& result) {
  using nlohmann::json;
  json j;
  j["wall_time"] = result.wall_time;
  j["anchors"] = result.anchors.states.size();
  j["duration"] = result.trajectory.duration();
  json segs = json::array();
  for (const SolveReport& r : result.reports) {
    segs.push_back({{"iterations", r.iterations},
                    {"evaluations", r.evaluations},
                    {"termination", to_string(r.termination)},
                    {"energy", r.energy},
                    {"collision", r.collision},
                    {"controllability", r.controllability},
                    {"max_velocity_residual", r.max_velocity_residual},
                    {"max_bound_violation", r.max_bound_violation},
                    {"wall_time", r.wall_time},
                    {"samples", r.samples},
                    {"objective_history", r.objective_history},
                    {"best_history", r.best_history}});
  }
  j["segments"] = segs;
  const ValidationReport& v = result.validation;
  const auto finite_or_null = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  j["validation"] = {{"success", v.success},
                     {"min_distance", finite_or_null(v.min_distance)},
                     {"min_clearance", finite_or_null(v.min_clearance)},
                     {"min_tau", finite_or_null(v.min_tau)},
                     {"max_speed_ratio", v.max_speed_ratio},
                     {"collision_samples", v.collision_samples},
                     {"controllability_samples", v.controllability_samples},
                     {"velocity_samples", v.velocity_samples},
                     {"joint_range_samples", v.joint_range_samples},
                     {"samples", v.samples},
                     {"first_violation", to_string(v.first_kind)},
                     {"first_violation_time", v.first_time}};
  return j.dump(2);
}

std::string render_svg(const RobotModel& model, const SvgContent& content) {
  Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  auto grow = [&](const Vec2& p, double pad) {
    lo = lo.cwiseMin(p - Vec2::Constant(pad));
    hi = hi.cwiseMax(p + Vec2::Constant(pad));
  };
  if (content.grid) {
    const EsdfGrid& g = *content.grid;
    grow(g.origin(), 0.0);
    grow(g.origin() + g.resolution() * Vec2(g.nx(), g.ny()), 0.0);
  }
  auto all_configs = content.anchors;
  all_configs.insert(all_configs.end(), content.snapshots.begin(), content.snapshots.end());
  for (const Configuration& q : all_configs) {
    for (const LinkFrame& f : fk_link_frames(model, q)) grow(f.origin, model.link_length + model.propeller_radius);
  }
  if (content.path) {
    for (const Vec2& p : content.path->waypoints) grow(p, 0.1);
  }
  if (!std::isfinite(lo.x())) {
    lo = Vec2(-1.0, -1.0);
    hi = Vec2(1.0, 1.0);
  }
  const double scale = 100.0;  // px per m
  const Vec2 size = (hi - lo) * scale;
  auto px = [&](const Vec2& p) { return Vec2((p.x() - lo.x()) * scale, (hi.y() - p.y()) * scale); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(size.x()) << "\" height=\"" << fmt(size.y())
      << "\" viewBox=\"0 0 " << fmt(size.x()) << ' ' << fmt(size.y()) << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt(size.x()) << "\" height=\"" << fmt(size.y())
      << "\" fill=\"white\"/>\n";
  if (content.grid) {
    const EsdfGrid& g = *content.grid;
    svg << "<g id=\"obstacles\" fill=\"#555555\">\n";
    const double cell = g.resolution() * scale;
    for (int iy = 0; iy < g.ny(); ++iy) {
      for (int ix = 0; ix < g.nx(); ++ix) {
        if (g.at(ix, iy) > 0.0) continue;
        const Vec2 corner = px(g.origin() + g.resolution() * Vec2(ix, iy + 1));
        svg << "<rect x=\"" << fmt(corner.x()) << "\" y=\"" << fmt(corner.y()) << "\" width=\"" << fmt(cell)
            << "\" height=\"" << fmt(cell) << "\"/>\n";
      }
    }
    svg << "</g>\n";
  }
  if (content.path && !content.path->waypoints.empty()) {
    svg << "<polyline id=\"reference\" fill=\"none\" stroke=\"#2a7fff\" stroke-width=\"2\" points=\"";
    for (const Vec2& p : content.path->waypoints) {
      const Vec2 s = px(p);
      svg << fmt(s.x()) << ',' << fmt(s.y()) << ' ';
    }
    svg << "\"/>\n";
  }
  auto draw_robot = [&](const Configuration& q, const char* stroke, const char* cls) {
    const std::vector<LinkFrame> frames = fk_link_frames(model, q);
    svg << "<g class=\"" << cls << "\">\n";
    for (const LinkFrame& f : frames) {
      const Vec2 a = px(f.origin);
      const Vec2 b = px(f.origin + model.link_length * Vec2(std::cos(f.heading), std::sin(f.heading)));
      svg << "<line x1=\"" << fmt(a.x()) << "\" y1=\"" << fmt(a.y()) << "\" x2=\"" << fmt(b.x()) << "\" y2=\""
          << fmt(b.y()) << "\" stroke=\"" << stroke << "\" stroke-width=\"3\"/>\n";
    }
    for (const Vec3& r : rotor_positions(model, q)) {
      const Vec2 c = px(r.head<2>());
      svg << "<circle cx=\"" << fmt(c.x()) << "\" cy=\"" << fmt(c.y()) << "\" r=\""
          << fmt(model.propeller_radius * scale) << "\" fill=\"none\" stroke=\"" << stroke << "\"/>\n";
    }
    svg << "</g>\n";
  };
  for (const Configuration& q : content.snapshots) draw_robot(q, "#999999", "snapshot");
  for (const Configuration& q : content.anchors) draw_robot(q, "#d62728", "anchor");
  svg << "</svg>\n";
  return svg.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text;
}

}  // namespace fbplan
