#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fbplan/anchors.hpp"
#include "fbplan/esdf.hpp"
#include "fbplan/guidance.hpp"
#include "fbplan/local_opt.hpp"

namespace fbplan {

enum class Ablation { Full, NoAnchorStates, NoLocalPlanning, NoParallel };

const char* to_string(Ablation a);
/// Accepts full, no_as / no_anchor_states, no_lp / no_local_planning, no_pc / no_parallel.
std::optional<Ablation> parse_ablation(const std::string& name);

struct PlannerConfig {
  PlannerParams local;
  AnchorParams anchors;
  /// Root clearance for the reference search; negative means R_p + delta_collision.
  double guidance_clearance = -1.0;
  /// Segment worker count; 0 reads FBPLAN_THREADS, then the hardware count.
  int threads = 0;
  Ablation ablation = Ablation::Full;
};

/// Worker count after applying the FBPLAN_THREADS override.
int resolve_threads(int requested);

/// Concatenated segments. Evaluation is right-continuous at junctions.
class GlobalTrajectory {
 public:
  void append(SplineSegment segment);

  const std::vector<SplineSegment>& segments() const { return segments_; }
  const std::vector<double>& start_times() const { return start_times_; }
  double duration() const { return duration_; }
  int dim() const { return segments_.empty() ? 0 : segments_.front().dim(); }

  /// Segment active at t (the later one at a junction) and the local time.
  std::pair<int, double> locate(double t) const;
  Vec evaluate(double t) const;
  Vec evaluate_velocity(double t) const;

 private:
  std::vector<SplineSegment> segments_;
  std::vector<double> start_times_;
  double duration_ = 0.0;
};

enum class ViolationKind { None, Collision, Controllability, Velocity, JointRange };

const char* to_string(ViolationKind k);

struct ValidationReport {
  bool success = true;
  double min_distance = 0.0;    // smallest rotor-centre distance to obstacles (m)
  double min_clearance = 0.0;   // min_distance - (R_p + delta_collision)
  double min_tau = 0.0;         // N m
  Vec max_speed;                // per axis, |q_dot| maximum
  double max_speed_ratio = 0.0; // max over axes of |q_dot| / limit
  int collision_samples = 0;
  int controllability_samples = 0;
  int velocity_samples = 0;
  int joint_range_samples = 0;
  int samples = 0;
  ViolationKind first_kind = ViolationKind::None;
  double first_time = 0.0;  // s, global time of the first violation
  int first_segment = -1;
};

/// Dense post-hoc check at max(4K, 1000) samples per segment, both ends included.
ValidationReport validate(const GlobalTrajectory& traj, const RobotModel& model, const DistanceField& field,
                          const PlannerParams& params);

struct PlanResult {
  ReferencePath path;
  AnchorSequence anchors;
  GlobalTrajectory trajectory;
  std::vector<SolveReport> reports;
  ValidationReport validation;
  double wall_time = 0.0;  // s, reference search through validation
};

/// Reference path, anchors, per-segment optimization (in parallel unless the
/// ablation says otherwise), concatenation and validation. Errors from a
/// segment carry its index as detail.
PlanResult plan(const Configuration& q_init, const Configuration& q_target, const RobotModel& model,
                const EsdfGrid& esdf, const PlannerConfig& config);

struct CommandSample {
  double t = 0.0;
  Vec q;
  Vec q_dot;
};

/// Uniform samples at `rate` Hz from 0; the end time is always included.
std::vector<CommandSample> sample_commands(const GlobalTrajectory& traj, double rate);

/// The same checks as validate() applied to externally supplied samples.
ValidationReport validate_samples(const std::vector<CommandSample>& samples, const RobotModel& model,
                                  const DistanceField& field, const PlannerParams& params);

}  // namespace fbplan
