#include "fbplan/planner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

#include "fbplan/torque_polytope.hpp"

namespace fbplan {

const char* to_string(Ablation a) {
  switch (a) {
    case Ablation::Full: return "full";
    case Ablation::NoAnchorStates: return "no_as";
    case Ablation::NoLocalPlanning: return "no_lp";
    case Ablation::NoParallel: return "no_pc";
  }
  return "unknown";
}

std::optional<Ablation> parse_ablation(const std::string& name) {
  if (name == "full") return Ablation::Full;
  if (name == "no_as" || name == "no_anchor_states") return Ablation::NoAnchorStates;
  if (name == "no_lp" || name == "no_local_planning") return Ablation::NoLocalPlanning;
  if (name == "no_pc" || name == "no_parallel") return Ablation::NoParallel;
  return std::nullopt;
}

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::None: return "none";
    case ViolationKind::Collision: return "collision";
    case ViolationKind::Controllability: return "controllability";
    case ViolationKind::Velocity: return "velocity";
    case ViolationKind::JointRange: return "joint_range";
  }
  return "unknown";
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FBPLAN_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void GlobalTrajectory::append(SplineSegment segment) {
  start_times_.push_back(duration_);
  duration_ += segment.duration();
  segments_.push_back(std::move(segment));
}

std::pair<int, double> GlobalTrajectory::locate(double t) const {
  if (segments_.empty()) throw Error(ErrorCode::InvalidArgument, "trajectory is empty");
  if (!(t >= 0.0 && t <= duration_)) {
    throw Error(ErrorCode::OutOfDomain, "t = " + std::to_string(t) + " outside the trajectory");
  }
  const auto it = std::upper_bound(start_times_.begin(), start_times_.end(), t);
  const int s = static_cast<int>(it - start_times_.begin()) - 1;
  const double local = std::clamp(t - start_times_[s], 0.0, segments_[s].duration());
  return {s, local};
}

Vec GlobalTrajectory::evaluate(double t) const {
  const auto [s, local] = locate(t);
  return segments_[s].evaluate(local);
}

Vec GlobalTrajectory::evaluate_velocity(double t) const {
  const auto [s, local] = locate(t);
  return segments_[s].evaluate_velocity(local);
}

namespace {

// Accumulates per-sample checks into a report.
class SampleChecker {
 public:
  SampleChecker(const RobotModel& model, const DistanceField& field, const PlannerParams& params)
      : model_(model),
        field_(field),
        params_(params),
        limits_(velocity_limits(model, params)),
        threshold_(model.propeller_radius + params.delta_collision),
        nr_(model.n_rotors()),
        xs_(nr_), ys_(nr_), dist_(nr_), gx_(nr_), gy_(nr_), oob_(nr_) {
    rep_.max_speed = Vec::Zero(model.dim());
    rep_.min_distance = std::numeric_limits<double>::infinity();
    rep_.min_tau = std::numeric_limits<double>::infinity();
  }

  void check(double t, const Vec& q, const Vec& v, int segment) {
    ++rep_.samples;
    const KinematicState ks = compute_kinematics(model_, q, false);
    for (int i = 0; i < nr_; ++i) {
      xs_[i] = ks.rotor_world[i].x();
      ys_[i] = ks.rotor_world[i].y();
    }
    field_.query_batch(xs_.data(), ys_.data(), nr_, dist_.data(), gx_.data(), gy_.data(), oob_.data());
    const double dmin = *std::min_element(dist_.begin(), dist_.end());
    rep_.min_distance = std::min(rep_.min_distance, dmin);
    if (!(dmin > threshold_)) {
      ++rep_.collision_samples;
      flag(ViolationKind::Collision, t, segment);
    }

    const double tau = tau_min(model_, q);
    rep_.min_tau = std::min(rep_.min_tau, tau);
    if (!(tau > params_.delta_tau)) {
      ++rep_.controllability_samples;
      flag(ViolationKind::Controllability, t, segment);
    }

    bool fast = false;
    for (int j = 0; j < q.size(); ++j) {
      const double a = std::abs(v[j]);
      rep_.max_speed[j] = std::max(rep_.max_speed[j], a);
      rep_.max_speed_ratio = std::max(rep_.max_speed_ratio, a / limits_[j]);
      if (a > limits_[j] + 1e-6) fast = true;
    }
    if (fast) {
      ++rep_.velocity_samples;
      flag(ViolationKind::Velocity, t, segment);
    }

    bool out_of_range = false;
    for (int j = kFirstJointIndex; j < q.size(); ++j) {
      if (q[j] < model_.theta_min - 1e-9 || q[j] > model_.theta_max + 1e-9) out_of_range = true;
    }
    if (out_of_range) {
      ++rep_.joint_range_samples;
      flag(ViolationKind::JointRange, t, segment);
    }
  }

  ValidationReport finish() {
    rep_.min_clearance = rep_.min_distance - threshold_;
    return rep_;
  }

 private:
  void flag(ViolationKind kind, double t, int segment) {
    rep_.success = false;
    if (rep_.first_kind == ViolationKind::None || t < rep_.first_time) {
      rep_.first_kind = kind;
      rep_.first_time = t;
      rep_.first_segment = segment;
    }
  }

  const RobotModel& model_;
  const DistanceField& field_;
  const PlannerParams& params_;
  Vec limits_;
  double threshold_;
  int nr_;
  std::vector<double> xs_, ys_, dist_, gx_, gy_;
  std::vector<std::uint8_t> oob_;
  ValidationReport rep_;
};

}  // namespace

ValidationReport validate(const GlobalTrajectory& traj, const RobotModel& model, const DistanceField& field,
                          const PlannerParams& params) {
  SampleChecker checker(model, field, params);
  for (std::size_t s = 0; s < traj.segments().size(); ++s) {
    const SplineSegment& seg = traj.segments()[s];
    const Mat& c = seg.control_points();
    const double span = (c.row(c.rows() - 1) - c.row(0)).norm();
    const int k = std::max(1, static_cast<int>(std::ceil(params.alpha_K * span)));
    const int n = std::max(4 * k, 1000);
    for (int m = 0; m <= n; ++m) {
      const double local = m == n ? seg.duration() : seg.duration() * m / n;
      checker.check(traj.start_times()[s] + local, seg.evaluate(local), seg.evaluate_velocity(local),
                    static_cast<int>(s));
    }
  }
  return checker.finish();
}

ValidationReport validate_samples(const std::vector<CommandSample>& samples, const RobotModel& model,
                                  const DistanceField& field, const PlannerParams& params) {
  SampleChecker checker(model, field, params);
  for (const CommandSample& s : samples) {
    check_configuration(model, s.q);
    if (s.q_dot.size() != s.q.size()) throw Error(ErrorCode::InvalidArgument, "velocity sample has wrong size");
    checker.check(s.t, s.q, s.q_dot, -1);
  }
  return checker.finish();
}

namespace {

struct SegmentJob {
  Configuration q0;
  Configuration q1;
};

std::vector<SegmentResult> solve_segments(const std::vector<SegmentJob>& jobs, const RobotModel& model,
                                          const DistanceField& field, const PlannerConfig& config, int threads) {
  const std::size_t n = jobs.size();
  std::vector<SegmentResult> results(n);
  std::vector<std::exception_ptr> errors(n);
  const Vec zero = Vec::Zero(model.dim());
  auto run = [&](std::size_t i) {
    try {
      if (config.ablation == Ablation::NoLocalPlanning) {
        results[i] = straight_segment(jobs[i].q0, jobs[i].q1, model, config.local);
      } else {
        results[i] = optimize_segment(jobs[i].q0, zero, jobs[i].q1, zero, model, field, config.local);
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const int workers = std::min<int>(threads, static_cast<int>(n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) run(i);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "segment " + std::to_string(i) + ": " + e.what(), static_cast<long>(i));
    }
  }
  return results;
}

}  // namespace

PlanResult plan(const Configuration& q_init, const Configuration& q_target, const RobotModel& model,
                const EsdfGrid& esdf, const PlannerConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  model.validate();
  config.local.validate();
  config.anchors.validate();
  check_configuration(model, q_init);
  check_configuration(model, q_target);

  PlanResult out;
  if (config.ablation == Ablation::NoAnchorStates) {
    out.anchors.states = {q_init, q_target};
  } else {
    const double clearance = config.guidance_clearance >= 0.0
                                 ? config.guidance_clearance
                                 : model.propeller_radius + config.anchors.delta_collision;
    out.path = plan_reference_path(esdf, q_init.head<2>(), q_target.head<2>(), clearance);
    out.anchors = generate_anchor_states(q_init, q_target, model, esdf, out.path, config.anchors);
  }

  std::vector<SegmentJob> jobs;
  for (std::size_t i = 0; i + 1 < out.anchors.states.size(); ++i) {
    jobs.push_back({out.anchors.states[i], out.anchors.states[i + 1]});
  }
  const int threads = config.ablation == Ablation::NoParallel ? 1 : resolve_threads(config.threads);
  std::vector<SegmentResult> results = solve_segments(jobs, model, esdf, config, threads);
  for (SegmentResult& r : results) {
    out.trajectory.append(std::move(r.segment));
    out.reports.push_back(std::move(r.report));
  }
  out.validation = validate(out.trajectory, model, esdf, config.local);
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::vector<CommandSample> sample_commands(const GlobalTrajectory& traj, double rate) {
  if (!(rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "command rate must be > 0");
  const double total = traj.duration();
  const long n = static_cast<long>(std::floor(total * rate + 1e-9));
  std::vector<CommandSample> out;
  out.reserve(n + 2);
  for (long k = 0; k <= n; ++k) {
    const double t = std::min(static_cast<double>(k) / rate, total);
    out.push_back({t, traj.evaluate(t), traj.evaluate_velocity(t)});
  }
  if (total - out.back().t > 1e-9) out.push_back({total, traj.evaluate(total), traj.evaluate_velocity(total)});
  return out;
}

}  // namespace fbplan
