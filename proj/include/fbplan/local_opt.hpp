#pragma once

#include <string>
#include <vector>

#include "fbplan/esdf.hpp"
#include "fbplan/model.hpp"
#include "fbplan/spline.hpp"

namespace fbplan {

struct PlannerParams {
  double alpha_v = 0.3;            // configuration-norm units per second
  double alpha_K = 100.0;          // penalty samples per unit configuration distance
  double v_max = 1.0;              // m/s, per translational axis
  double omega_max = 0.5;          // rad/s, yaw and joints
  double delta_collision = 0.05;   // m
  double delta_tau = 1e-3;         // N m
  double collision_weight = 1000.0;
  double collision_margin = 0.02;  // m added to the penalty threshold only
  double controllability_margin = 0.02;  // N m added to the penalty threshold only
  double f_tol = 1e-3;             // relative merit change
  double time_budget = 10.0;       // s per segment
  int n_free = 5;
  int degree = 3;
  int max_iterations = 200;
  double constraint_penalty = 1000.0;  // exact-penalty weight on the controllability violation
  bool deterministic = false;          // ignore the wall-clock budget

  void validate() const;
};

constexpr double kTrivialSegmentNorm = 1e-9;
constexpr double kTrivialSegmentDuration = 0.1;

struct SegmentDuration {
  double duration = 0.0;
  bool trivial = false;
};

/// T = |q_target - q_init| / alpha_v; trivial (constant, 0.1 s) below 1e-9.
SegmentDuration segment_duration(const Configuration& q_init, const Configuration& q_target, double alpha_v);

/// Fixed rows c_0, c_1, c_{N+2}, c_{N+3} of the control matrix.
struct BoundaryRows {
  Vec c0, c1, c_end_minus1, c_end;
};
BoundaryRows boundary_rows(const Configuration& q_init, const Vec& v_init, const Configuration& q_target,
                           const Vec& v_target, double h);

/// Full (N+4) x D control matrix from boundary rows and N free rows.
Mat assemble_control_points(const BoundaryRows& rows, const Mat& free_rows);

struct ValueGrad {
  double value = 0.0;
  Mat grad;  // N x D, w.r.t. the free rows
};

/// tr(C' M C) and the free rows of 2 M C.
ValueGrad energy_and_grad(const Mat& c_full, const Mat& energy);

/// Per-axis speed limit: v_max on x, y and omega_max on yaw and joints.
Vec velocity_limits(const RobotModel& model, const PlannerParams& params);

enum class VelocityRule {
  Uniform,  // (c_{i+1} - c_i) / h everywhere
  Exact,    // p (c_{i+1} - c_i) / (u_{i+p+1} - u_{i+1}); bounds the true speed
};

/// (N+3) x (N+4) map from control points to derivative control points.
Mat velocity_difference_matrix(const Vec& knots, int degree, VelocityRule rule);

struct VelocityConstraints {
  Vec residual;   // [G - nu; -G - nu], each block column-major over (row, axis)
  Mat jacobian;   // rows as residual, columns over vec(free rows)
};

VelocityConstraints velocity_constraints_and_jac(const Mat& c_full, const Mat& difference, const Vec& limits);

enum class PenaltyKind { Collision, Controllability };

/// Everything fixed for one segment: boundary, sample basis, energy matrix.
class SegmentProblem {
 public:
  SegmentProblem(const RobotModel& model, const DistanceField& field, const PlannerParams& params,
                 const Configuration& q_init, const Vec& v_init, const Configuration& q_target,
                 const Vec& v_target);

  int n_free() const { return params_.n_free; }
  int dim() const { return model_.dim(); }
  int n_vars() const { return n_free() * dim(); }
  double duration() const { return duration_; }
  double h() const { return h_; }
  int n_samples() const { return static_cast<int>(sample_times_.size()); }
  const std::vector<double>& sample_times() const { return sample_times_; }
  const Mat& energy() const { return energy_; }
  const Vec& knots() const { return knots_; }
  const BoundaryRows& boundary() const { return boundary_; }
  const RobotModel& model() const { return model_; }
  const PlannerParams& params() const { return params_; }

  Mat assemble(const Mat& free_rows) const { return assemble_control_points(boundary_, free_rows); }

  /// Threshold of a penalty kind: R_p + delta_collision or delta_tau, plus its margin.
  double penalty_delta(PenaltyKind kind) const;

  /// Sum over samples of the quadratic hinge of each rotor clearance or face
  /// distance. `grad` (N x D) and `gauss_newton` (ND x ND) may be null.
  double penalty(PenaltyKind kind, const Mat& c_full, Mat* grad, Mat* gauss_newton) const;

 private:
  double collision_penalty(const Mat& c_full, Mat* grad, Mat* gn) const;
  double controllability_penalty(const Mat& c_full, Mat* grad) const;

  const RobotModel& model_;
  const DistanceField& field_;
  PlannerParams params_;
  double duration_ = 0.0;
  double h_ = 0.0;
  Vec knots_;
  Mat energy_;
  BoundaryRows boundary_;
  std::vector<double> sample_times_;
  Mat sample_basis_;  // K x (N+4)
};

enum class Termination { Converged, SmallStep, MaxIterations, TimeBudget, Stalled, Trivial };

const char* to_string(Termination t);

struct SolveReport {
  int iterations = 0;
  int evaluations = 0;
  Termination termination = Termination::Converged;
  std::vector<double> objective_history;  // merit of each accepted iterate
  std::vector<double> best_history;       // running minimum of the above
  double energy = 0.0;
  double collision = 0.0;
  double controllability = 0.0;
  double max_velocity_residual = 0.0;  // > 0 means violated
  double max_bound_violation = 0.0;
  double wall_time = 0.0;  // s
  int samples = 0;
  bool init_fallback = false;
  int qp_iteration_limit_hits = 0;
};

struct SegmentResult {
  SplineSegment segment;
  SolveReport report;
};

/// Minimizes energy + w_c * collision penalty subject to joint bounds on the
/// control points, velocity limits on the derivative control points and a
/// zero controllability penalty. Throws SolverDiverged on a non-finite merit.
SegmentResult optimize_segment(const Configuration& q_init, const Vec& v_init, const Configuration& q_target,
                               const Vec& v_target, const RobotModel& model, const DistanceField& field,
                               const PlannerParams& params);

/// Control points on the straight line from q_init to q_target.
SegmentResult straight_segment(const Configuration& q_init, const Configuration& q_target,
                               const RobotModel& model, const PlannerParams& params);

}  // namespace fbplan
