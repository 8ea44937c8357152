#include "fbplan/local_opt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "fbplan/kernels.hpp"
#include "fbplan/qp.hpp"
#include "fbplan/torque_polytope.hpp"

namespace fbplan {

namespace {

using Clock = std::chrono::steady_clock;

// Column-major vec of an N x D block: index j * N + r.
Vec vec_of(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

Mat unvec(const Vec& v, int rows, int cols) { return Eigen::Map<const Mat>(v.data(), rows, cols); }

Mat straight_free_rows(const BoundaryRows& b, int n_free) {
  Mat rows(n_free, b.c0.size());
  for (int r = 0; r < n_free; ++r) {
    const double s = static_cast<double>(r + 1) / static_cast<double>(n_free + 1);
    rows.row(r) = (b.c1 + s * (b.c_end_minus1 - b.c1)).transpose();
  }
  return rows;
}

}  // namespace

void PlannerParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be > 0");
  };
  positive(alpha_v, "alpha_v");
  positive(alpha_K, "alpha_K");
  positive(v_max, "v_max");
  positive(omega_max, "omega_max");
  positive(delta_collision, "delta_collision");
  positive(delta_tau, "delta_tau");
  positive(f_tol, "f_tol");
  positive(time_budget, "time_budget");
  positive(constraint_penalty, "constraint_penalty");
  if (!(collision_weight >= 1.0)) throw Error(ErrorCode::InvalidArgument, "collision_weight must be >= 1");
  if (!(collision_margin >= 0.0)) throw Error(ErrorCode::InvalidArgument, "collision_margin must be >= 0");
  if (!(controllability_margin >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "controllability_margin must be >= 0");
  }
  if (n_free < 1) throw Error(ErrorCode::InvalidArgument, "n_free must be >= 1");
  if (degree < 1 || degree > n_free + 3) throw Error(ErrorCode::InvalidArgument, "degree out of range");
  if (max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::SmallStep: return "small_step";
    case Termination::MaxIterations: return "max_iterations";
    case Termination::TimeBudget: return "time_budget";
    case Termination::Stalled: return "stalled";
    case Termination::Trivial: return "trivial";
  }
  return "unknown";
}

SegmentDuration segment_duration(const Configuration& q_init, const Configuration& q_target, double alpha_v) {
  if (!(alpha_v > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha_v must be > 0");
  const double dist = (q_target - q_init).norm();
  if (dist < kTrivialSegmentNorm) return {kTrivialSegmentDuration, true};
  return {dist / alpha_v, false};
}

BoundaryRows boundary_rows(const Configuration& q_init, const Vec& v_init, const Configuration& q_target,
                           const Vec& v_target, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "knot interval must be > 0");
  return {q_init, q_init + v_init * h, q_target - v_target * h, q_target};
}

Mat assemble_control_points(const BoundaryRows& rows, const Mat& free_rows) {
  const Eigen::Index n = free_rows.rows();
  const Eigen::Index d = rows.c0.size();
  if (free_rows.cols() != d) throw Error(ErrorCode::InvalidArgument, "free rows do not match dimension");
  Mat c(n + 4, d);
  c.row(0) = rows.c0.transpose();
  c.row(1) = rows.c1.transpose();
  c.middleRows(kFirstFreeRow, n) = free_rows;
  c.row(n + 2) = rows.c_end_minus1.transpose();
  c.row(n + 3) = rows.c_end.transpose();
  return c;
}

ValueGrad energy_and_grad(const Mat& c_full, const Mat& energy) {
  const Mat mc = energy * c_full;
  ValueGrad out;
  out.value = (c_full.transpose() * mc).trace();
  out.grad = 2.0 * mc.middleRows(kFirstFreeRow, c_full.rows() - 4);
  return out;
}

Vec velocity_limits(const RobotModel& model, const PlannerParams& params) {
  Vec nu = Vec::Constant(model.dim(), params.omega_max);
  nu[0] = params.v_max;
  nu[1] = params.v_max;
  return nu;
}

Mat velocity_difference_matrix(const Vec& knots, int degree, VelocityRule rule) {
  const int n_ctrl = control_count(knots, degree);
  Mat a = Mat::Zero(n_ctrl - 1, n_ctrl);
  const double h = knots[degree + 1] - knots[degree];
  for (int i = 0; i + 1 < n_ctrl; ++i) {
    const double scale = rule == VelocityRule::Uniform ? 1.0 / h : degree / (knots[i + degree + 1] - knots[i + 1]);
    a(i, i) = -scale;
    a(i, i + 1) = scale;
  }
  return a;
}

VelocityConstraints velocity_constraints_and_jac(const Mat& c_full, const Mat& difference, const Vec& limits) {
  const Eigen::Index n_rows = difference.rows();
  const Eigen::Index d = c_full.cols();
  const Eigen::Index n_free = c_full.rows() - 4;
  if (limits.size() != d) throw Error(ErrorCode::InvalidArgument, "velocity limits do not match dimension");
  const Mat g = difference * c_full;
  const Eigen::Index half = n_rows * d;
  VelocityConstraints out;
  out.residual.resize(2 * half);
  out.jacobian = Mat::Zero(2 * half, n_free * d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < n_rows; ++i) {
      const Eigen::Index k = j * n_rows + i;
      out.residual[k] = g(i, j) - limits[j];
      out.residual[half + k] = -g(i, j) - limits[j];
      for (Eigen::Index r = 0; r < n_free; ++r) {
        const double a = difference(i, kFirstFreeRow + r);
        out.jacobian(k, j * n_free + r) = a;
        out.jacobian(half + k, j * n_free + r) = -a;
      }
    }
  }
  return out;
}

SegmentProblem::SegmentProblem(const RobotModel& model, const DistanceField& field, const PlannerParams& params,
                               const Configuration& q_init, const Vec& v_init, const Configuration& q_target,
                               const Vec& v_target)
    : model_(model), field_(field), params_(params) {
  params_.validate();
  check_configuration(model, q_init);
  check_configuration(model, q_target);
  const SegmentDuration sd = segment_duration(q_init, q_target, params.alpha_v);
  duration_ = sd.duration;
  h_ = duration_ / (params.n_free + 4 - params.degree);
  knots_ = knot_vector(params.n_free, params.degree, duration_);
  energy_ = energy_matrix(params.n_free, params.degree, duration_);
  boundary_ = boundary_rows(q_init, v_init, q_target, v_target, h_);
  const int k = std::max(1, static_cast<int>(std::ceil(params.alpha_K * (q_target - q_init).norm())));
  sample_times_.resize(k);
  sample_basis_.resize(k, params.n_free + 4);
  for (int n = 1; n <= k; ++n) {
    const double t = n == k ? duration_ : duration_ * n / k;
    sample_times_[n - 1] = t;
    sample_basis_.row(n - 1) = basis_row(knots_, params.degree, t).transpose();
  }
}

double SegmentProblem::penalty_delta(PenaltyKind kind) const {
  return kind == PenaltyKind::Collision
             ? model_.propeller_radius + params_.delta_collision + params_.collision_margin
             : params_.delta_tau + params_.controllability_margin;
}

double SegmentProblem::penalty(PenaltyKind kind, const Mat& c_full, Mat* grad, Mat* gauss_newton) const {
  if (grad) grad->setZero(n_free(), dim());
  if (gauss_newton) gauss_newton->setZero(n_vars(), n_vars());
  return kind == PenaltyKind::Collision ? collision_penalty(c_full, grad, gauss_newton)
                                        : controllability_penalty(c_full, grad);
}

double SegmentProblem::collision_penalty(const Mat& c_full, Mat* grad, Mat* gn) const {
  const int k = n_samples();
  const int nr = model_.n_rotors();
  const int nf = n_free();
  const int d = dim();
  const bool need_jac = grad || gn;
  const std::size_t total = static_cast<std::size_t>(k) * nr;
  std::vector<double> xs(total), ys(total), dist(total), gx(total), gy(total), phi(total), dphi(total);
  std::vector<std::uint8_t> oob(total);
  std::vector<KinematicState> states(k);
  const Mat q_samples = sample_basis_ * c_full;  // K x D
  for (int n = 0; n < k; ++n) {
    states[n] = compute_kinematics(model_, q_samples.row(n).transpose(), need_jac);
    for (int i = 0; i < nr; ++i) {
      xs[n * nr + i] = states[n].rotor_world[i].x();
      ys[n * nr + i] = states[n].rotor_world[i].y();
    }
  }
  field_.query_batch(xs.data(), ys.data(), total, dist.data(), gx.data(), gy.data(), oob.data());
  const double delta = penalty_delta(PenaltyKind::Collision);
  kernels::hinge_penalty(dist.data(), total, delta, phi.data(), dphi.data());

  double value = 0.0;
  for (std::size_t s = 0; s < total; ++s) value += phi[s];
  if (!need_jac) return value;

  for (int n = 0; n < k; ++n) {
    const Vec b = sample_basis_.row(n).segment(kFirstFreeRow, nf).transpose();
    if (b.isZero(0.0)) continue;
    for (int i = 0; i < nr; ++i) {
      const std::size_t s = static_cast<std::size_t>(n) * nr + i;
      if (dphi[s] == 0.0) continue;
      const Vec g = states[n].rotor_jac[i].transpose() * Vec2(gx[s], gy[s]);  // d distance / d q
      if (grad) grad->noalias() += dphi[s] * b * g.transpose();
      if (gn) {
        const Vec kron = Eigen::Map<const Vec>(Mat(b * g.transpose()).data(), nf * d);
        gn->noalias() += (1.0 / delta) * kron * kron.transpose();
      }
    }
  }
  return value;
}

double SegmentProblem::controllability_penalty(const Mat& c_full, Mat* grad) const {
  const int k = n_samples();
  const int nr = model_.n_rotors();
  const int nf = n_free();
  const double delta = penalty_delta(PenaltyKind::Controllability);
  const Mat q_samples = sample_basis_ * c_full;
  const int n_pairs = nr * (nr - 1);
  std::vector<double> faces(n_pairs), phi(n_pairs), dphi(n_pairs);
  std::vector<std::uint8_t> degenerate(n_pairs);
  double value = 0.0;
  for (int n = 0; n < k; ++n) {
    const Configuration q = q_samples.row(n).transpose();
    const TorqueSet taus = rotor_torques(model_, q);
    int p = 0;
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nr; ++j) {
        if (i == j) continue;
        const auto f = face_distance(taus, i, j);
        degenerate[p] = f ? 0 : 1;
        // A degenerate face counts as distance 0 with no gradient.
        faces[p] = f ? *f : 0.0;
        ++p;
      }
    }
    kernels::hinge_penalty(faces.data(), n_pairs, delta, phi.data(), dphi.data());
    bool any_active = false;
    for (int s = 0; s < n_pairs; ++s) {
      value += phi[s];
      if (dphi[s] != 0.0 && !degenerate[s]) any_active = true;
    }
    if (!grad || !any_active) continue;
    const Vec b = sample_basis_.row(n).segment(kFirstFreeRow, nf).transpose();
    if (b.isZero(0.0)) continue;
    const TorqueJacobians tj = rotor_torque_jacobians(model_, q);
    p = 0;
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nr; ++j) {
        if (i == j) continue;
        if (dphi[p] != 0.0 && !degenerate[p]) {
          Vec g;
          if (face_distance_and_gradient(tj, i, j, &g)) grad->noalias() += dphi[p] * b * g.transpose();
        }
        ++p;
      }
    }
  }
  return value;
}

namespace {

struct Evaluation {
  double energy = 0.0;
  double collision = 0.0;
  double ctrl = 0.0;
  double objective = 0.0;  // energy + w_c * collision
  double merit = 0.0;      // objective + rho * ctrl
  Vec grad_objective;
  Vec grad_ctrl;
  Mat hessian;  // energy Hessian + Gauss-Newton collision term
};

Evaluation evaluate(const SegmentProblem& prob, const Mat& free_rows, bool with_derivatives) {
  const PlannerParams& params = prob.params();
  const Mat c_full = prob.assemble(free_rows);
  Evaluation ev;
  const ValueGrad e = energy_and_grad(c_full, prob.energy());
  ev.energy = e.value;
  Mat g_coll, gn_coll, g_ctrl;
  ev.collision = prob.penalty(PenaltyKind::Collision, c_full, with_derivatives ? &g_coll : nullptr,
                              with_derivatives ? &gn_coll : nullptr);
  ev.ctrl = prob.penalty(PenaltyKind::Controllability, c_full, with_derivatives ? &g_ctrl : nullptr, nullptr);
  ev.objective = ev.energy + params.collision_weight * ev.collision;
  ev.merit = ev.objective + params.constraint_penalty * ev.ctrl;
  if (with_derivatives) {
    ev.grad_objective = vec_of(e.grad) + params.collision_weight * vec_of(g_coll);
    ev.grad_ctrl = vec_of(g_ctrl);
    const int nf = prob.n_free();
    const int d = prob.dim();
    ev.hessian = params.collision_weight * gn_coll;
    const Mat m_ff = 2.0 * prob.energy().block(kFirstFreeRow, kFirstFreeRow, nf, nf);
    for (int j = 0; j < d; ++j) ev.hessian.block(j * nf, j * nf, nf, nf) += m_ff;
  }
  return ev;
}

// Linear constraints on the free variables: rows L x <= u.
struct LinearSet {
  Mat rows;
  Vec upper;
};

LinearSet linear_constraints(const SegmentProblem& prob, const Mat& difference, const Vec& limits) {
  const RobotModel& model = prob.model();
  const int nf = prob.n_free();
  const int d = prob.dim();
  // Affine map x -> velocity residual: residual(x) = J x + r0.
  const Mat c_zero = prob.assemble(Mat::Zero(nf, d));
  const VelocityConstraints vc = velocity_constraints_and_jac(c_zero, difference, limits);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < vc.jacobian.rows(); ++i) {
    if (!vc.jacobian.row(i).isZero(0.0)) keep.push_back(i);
  }
  const int n_joint_vars = model.n_joints * nf;
  LinearSet set;
  set.rows = Mat::Zero(static_cast<Eigen::Index>(keep.size()) + 2 * n_joint_vars, nf * d);
  set.upper.resize(set.rows.rows());
  Eigen::Index row = 0;
  for (Eigen::Index i : keep) {
    set.rows.row(row) = vc.jacobian.row(i);
    set.upper[row] = -vc.residual[i];
    ++row;
  }
  for (int j = kFirstJointIndex; j < d; ++j) {
    for (int r = 0; r < nf; ++r) {
      set.rows(row, j * nf + r) = 1.0;
      set.upper[row++] = model.theta_max;
      set.rows(row, j * nf + r) = -1.0;
      set.upper[row++] = -model.theta_min;
    }
  }
  return set;
}

// Largest s in [0, 1] keeping from + s (to - from) inside the linear set.
double feasible_fraction(const LinearSet& set, const Vec& from, const Vec& to) {
  const Vec a0 = set.rows * from;
  const Vec step = set.rows * (to - from);
  double s = 1.0;
  for (Eigen::Index i = 0; i < step.size(); ++i) {
    if (step[i] > 0.0) s = std::min(s, std::max(0.0, set.upper[i] - a0[i]) / step[i]);
  }
  return s;
}

double max_violation(const LinearSet& set, const Vec& x) {
  if (set.rows.rows() == 0) return 0.0;
  return (set.rows * x - set.upper).maxCoeff();
}

void clamp_joints(Mat& free_rows, const RobotModel& model) {
  for (int j = kFirstJointIndex; j < free_rows.cols(); ++j) {
    free_rows.col(j) = free_rows.col(j).cwiseMax(model.theta_min).cwiseMin(model.theta_max);
  }
}

}  // namespace

SegmentResult optimize_segment(const Configuration& q_init, const Vec& v_init, const Configuration& q_target,
                               const Vec& v_target, const RobotModel& model, const DistanceField& field,
                               const PlannerParams& params) {
  const auto t0 = Clock::now();
  params.validate();
  check_configuration(model, q_init);
  check_configuration(model, q_target);
  const SegmentDuration sd = segment_duration(q_init, q_target, params.alpha_v);
  if (sd.trivial) {
    SegmentResult out;
    Mat c = q_init.transpose().replicate(params.n_free + 4, 1);
    out.segment = SplineSegment(params.degree, sd.duration, std::move(c));
    out.report.termination = Termination::Trivial;
    out.report.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
    return out;
  }

  const SegmentProblem prob(model, field, params, q_init, v_init, q_target, v_target);
  const int nf = prob.n_free();
  const int d = prob.dim();
  const int nv = prob.n_vars();
  const Vec limits = velocity_limits(model, params);
  const Mat difference = velocity_difference_matrix(prob.knots(), params.degree, VelocityRule::Exact);
  const LinearSet lin = linear_constraints(prob, difference, limits);

  SolveReport report;
  report.samples = prob.n_samples();

  // Start on the straight line and move toward the minimum-energy rows as far
  // as the linear constraints allow.
  const Vec x_line = vec_of(straight_free_rows(prob.boundary(), nf));
  const MinEnergyResult me = min_energy_init(prob.assemble(Mat::Zero(nf, d)), prob.energy());
  report.init_fallback = me.fallback;
  if (max_violation(lin, x_line) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "straight-line initialization violates the velocity or joint limits");
  }
  const Vec x_energy = vec_of(me.free_rows);
  Vec x = x_line + feasible_fraction(lin, x_line, x_energy) * (x_energy - x_line);

  auto check_finite = [&](const Evaluation& ev) {
    if (!std::isfinite(ev.merit)) {
      throw Error(ErrorCode::SolverDiverged, "objective became non-finite", report.iterations);
    }
  };
  Evaluation ev = evaluate(prob, unvec(x, nf, d), true);
  ++report.evaluations;
  check_finite(ev);
  report.objective_history.push_back(ev.merit);
  report.best_history.push_back(ev.merit);

  const double rho = params.constraint_penalty;
  constexpr double kSlackCurvature = 1e-3;
  double mu = 1e-3 * std::max(1e-12, ev.hessian.diagonal().maxCoeff());
  int small_changes = 0;
  report.termination = Termination::MaxIterations;

  for (int it = 0; it < params.max_iterations; ++it) {
    report.iterations = it + 1;
    if (!params.deterministic &&
        std::chrono::duration<double>(Clock::now() - t0).count() > params.time_budget) {
      report.termination = Termination::TimeBudget;
      break;
    }

    const bool elastic = ev.grad_ctrl.lpNorm<Eigen::Infinity>() > 0.0;
    const int nz = nv + (elastic ? 1 : 0);
    QpProblem qp;
    qp.G = Mat::Zero(nz, nz);
    qp.G.topLeftCorner(nv, nv) = ev.hessian;
    qp.G.topLeftCorner(nv, nv).diagonal().array() += mu;
    qp.g = Vec::Zero(nz);
    qp.g.head(nv) = ev.grad_objective;
    const Eigen::Index m_lin = lin.rows.rows();
    qp.A = Mat::Zero(m_lin + (elastic ? 2 : 0), nz);
    qp.b.resize(qp.A.rows());
    qp.A.topLeftCorner(m_lin, nv) = lin.rows;
    qp.b.head(m_lin) = (lin.upper - lin.rows * x).cwiseMax(0.0);
    Vec z0 = Vec::Zero(nz);
    if (elastic) {
      qp.G(nv, nv) = kSlackCurvature;
      qp.g[nv] = rho;
      qp.A.block(m_lin, 0, 1, nv) = ev.grad_ctrl.transpose();
      qp.A(m_lin, nv) = -1.0;
      qp.b[m_lin] = -ev.ctrl;
      qp.A(m_lin + 1, nv) = -1.0;
      qp.b[m_lin + 1] = 0.0;
      z0[nv] = ev.ctrl;
    }
    const QpResult sol = solve_qp(qp, z0);
    if (sol.status == QpStatus::IterationLimit) ++report.qp_iteration_limit_hits;
    const Vec step = sol.z.head(nv);
    const double sigma = elastic ? sol.z[nv] : ev.ctrl;

    const double pred = -(ev.grad_objective.dot(step) + 0.5 * step.dot(ev.hessian * step)) + rho * (ev.ctrl - sigma);
    if (!(pred > 1e-12 * (1.0 + std::abs(ev.merit)))) {
      report.termination = Termination::SmallStep;
      break;
    }

    Mat trial_rows = unvec(x + step, nf, d);
    clamp_joints(trial_rows, model);
    Evaluation trial = evaluate(prob, trial_rows, true);
    ++report.evaluations;
    check_finite(trial);
    const double ared = ev.merit - trial.merit;
    const double ratio = ared / pred;
    if (ratio > 1e-4) {
      const double rel = ared / std::max(std::abs(ev.merit), 1e-12);
      x = vec_of(trial_rows);
      ev = std::move(trial);
      report.objective_history.push_back(ev.merit);
      report.best_history.push_back(std::min(report.best_history.back(), ev.merit));
      if (ratio > 0.75) {
        mu /= 3.0;
      } else if (ratio < 0.25) {
        mu *= 2.0;
      }
      small_changes = rel < params.f_tol ? small_changes + 1 : 0;
      if (small_changes >= 2) {
        report.termination = Termination::Converged;
        break;
      }
    } else {
      mu *= 4.0;
    }
    if (mu > 1e12) {
      report.termination = Termination::Stalled;
      break;
    }
  }

  const Mat c_full = prob.assemble(unvec(x, nf, d));
  const VelocityConstraints vc = velocity_constraints_and_jac(c_full, difference, limits);
  report.max_velocity_residual = vc.residual.maxCoeff();
  double bound_violation = 0.0;
  for (int j = kFirstJointIndex; j < d; ++j) {
    for (Eigen::Index r = 0; r < c_full.rows(); ++r) {
      bound_violation = std::max({bound_violation, c_full(r, j) - model.theta_max, model.theta_min - c_full(r, j)});
    }
  }
  report.max_bound_violation = bound_violation;
  report.energy = ev.energy;
  report.collision = ev.collision;
  report.controllability = ev.ctrl;
  report.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
  return {SplineSegment(params.degree, prob.duration(), c_full), report};
}

SegmentResult straight_segment(const Configuration& q_init, const Configuration& q_target,
                               const RobotModel& model, const PlannerParams& params) {
  params.validate();
  check_configuration(model, q_init);
  check_configuration(model, q_target);
  const SegmentDuration sd = segment_duration(q_init, q_target, params.alpha_v);
  const Vec zero = Vec::Zero(model.dim());
  const double h = sd.duration / (params.n_free + 4 - params.degree);
  const BoundaryRows rows = boundary_rows(q_init, zero, q_target, zero, h);
  SegmentResult out;
  out.segment = SplineSegment(params.degree, sd.duration,
                              assemble_control_points(rows, straight_free_rows(rows, params.n_free)));
  out.report.termination = sd.trivial ? Termination::Trivial : Termination::Converged;
  return out;
}

}  // namespace fbplan
