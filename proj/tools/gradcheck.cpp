#include "gradcheck.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "fbplan/local_opt.hpp"
#include "fbplan/spline.hpp"
#include "fbplan/torque_polytope.hpp"

namespace fbplan::tools {

namespace {

constexpr double kStep = 1e-6;
constexpr double kTolerance = 1e-5;

/// Distance to a disc; smooth away from the centre.
class DiscField final : public DistanceField {
 public:
  DiscField(Vec2 center, double radius) : center_(center), radius_(radius) {}
  DistanceQuery query(const Vec2& p) const override {
    const Vec2 r = p - center_;
    const double n = r.norm();
    return {n - radius_, r / n, false};
  }

 private:
  Vec2 center_;
  double radius_;
};

/// Relative error max|g - fd| / max(1, max|fd|).
double compare(const Vec& analytic, const std::function<double(const Vec&)>& f, const Vec& x) {
  Vec fd(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec xp = x, xm = x;
    xp[k] += kStep;
    xm[k] -= kStep;
    fd[k] = (f(xp) - f(xm)) / (2.0 * kStep);
  }
  return (analytic - fd).cwiseAbs().maxCoeff() / std::max(1.0, fd.cwiseAbs().maxCoeff());
}

bool report(std::ostream& out, const char* name, double err) {
  const bool ok = err < kTolerance;
  char line[128];
  std::snprintf(line, sizeof line, "%-28s rel_err=%.3e %s\n", name, err, ok ? "ok" : "FAIL");
  out << line;
  return ok;
}

Vec flatten(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

bool check_spline(std::ostream& out) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  const int n_free = 5, degree = 3, dim = 6;
  const Mat energy = energy_matrix(n_free, degree, 2.5);
  const Mat c = Mat::NullaryExpr(energy.rows(), dim, [&] { return n01(rng); });
  const ValueGrad vg = energy_and_grad(c, energy);
  const Mat free_rows = c.middleRows(kFirstFreeRow, n_free);
  const auto f = [&](const Vec& x) {
    Mat cx = c;
    cx.middleRows(kFirstFreeRow, n_free) = Eigen::Map<const Mat>(x.data(), n_free, dim);
    return energy_and_grad(cx, energy).value;
  };
  bool ok = report(out, "spline energy", compare(flatten(vg.grad), f, flatten(free_rows)));

  const Mat difference = velocity_difference_matrix(knot_vector(n_free, degree, 2.5), degree, VelocityRule::Exact);
  const Vec limits = Vec::Constant(dim, 0.5);
  const Mat jac = velocity_constraints_and_jac(c, difference, limits).jacobian;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < jac.rows(); ++k) {
    const auto fk = [&](const Vec& x) {
      Mat cx = c;
      cx.middleRows(kFirstFreeRow, n_free) = Eigen::Map<const Mat>(x.data(), n_free, dim);
      return velocity_constraints_and_jac(cx, difference, limits).residual[k];
    };
    worst = std::max(worst, compare(jac.row(k).transpose(), fk, flatten(free_rows)));
  }
  ok = report(out, "velocity jacobian", worst) && ok;
  return ok;
}

bool check_penalty(std::ostream& out) {
  const RobotModel model;
  PlannerParams params;
  params.delta_tau = 20.0;  // large enough that the controllability hinge is active
  const DiscField field(Vec2(0.6, 0.9), 0.3);
  Configuration q0(model.dim()), q1(model.dim());
  q0 << 0.0, 0.0, 0.1, 0.8, 0.6, 0.4;
  q1 << 1.2, 0.3, 0.3, 0.2, -0.3, 0.5;
  const Vec zero = Vec::Zero(model.dim());
  const SegmentProblem problem(model, field, params, q0, zero, q1, zero);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  Mat free_rows(problem.n_free(), model.dim());
  for (int r = 0; r < problem.n_free(); ++r) {
    const double s = (r + 1.0) / (problem.n_free() + 1.0);
    free_rows.row(r) = ((1.0 - s) * q0 + s * q1).transpose();
  }
  free_rows = free_rows.unaryExpr([&](double v) { return v + jitter(rng); });

  bool ok = true;
  const std::pair<PenaltyKind, const char*> kinds[] = {{PenaltyKind::Collision, "collision penalty"},
                                                        {PenaltyKind::Controllability, "controllability penalty"}};
  for (const auto& [kind, name] : kinds) {
    Mat grad;
    if (problem.penalty(kind, problem.assemble(free_rows), &grad, nullptr) <= 0.0) {
      out << name << ": hinge inactive, nothing to check\n";
      ok = false;
      continue;
    }
    const auto f = [&](const Vec& x) {
      const Mat rows = Eigen::Map<const Mat>(x.data(), free_rows.rows(), free_rows.cols());
      return problem.penalty(kind, problem.assemble(rows), nullptr, nullptr);
    };
    ok = report(out, name, compare(flatten(grad), f, flatten(free_rows))) && ok;
  }
  return ok;
}

bool check_polytope(std::ostream& out) {
  const RobotModel model;
  Configuration q(model.dim());
  q << 0.3, -0.2, 0.4, 0.9, -0.5, 0.7;
  bool ok = true;
  double worst = 0.0;
  for (int i = 0; i < model.n_rotors(); ++i) {
    for (int j = 0; j < model.n_rotors(); ++j) {
      if (i == j) continue;
      if (!face_distance(rotor_torques(model, q), i, j)) continue;
      const Vec g = face_distance_gradient(model, q, i, j);
      const auto f = [&](const Vec& x) { return *face_distance(rotor_torques(model, x), i, j); };
      worst = std::max(worst, compare(g, f, q));
    }
  }
  ok = report(out, "face distance", worst) && ok;
  return ok;
}

}  // namespace

bool run_gradcheck(const std::string& module, std::ostream& out) {
  bool ok = true;
  if (module == "all" || module == "spline") ok = check_spline(out) && ok;
  if (module == "all" || module == "penalty") ok = check_penalty(out) && ok;
  if (module == "all" || module == "polytope") ok = check_polytope(out) && ok;
  return ok;
}

}  // namespace fbplan::tools
