#include "fbplan/torque_polytope.hpp"

#include <algorithm>
#include <string>

namespace fbplan {

namespace {

void check_pair(int n, int i, int j) {
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw Error(ErrorCode::IndexOutOfRange, "rotor pair index out of range");
  }
  if (i == j) throw Error(ErrorCode::InvalidPair, "face needs two distinct rotors, got " + std::to_string(i) + " twice");
}

}  // namespace

TorqueJacobians rotor_torque_jacobians(const RobotModel& model, const Configuration& q) {
  const std::vector<CogRotor> rotors = cog_frame_quantities(model, q);
  TorqueJacobians out;
  out.taus.reserve(rotors.size());
  out.grads.reserve(rotors.size());
  for (std::size_t i = 0; i < rotors.size(); ++i) {
    const CogRotor& r = rotors[i];
    const double ks = model.drag_coefficient * model.spin_signs[i];
    out.taus.push_back(model.max_thrust * (r.position.cross(r.thrust_axis) + ks * r.thrust_axis));
    out.grads.push_back(model.max_thrust * (-skew(r.thrust_axis) * r.position_jac +
                                            skew(r.position) * r.axis_jac + ks * r.axis_jac));
  }
  return out;
}

TorqueSet rotor_torques(const RobotModel& model, const Configuration& q) {
  check_configuration(model, q);
  const KinematicState ks = compute_kinematics(model, q, false);
  TorqueSet taus;
  taus.reserve(ks.rotor_relative.size());
  const Vec3 e = Vec3::UnitZ();
  for (std::size_t i = 0; i < ks.rotor_relative.size(); ++i) {
    const Vec2 rel = ks.rotor_relative[i] - ks.cog_relative;
    const Vec3 p(rel.x(), rel.y(), 0.0);
    taus.push_back(model.max_thrust * (p.cross(e) + model.drag_coefficient * model.spin_signs[i] * e));
  }
  return taus;
}

std::optional<double> face_distance(const TorqueSet& taus, int i, int j) {
  check_pair(static_cast<int>(taus.size()), i, j);
  const Vec3 cross = taus[i].cross(taus[j]);
  const double norm = cross.norm();
  if (norm < kDegenerateFaceNorm) return std::nullopt;
  const Vec3 normal = cross / norm;
  double d = 0.0;
  for (const Vec3& t : taus) d += std::max(0.0, normal.dot(t));
  return d;
}

int torque_orientation(const TorqueSet& taus) {
  if (taus.size() != 4) return 0;
  Vec3 sum = Vec3::Zero();
  double scale = 0.0;
  for (const Vec3& t : taus) {
    sum += t;
    scale = std::max(scale, t.norm());
  }
  if (sum.norm() > 1e-9 * std::max(1.0, scale)) return 0;
  const double det = taus[0].dot(taus[1].cross(taus[2]));
  return (det > 0.0) - (det < 0.0);
}

int torque_orientation(const RobotModel& model, const Configuration& q) {
  return torque_orientation(rotor_torques(model, q));
}

TauMinResult tau_min_with_normal(const TorqueSet& taus) {
  TauMinResult best;
  bool any = false;
  const int n = static_cast<int>(taus.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto d = face_distance(taus, i, j);
      if (!d) continue;
      if (!any || *d < best.value) {
        any = true;
        best.value = *d;
        best.i = i;
        best.j = j;
        best.normal = taus[i].cross(taus[j]).normalized();
      }
    }
  }
  if (!any) best.value = 0.0;
  return best;
}

double tau_min(const TorqueSet& taus) { return tau_min_with_normal(taus).value; }

double tau_min(const RobotModel& model, const Configuration& q) { return tau_min(rotor_torques(model, q)); }

std::optional<double> face_distance_and_gradient(const TorqueJacobians& tj, int i, int j, Vec* grad) {
  const int n = static_cast<int>(tj.taus.size());
  check_pair(n, i, j);
  const Vec3& ti = tj.taus[i];
  const Vec3& tj_ = tj.taus[j];
  const Vec3 tij = ti.cross(tj_);
  const double norm = tij.norm();
  if (norm < kDegenerateFaceNorm) return std::nullopt;

  double d = 0.0;
  Mat3X grad_tij;
  Vec grad_norm;
  if (grad) {
    grad->setZero(tj.grads[i].cols());
    // d(tau_i x tau_j) = -[tau_j]x d tau_i + [tau_i]x d tau_j
    grad_tij = -skew(tj_) * tj.grads[i] + skew(ti) * tj.grads[j];
    grad_norm = grad_tij.transpose() * tij / norm;
  }
  for (int k = 0; k < n; ++k) {
    const double dot = tij.dot(tj.taus[k]);
    const double tau_ijk = dot / norm;
    if (tau_ijk <= 0.0) continue;
    d += tau_ijk;
    if (grad) {
      const Vec grad_dot = grad_tij.transpose() * tj.taus[k] + tj.grads[k].transpose() * tij;
      *grad += (grad_dot * norm - dot * grad_norm) / (norm * norm);
    }
  }
  return d;
}

Vec face_distance_gradient(const RobotModel& model, const Configuration& q, int i, int j) {
  check_configuration(model, q);
  const TorqueJacobians tj = rotor_torque_jacobians(model, q);
  Vec grad;
  if (!face_distance_and_gradient(tj, i, j, &grad)) {
    throw Error(ErrorCode::DegenerateFace, "face (" + std::to_string(i) + ", " + std::to_string(j) + ") is degenerate");
  }
  return grad;
}

}  // namespace fbplan
