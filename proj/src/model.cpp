#include "fbplan/model.hpp"

#include <cmath>
#include <string>

namespace fbplan {

namespace {

Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

Vec2 unit(double heading) { return {std::cos(heading), std::sin(heading)}; }

Mat3X lift(const Eigen::Matrix<double, 2, Eigen::Dynamic>& planar) {
  Mat3X out = Mat3X::Zero(3, planar.cols());
  out.topRows<2>() = planar;
  return out;
}

void check_orthonormal(const Mat3& r, const char* name) {
  const double err = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (!(err <= 1e-9)) {
    throw Error(ErrorCode::InvalidRotation, std::string(name) + " is not orthonormal");
  }
}

}  // namespace

void RobotModel::validate() const {
  if (n_joints < 1) throw Error(ErrorCode::InvalidArgument, "n_joints must be >= 1");
  if (!(link_length > 0.0)) throw Error(ErrorCode::InvalidArgument, "link_length must be > 0");
  if (!(propeller_radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "propeller_radius must be > 0");
  if (!(max_thrust > 0.0)) throw Error(ErrorCode::InvalidArgument, "max_thrust must be > 0");
  if (!(theta_min < theta_max)) throw Error(ErrorCode::InvalidArgument, "theta_min must be < theta_max");
  if (!(link_mass > 0.0)) throw Error(ErrorCode::InvalidArgument, "link_mass must be > 0");
  if (static_cast<int>(spin_signs.size()) != n_rotors()) {
    throw Error(ErrorCode::InvalidArgument, "spin_signs must have one entry per rotor");
  }
  for (int s : spin_signs) {
    if (s != 1 && s != -1) throw Error(ErrorCode::InvalidArgument, "spin_signs entries must be +1 or -1");
  }
}

void check_configuration(const RobotModel& model, const Configuration& q) {
  if (q.size() != model.dim()) {
    throw Error(ErrorCode::InvalidConfiguration,
                "configuration has " + std::to_string(q.size()) + " entries, model expects " +
                    std::to_string(model.dim()));
  }
  if (!q.allFinite()) throw Error(ErrorCode::InvalidConfiguration, "configuration is not finite");
}

std::vector<LinkFrame> fk_link_frames(const RobotModel& model, const Configuration& q) {
  check_configuration(model, q);
  std::vector<LinkFrame> frames(model.n_links());
  frames[0] = {q.head<2>(), q[kYawIndex]};
  for (int i = 1; i < model.n_links(); ++i) {
    const LinkFrame& prev = frames[i - 1];
    frames[i].origin = prev.origin + model.link_length * unit(prev.heading);
    frames[i].heading = prev.heading + q[kFirstJointIndex + i - 1];
  }
  return frames;
}

KinematicState compute_kinematics(const RobotModel& model, const Configuration& q, bool with_jacobians) {
  const int n = model.n_links();
  const double half = 0.5 * model.link_length;
  KinematicState ks;
  ks.rotor_relative.resize(n);
  ks.rotor_world.resize(n);

  // Link origins relative to the root position.
  std::vector<Vec2> origin(n);
  std::vector<double> heading(n);
  origin[0].setZero();
  heading[0] = q[kYawIndex];
  for (int i = 1; i < n; ++i) {
    origin[i] = origin[i - 1] + model.link_length * unit(heading[i - 1]);
    heading[i] = heading[i - 1] + q[kFirstJointIndex + i - 1];
  }
  const Vec2 root = q.head<2>();
  ks.cog_relative.setZero();
  for (int i = 0; i < n; ++i) {
    ks.rotor_relative[i] = origin[i] + half * unit(heading[i]);
    ks.rotor_world[i] = root + ks.rotor_relative[i];
    ks.cog_relative += ks.rotor_relative[i];
  }
  ks.cog_relative /= static_cast<double>(n);

  if (with_jacobians) {
    const int d = model.dim();
    ks.rotor_jac.assign(n, Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, d));
    for (int r = 0; r < n; ++r) {
      auto& jac = ks.rotor_jac[r];
      jac(0, 0) = 1.0;
      jac(1, 1) = 1.0;
      jac.col(kYawIndex) = perp(ks.rotor_relative[r]);
      // Joint k rotates links k+1.. about the origin of link k+1.
      for (int k = 0; k + 1 <= r; ++k) {
        jac.col(kFirstJointIndex + k) = perp(ks.rotor_relative[r] - origin[k + 1]);
      }
    }
  }
  return ks;
}

std::vector<Vec3> rotor_positions(const RobotModel& model, const Configuration& q) {
  check_configuration(model, q);
  const KinematicState ks = compute_kinematics(model, q, false);
  std::vector<Vec3> out;
  out.reserve(ks.rotor_world.size());
  for (const Vec2& p : ks.rotor_world) out.emplace_back(p.x(), p.y(), 0.0);
  return out;
}

Vec3 cog(const RobotModel& model, const Configuration& q) {
  check_configuration(model, q);
  const KinematicState ks = compute_kinematics(model, q, false);
  const Vec2 c = q.head<2>() + ks.cog_relative;
  return {c.x(), c.y(), 0.0};
}

Mat3X rotor_jacobian(const RobotModel& model, const Configuration& q, int rotor) {
  check_configuration(model, q);
  if (rotor < 0 || rotor >= model.n_rotors()) {
    throw Error(ErrorCode::IndexOutOfRange, "rotor index " + std::to_string(rotor) + " out of range");
  }
  const KinematicState ks = compute_kinematics(model, q, true);
  return lift(ks.rotor_jac[rotor]);
}

Mat3X cog_jacobian(const RobotModel& model, const Configuration& q) {
  check_configuration(model, q);
  const KinematicState ks = compute_kinematics(model, q, true);
  Eigen::Matrix<double, 2, Eigen::Dynamic> sum = Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, model.dim());
  for (const auto& j : ks.rotor_jac) sum += j;
  return lift(sum / static_cast<double>(model.n_rotors()));
}

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Mat3X transform_jacobian(const Vec3& p_source, const Mat3X& jac_source,
                         const Vec3& origin_source, const Vec3& origin_target,
                         const FrameJacobian& jac_origin_source,
                         const FrameJacobian& jac_origin_target,
                         const Mat3& rot_world_source, const Mat3& rot_target_world) {
  check_orthonormal(rot_world_source, "R_WS");
  check_orthonormal(rot_target_world, "R_TW");
  const Eigen::Index d = jac_source.cols();
  if (jac_origin_source.linear.cols() != d || jac_origin_source.angular.cols() != d ||
      jac_origin_target.linear.cols() != d || jac_origin_target.angular.cols() != d) {
    throw Error(ErrorCode::InvalidArgument, "frame Jacobians disagree on column count");
  }
  const Vec3 p_world_rel = rot_world_source * p_source;
  const Vec3 p_world = p_world_rel + origin_source;
  const Vec3 p_target = rot_target_world * (p_world - origin_target);

  const Mat3X jac_world = rot_world_source * jac_source + jac_origin_source.linear -
                          skew(p_world_rel) * jac_origin_source.angular;
  return rot_target_world * (jac_world - jac_origin_target.linear) +
         skew(p_target) * rot_target_world * jac_origin_target.angular;
}

std::vector<CogRotor> cog_frame_quantities(const RobotModel& model, const Configuration& q) {
  check_configuration(model, q);
  const int d = model.dim();
  const KinematicState ks = compute_kinematics(model, q, true);

  Eigen::Matrix<double, 2, Eigen::Dynamic> cog_planar = Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, d);
  for (const auto& j : ks.rotor_jac) cog_planar += j;
  cog_planar /= static_cast<double>(model.n_rotors());

  const Vec3 cog_world(q[0] + ks.cog_relative.x(), q[1] + ks.cog_relative.y(), 0.0);
  const FrameJacobian world = FrameJacobian::zero(d);
  const FrameJacobian cog_frame{lift(cog_planar), Mat3X::Zero(3, d)};
  const Vec3 e_world = Vec3::UnitZ();

  std::vector<CogRotor> out(model.n_rotors());
  for (int i = 0; i < model.n_rotors(); ++i) {
    const Vec2 rel = ks.rotor_relative[i] - ks.cog_relative;
    out[i].position = Vec3(rel.x(), rel.y(), 0.0);
    const Vec3 p_world(ks.rotor_world[i].x(), ks.rotor_world[i].y(), 0.0);
    out[i].position_jac = transform_jacobian(p_world, lift(ks.rotor_jac[i]), Vec3::Zero(), cog_world,
                                             world, cog_frame, Mat3::Identity(), Mat3::Identity());
    // Thrust axis is a free vector fixed in the world-aligned CoG frame.
    out[i].thrust_axis = e_world;
    out[i].axis_jac = Mat3X::Zero(3, d);
  }
  return out;
}

}  // namespace fbplan
