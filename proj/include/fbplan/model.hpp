#pragma once

#include <vector>

#include "fbplan/common.hpp"

namespace fbplan {

/// Planar floating-base chain of identical links, one rotor per link.
///
/// Link i+1 starts at the tip of link i (`origin + L * [cos, sin](heading)`)
/// and its heading is the heading of link i plus joint angle i. The rotor of
/// each link sits at the link midpoint, every link carries the same point mass
/// at that midpoint, and every rotor thrusts along world +z.
struct RobotModel {
  int n_joints = 3;
  double link_length = 0.6;         // m
  double propeller_radius = 0.2025; // m
  double theta_min = -kPi / 2.0;    // rad
  double theta_max = kPi / 2.0;     // rad
  double drag_coefficient = -0.0182; // m, rotor drag torque per unit thrust
  std::vector<int> spin_signs{+1, -1, +1, -1};
  double max_thrust = 5.0;  // N per rotor
  double link_mass = 1.0;   // kg per link

  int n_links() const { return n_joints + 1; }
  int n_rotors() const { return n_joints + 1; }
  /// Configuration dimension: 2 position + 1 yaw + joints.
  int dim() const { return 3 + n_joints; }

  /// Throws Error(InvalidArgument) when a field breaks its invariant.
  void validate() const;
};

constexpr int kPositionDims = 2;
constexpr int kYawIndex = 2;
constexpr int kFirstJointIndex = 3;

struct LinkFrame {
  Vec2 origin;
  double heading = 0.0;
};

/// Thrown as Error(InvalidConfiguration) when q does not match the model.
void check_configuration(const RobotModel& model, const Configuration& q);

std::vector<LinkFrame> fk_link_frames(const RobotModel& model, const Configuration& q);

/// World rotor centres, z = 0.
std::vector<Vec3> rotor_positions(const RobotModel& model, const Configuration& q);

Vec3 cog(const RobotModel& model, const Configuration& q);

/// Jacobian of rotor `rotor` (0-based) world position w.r.t. q. Row z is zero.
Mat3X rotor_jacobian(const RobotModel& model, const Configuration& q, int rotor);

/// Jacobian of the centre of gravity w.r.t. q.
Mat3X cog_jacobian(const RobotModel& model, const Configuration& q);

struct FrameJacobian {
  Mat3X linear;
  Mat3X angular;

  static FrameJacobian zero(int dim) {
    return {Mat3X::Zero(3, dim), Mat3X::Zero(3, dim)};
  }
};

Mat3 skew(const Vec3& v);

/// Re-expresses the Jacobian of a vector known in a source frame S in a
/// target frame T, going through the world frame:
///   W_J = R_WS * S_J + J_oS.v - [R_WS * S_p]x * J_oS.w
///   T_J = R_TW * (W_J - J_oT.v) + [T_p]x * R_TW * J_oT.w
/// Throws Error(InvalidRotation) when either rotation is not orthonormal.
Mat3X transform_jacobian(const Vec3& p_source, const Mat3X& jac_source,
                         const Vec3& origin_source, const Vec3& origin_target,
                         const FrameJacobian& jac_origin_source,
                         const FrameJacobian& jac_origin_target,
                         const Mat3& rot_world_source, const Mat3& rot_target_world);

/// Rotor quantities expressed in the (world-aligned) centre-of-gravity frame.
struct CogRotor {
  Vec3 position;        // C_p_i
  Vec3 thrust_axis;     // C_e_i
  Mat3X position_jac;   // C_J_i^rot
  Mat3X axis_jac;       // C_J_i^e
};

std::vector<CogRotor> cog_frame_quantities(const RobotModel& model, const Configuration& q);

/// Everything the optimizer needs from one configuration, computed in a single
/// pass. Positions relative to the root are kept separately so that CoG-frame
/// quantities are exactly invariant under root translation.
struct KinematicState {
  std::vector<Vec2> rotor_world;     // world rotor centres (xy)
  std::vector<Vec2> rotor_relative;  // rotor centres minus root position
  Vec2 cog_relative;                 // CoG minus root position
  std::vector<Eigen::Matrix<double, 2, Eigen::Dynamic>> rotor_jac;  // planar rows only
};

KinematicState compute_kinematics(const RobotModel& model, const Configuration& q, bool with_jacobians);

}  // namespace fbplan
