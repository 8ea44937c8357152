#pragma once

#include <optional>
#include <vector>

#include "fbplan/model.hpp"

namespace fbplan {

/// Per-rotor torque generators about the CoG at full thrust.
using TorqueSet = std::vector<Vec3>;

/// Generators together with their Jacobians w.r.t. q (3 x D each).
struct TorqueJacobians {
  TorqueSet taus;
  std::vector<Mat3X> grads;
};

/// Below this cross-product norm a generator pair spans no face.
constexpr double kDegenerateFaceNorm = 1e-9;

TorqueSet rotor_torques(const RobotModel& model, const Configuration& q);

TorqueJacobians rotor_torque_jacobians(const RobotModel& model, const Configuration& q);

/// Support distance of the control-torque zonotope along unit(tau_i x tau_j).
/// Returns nullopt for a degenerate pair. Indices are 0-based; i == j throws
/// Error(InvalidPair).
std::optional<double> face_distance(const TorqueSet& taus, int i, int j);

/// Controllability margin: minimum non-degenerate face distance over ordered
/// pairs, or 0 when every pair is degenerate.
double tau_min(const RobotModel& model, const Configuration& q);
double tau_min(const TorqueSet& taus);

/// Same as tau_min but also reports the minimizing face normal, if any.
struct TauMinResult {
  double value = 0.0;
  std::optional<Vec3> normal;
  int i = -1;
  int j = -1;
};
TauMinResult tau_min_with_normal(const TorqueSet& taus);

/// Sign of tau_0 . (tau_1 x tau_2) for exactly four generators summing to
/// zero, else 0. In that case tau_min vanishes wherever the sign changes, so
/// a continuous path between states of opposite sign crosses a singularity.
int torque_orientation(const TorqueSet& taus);
int torque_orientation(const RobotModel& model, const Configuration& q);

/// Gradient of d_ij w.r.t. q. Throws Error(DegenerateFace) if the pair is degenerate.
Vec face_distance_gradient(const RobotModel& model, const Configuration& q, int i, int j);

/// Face distance and gradient from precomputed generators. `grad` may be null.
/// Returns nullopt when degenerate (grad untouched).
std::optional<double> face_distance_and_gradient(const TorqueJacobians& tj, int i, int j, Vec* grad);

}  // namespace fbplan
