#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>

namespace fbplan {

using Vec = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat = Eigen::MatrixXd;
using Mat3 = Eigen::Matrix3d;
using Mat3X = Eigen::Matrix<double, 3, Eigen::Dynamic>;

/// Full robot configuration: [root x, root y, root yaw (unwrapped), joint angles...].
using Configuration = Eigen::VectorXd;

enum class ErrorCode {
  InvalidArgument,
  InvalidConfiguration,
  InvalidRotation,
  IndexOutOfRange,
  InvalidPair,
  DegenerateFace,
  ParseError,
  OutOfDomain,
  NoPath,
  StartBlocked,
  GoalBlocked,
  EmptyFeasibleSet,
  InfeasibleEndpoint,
  AnchorGenerationFailed,
  SolverDiverged,
  ConfigError,
  IoError,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library. `detail` carries the offending line
/// number, iteration, segment index, or similar when one applies.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::optional<long> detail = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<long> detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::optional<long> detail_;
};

constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace fbplan
