#pragma once

#include <cmath>
#include <vector>

#include "graspsafe/spatial_math.hpp"

namespace graspsafe {

enum class OrientationMode { constant };

/// Rest-to-rest quintic per Cartesian axis:
///   x(t) = c0 + c1 t + c2 t² + c3 t³ + c4 t⁴ + c5 t⁵
/// with zero velocity and acceleration at t = 0 and t = duration.
struct QuinticTrajectory {
  Eigen::Matrix<double, 3, 6> coeffs = Eigen::Matrix<double, 3, 6>::Zero();  // row = axis
  Rotation start_orientation;
  Rotation end_orientation;
  double duration = 0.0;
  OrientationMode orientation_mode = OrientationMode::constant;

  Vector3 position(double t) const {
    Vector3 p = coeffs.col(5);
    for (int k = 4; k >= 0; --k) p = p * t + coeffs.col(k);
    return p;
  }

  Vector3 velocity(double t) const {
    Vector3 v = 5.0 * coeffs.col(5);
    for (int k = 4; k >= 1; --k) v = v * t + k * coeffs.col(k);
    return v;
  }

  Vector3 acceleration(double t) const {
    Vector3 a = 20.0 * coeffs.col(5);
    for (int k = 4; k >= 2; --k) a = a * t + static_cast<double>(k * (k - 1)) * coeffs.col(k);
    return a;
  }

  Rotation orientation(double /*t*/) const { return start_orientation; }

  Pose pose(double t) const { return {position(t), orientation(t)}; }
};

inline QuinticTrajectory fit_quintic(const Pose& start, const Pose& end, double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw NonPositiveDuration("trajectory duration must be > 0");
  QuinticTrajectory traj;
  traj.duration = duration;
  traj.start_orientation = start.orientation;
  traj.end_orientation = end.orientation;

  const Vector3 delta = end.position - start.position;
  const double t3 = duration * duration * duration;
  traj.coeffs.col(0) = start.position;
  traj.coeffs.col(3) = 10.0 * delta / t3;
  traj.coeffs.col(4) = -15.0 * delta / (t3 * duration);
  traj.coeffs.col(5) = 6.0 * delta / (t3 * duration * duration);
  return traj;
}

struct TrajectorySample {
  double t = 0.0;
  Pose pose;
  Twist velocity;
  int index = 0;  // 1..N
};

/// N = round(duration/Δt) samples at t = Δt, 2Δt, …; t = 0 (the grasp pose)
/// is not sampled. Sample times are clamped to the duration.
inline std::vector<TrajectorySample> sample(const QuinticTrajectory& traj, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt) || dt > traj.duration * (1.0 + 1e-12))
    throw InvalidStep("sampling step must satisfy 0 < dt <= duration");
  const int n = std::max(1, static_cast<int>(std::lround(traj.duration / dt)));
  std::vector<TrajectorySample> out;
  out.reserve(n);
  for (int i = 1; i <= n; ++i) {
    const double t = std::min(i * dt, traj.duration);
    out.push_back({t, traj.pose(t), Twist{traj.velocity(t), Vector3::Zero()}, i});
  }
  return out;
}

/// Unit direction of motion at samples[pos]. At rest (speed < 1e-8) the
/// direction of the nearest moving sample is used, earlier one on ties.
inline Vector3 direction_at(const std::vector<TrajectorySample>& samples, std::size_t pos) {
  if (pos >= samples.size()) throw InvalidArgument("sample position out of range");
  const auto moving = [&](std::ptrdiff_t i) {
    return i >= 0 && i < static_cast<std::ptrdiff_t>(samples.size()) &&
           samples[i].velocity.linear.norm() >= tol::kZeroSpeed;
  };
  const auto p = static_cast<std::ptrdiff_t>(pos);
  for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(samples.size()); ++d) {
    if (moving(p - d)) return samples[p - d].velocity.linear.normalized();
    if (moving(p + d)) return samples[p + d].velocity.linear.normalized();
  }
  throw DegenerateTrajectory("trajectory never moves; direction of motion is undefined");
}

}  // namespace graspsafe
