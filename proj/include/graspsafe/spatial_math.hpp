#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "graspsafe/errors.hpp"
#include "graspsafe/tolerances.hpp"

namespace graspsafe {

using Vector3 = Eigen::Vector3d;
using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix3 = Eigen::Matrix3d;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

/// Element of SO(3). Construction from an arbitrary matrix checks
/// orthonormality and handedness; the factories build valid rotations directly.
class Rotation {
 public:
  Rotation() : m_(Matrix3::Identity()) {}

  explicit Rotation(const Matrix3& m) : m_(m) {
    if (!m.allFinite()) throw InvalidArgument("rotation has non-finite entries");
    const double orth = (m * m.transpose() - Matrix3::Identity()).cwiseAbs().maxCoeff();
    if (orth > tol::kOrthonormality)
      throw InvalidArgument("rotation is not orthonormal (max |R Rᵀ - I| = " +
                            std::to_string(orth) + ")");
    if (std::abs(m.determinant() - 1.0) > tol::kOrthonormality)
      throw InvalidArgument("rotation has det != +1");
  }

  static Rotation identity() { return Rotation(); }

  static Rotation about_axis(const Vector3& axis, double angle) {
    return unchecked(Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix());
  }

  /// R = Rz(yaw) · Ry(pitch) · Rx(roll).
  static Rotation from_euler_zyx(double yaw, double pitch, double roll) {
    const Matrix3 m = (Eigen::AngleAxisd(yaw, Vector3::UnitZ()) *
                       Eigen::AngleAxisd(pitch, Vector3::UnitY()) *
                       Eigen::AngleAxisd(roll, Vector3::UnitX()))
                          .toRotationMatrix();
    return unchecked(m);
  }

  /// Re-orthonormalizes `m` (nearest rotation via SVD). For inputs that went
  /// through text serialization or long products.
  static Rotation nearest(const Matrix3& m) {
    Eigen::JacobiSVD<Matrix3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix3 r = svd.matrixU() * svd.matrixV().transpose();
    if (r.determinant() < 0) {
      Matrix3 u = svd.matrixU();
      u.col(2) *= -1.0;
      r = u * svd.matrixV().transpose();
    }
    return unchecked(r);
  }

  const Matrix3& matrix() const { return m_; }
  Rotation inverse() const { return unchecked(m_.transpose()); }
  Rotation operator*(const Rotation& o) const { return unchecked(m_ * o.m_); }
  Vector3 operator*(const Vector3& v) const { return m_ * v; }

  /// (yaw, pitch, roll) of the ZYX factorization. Pitch lies in [-π/2, π/2];
  /// at gimbal lock roll is set to zero.
  Vector3 euler_zyx() const {
    const double pitch = std::asin(std::clamp(-m_(2, 0), -1.0, 1.0));
    if (std::abs(std::cos(pitch)) < 1e-12) {
      const double yaw = std::atan2(-m_(0, 1), m_(1, 1));
      return {yaw, pitch, 0.0};
    }
    const double yaw = std::atan2(m_(1, 0), m_(0, 0));
    const double roll = std::atan2(m_(2, 1), m_(2, 2));
    return {yaw, pitch, roll};
  }

 private:
  static Rotation unchecked(const Matrix3& m) {
    Rotation r;
    r.m_ = m;
    return r;
  }
  Matrix3 m_;
};

/// Rigid transform: maps points of the child frame into the parent frame.
struct Pose {
  Vector3 position = Vector3::Zero();
  Rotation orientation;

  static Pose identity() { return {}; }
  static Pose translation(double x, double y, double z) { return {Vector3(x, y, z), Rotation()}; }

  Vector3 transform_point(const Vector3& p) const { return orientation * p + position; }
};

inline Pose pose_compose(const Pose& a, const Pose& b) {
  return {a.orientation * b.position + a.position, a.orientation * b.orientation};
}

inline Pose pose_inverse(const Pose& a) {
  const Rotation rt = a.orientation.inverse();
  return {-(rt * a.position), rt};
}

inline Pose operator*(const Pose& a, const Pose& b) { return pose_compose(a, b); }

struct Twist {
  Vector3 linear = Vector3::Zero();
  Vector3 angular = Vector3::Zero();

  Vector6 as_vector() const {
    Vector6 v;
    v << linear, angular;
    return v;
  }
  static Twist from_vector(const Vector6& v) { return {v.head<3>(), v.tail<3>()}; }
};

/// Cartesian position plus ZYX Euler angles stored as (yaw, pitch, roll).
struct OperationalCoords {
  Vector3 position = Vector3::Zero();
  Vector3 euler = Vector3::Zero();

  double yaw() const { return euler[0]; }
  double pitch() const { return euler[1]; }
  double roll() const { return euler[2]; }

  static OperationalCoords from_pose(const Pose& p) {
    OperationalCoords c{p.position, p.orientation.euler_zyx()};
    if (std::abs(std::cos(c.pitch())) < tol::kSingularPitch)
      throw SingularRepresentation("pose orientation is at the ZYX gimbal-lock pitch");
    return c;
  }

  Pose to_pose() const {
    return {position, Rotation::from_euler_zyx(euler[0], euler[1], euler[2])};
  }
};

/// Cross-product matrix: skew(r) · v = r × v.
inline Matrix3 skew(const Vector3& r) {
  Matrix3 s;
  s << 0.0, -r.z(), r.y(),
       r.z(), 0.0, -r.x(),
       -r.y(), r.x(), 0.0;
  return s;
}

/// Shift of twists between two frames separated by r (linear rows first):
/// T = [[I, skew(r)], [0, I]]. With r the position of the new reference
/// point relative to the old one, T maps a twist referenced at the new point
/// to the same motion referenced at the old point.
inline Matrix6 velocity_transform(const Vector3& r) {
  Matrix6 t = Matrix6::Identity();
  t.topRightCorner<3, 3>() = skew(r);
  return t;
}

/// Maps ZYX Euler rates (yaw, pitch, roll)ᵀ to the angular velocity
/// expressed in the fixed (base) frame.
inline Matrix3 euler_zyx_rate_matrix(const Vector3& euler) {
  const double cy = std::cos(euler[0]), sy = std::sin(euler[0]);
  const double cp = std::cos(euler[1]), sp = std::sin(euler[1]);
  Matrix3 b;
  b << 0.0, -sy, cy * cp,
       0.0,  cy, sy * cp,
       1.0, 0.0, -sp;
  return b;
}

/// E(x) = blockdiag(I₃, B): operational-coordinate rates to twist.
inline Matrix6 euler_rate_map(const OperationalCoords& coords) {
  if (std::abs(std::cos(coords.pitch())) < tol::kSingularPitch)
    throw SingularRepresentation("ZYX Euler rate map is singular at pitch = ±π/2");
  Matrix6 e = Matrix6::Identity();
  e.bottomRightCorner<3, 3>() = euler_zyx_rate_matrix(coords.euler);
  return e;
}

/// Rotation vector (axis · angle) of R, angle in [0, π].
inline Vector3 rotation_log(const Matrix3& r) {
  const Eigen::AngleAxisd aa(r);
  return aa.axis() * aa.angle();
}

/// Orientation error that rotates `current` onto `target`, base frame.
inline Vector3 orientation_error(const Rotation& target, const Rotation& current) {
  return rotation_log(target.matrix() * current.matrix().transpose());
}

/// Rotates a 6×6 kinetic-energy matrix expressed in frame-B axes into
/// frame-A axes given R_AB: blockdiag(R,R) · K · blockdiag(R,R)ᵀ.
inline Matrix6 rotate_block_matrix(const Matrix6& k, const Rotation& r_ab) {
  Matrix6 big = Matrix6::Zero();
  big.topLeftCorner<3, 3>() = r_ab.matrix();
  big.bottomRightCorner<3, 3>() = r_ab.matrix();
  return big * k * big.transpose();
}

}  // namespace graspsafe
