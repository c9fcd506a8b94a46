#pragma once

#include <random>

#include "graspsafe/chain_dynamics.hpp"
#include "graspsafe/object_inertia.hpp"
#include "graspsafe/spatial_math.hpp"

namespace graspsafe::testkit {

inline double uniform(std::mt19937& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vector3 random_vector(std::mt19937& rng, double scale = 1.0) {
  return Vector3(uniform(rng, -scale, scale), uniform(rng, -scale, scale), uniform(rng, -scale, scale));
}

inline Vector3 random_unit(std::mt19937& rng) {
  Vector3 v;
  do v = random_vector(rng); while (v.norm() < 1e-3);
  return v.normalized();
}

inline Rotation random_rotation(std::mt19937& rng) {
  return Rotation::about_axis(random_unit(rng), uniform(rng, -M_PI, M_PI));
}

/// Principal moments drawn so the triangle inequalities hold, then rotated.
inline Matrix3 random_inertia(std::mt19937& rng, double scale = 1.0) {
  const double a = uniform(rng, 0.2, 1.0), b = uniform(rng, 0.2, 1.0);
  const double c = uniform(rng, std::abs(a - b) + 0.05, a + b - 0.05);
  const Matrix3 r = random_rotation(rng).matrix();
  return scale * r * Vector3(a, b, c).asDiagonal() * r.transpose();
}

inline Matrix6 random_spd(std::mt19937& rng, double floor = 0.1) {
  Matrix6 a = Matrix6::NullaryExpr([&](Eigen::Index, Eigen::Index) { return uniform(rng, -1.0, 1.0); });
  return a * a.transpose() + floor * Matrix6::Identity();
}

inline RigidBodyInertia random_body(std::mt19937& rng) {
  RigidBodyInertia b;
  b.mass = uniform(rng, 0.05, 5.0);
  b.com_pose = Pose{random_vector(rng, 0.3), random_rotation(rng)};
  b.inertia = random_inertia(rng, b.mass * 0.02);
  return b;
}

/// Random revolute chain with `n` joints and non-degenerate link geometry.
inline ChainModel random_chain(std::mt19937& rng, int n) {
  std::vector<ChainLink> links;
  for (int i = 0; i < n; ++i) {
    ChainLink l;
    l.joint.name = "j" + std::to_string(i);
    l.joint.parent_transform = Pose{random_vector(rng, 0.3), random_rotation(rng)};
    l.joint.axis = random_unit(rng);
    l.joint.lower = -3.0;
    l.joint.upper = 3.0;
    l.link.mass = uniform(rng, 0.2, 3.0);
    l.link.com = random_vector(rng, 0.15);
    l.link.inertia = random_inertia(rng, 0.01 * l.link.mass);
    links.push_back(l);
  }
  return ChainModel(std::move(links), Pose{random_vector(rng, 0.2), random_rotation(rng)},
                    Pose{random_vector(rng, 0.1), random_rotation(rng)});
}

inline JointState random_q(std::mt19937& rng, int n, double span = 2.5) {
  JointState q(n);
  for (int i = 0; i < n; ++i) q[i] = uniform(rng, -span, span);
  return q;
}

/// Kinetic energy summed link by link: each link's CoM and angular velocity
/// are built from the world joint axes of its ancestors (revolute joints only).
inline double per_link_energy(const ChainModel& m, const JointState& q, const JointState& qd) {
  const ChainKinematics k = chain_kinematics(m, q);
  double e = 0.0;
  for (int i = 0; i < m.dof(); ++i) {
    const LinkInertia& li = m.links()[i].link;
    const Vector3 c = k.link_frames[i].transform_point(li.com);
    Vector3 v = Vector3::Zero(), w = Vector3::Zero();
    for (int j = 0; j <= i; ++j) {
      v += k.joint_axes[j].cross(c - k.joint_origins[j]) * qd[j];
      w += k.joint_axes[j] * qd[j];
    }
    const Matrix3 rot = k.link_frames[i].orientation.matrix();
    const Matrix3 iw = rot * li.inertia * rot.transpose();
    e += 0.5 * li.mass * v.squaredNorm() + 0.5 * w.dot(iw * w);
  }
  return e;
}

/// Effective mass of a free rigid body struck at `point` along unit `v`,
/// from the velocity change a unit impulse produces there (Newton-Euler).
/// All vectors and `inertia` share one set of axes.
inline double impulse_effective_mass(double mass, const Matrix3& inertia, const Vector3& com,
                                     const Vector3& point, const Vector3& v) {
  const Vector3 arm = point - com;
  const Vector3 dv_com = v / mass;
  const Vector3 dw = inertia.inverse() * arm.cross(v);
  const Vector3 dv_point = dv_com + dw.cross(arm);
  return 1.0 / v.dot(dv_point);
}

}  // namespace graspsafe::testkit
