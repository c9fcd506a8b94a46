#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "graspsafe/kinetic_energy.hpp"
#include "graspsafe/spatial_math.hpp"

namespace graspsafe {

using JointState = Eigen::VectorXd;
using Jacobian = Eigen::Matrix<double, 6, Eigen::Dynamic>;

/// Principal moments must satisfy the triangle inequalities of a real body.
inline void validate_inertia_tensor(const Matrix3& inertia, const std::string& field) {
  if (!inertia.allFinite()) throw ValidationError(field, "non-finite inertia");
  const double scale = std::max(1e-12, inertia.cwiseAbs().maxCoeff());
  if ((inertia - inertia.transpose()).cwiseAbs().maxCoeff() > tol::kSymmetry * scale)
    throw ValidationError(field, "inertia tensor is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix3> es(0.5 * (inertia + inertia.transpose()));
  const Vector3 p = es.eigenvalues();
  if (p[0] <= 0.0) throw ValidationError(field, "inertia tensor is not positive definite");
  const double slack = tol::kSymmetry * std::max(1.0, p.maxCoeff());
  if (p[0] + p[1] < p[2] - slack || p[0] + p[2] < p[1] - slack || p[1] + p[2] < p[0] - slack)
    throw ValidationError(field, "principal moments violate the triangle inequality");
}

struct LinkInertia {
  double mass = 0.0;               // kg
  Vector3 com = Vector3::Zero();   // m, link frame
  Matrix3 inertia = Matrix3::Zero();  // kg·m², about com, link-frame axes

  void validate(const std::string& field) const {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw ValidationError(field + ".mass_kg", "mass must be > 0");
    if (!com.allFinite()) throw ValidationError(field + ".com_m", "non-finite center of mass");
    validate_inertia_tensor(inertia, field + ".inertia_kgm2");
  }
};

/// Revolute joint. The joint frame is parent_frame · parent_transform, and
/// the link rotates about `axis` (joint-frame coordinates) by q.
struct JointSpec {
  std::string name;
  Pose parent_transform;
  Vector3 axis = Vector3::UnitZ();
  double lower = -M_PI;  // rad
  double upper = M_PI;   // rad

  void validate(const std::string& field) const {
    if (!axis.allFinite() || std::abs(axis.norm() - 1.0) > tol::kUnitAxis)
      throw ValidationError(field + ".axis", "joint axis must be a unit vector");
    if (!(lower < upper)) throw ValidationError(field + ".limits_rad", "lower limit must be < upper");
    if (!parent_transform.position.allFinite())
      throw ValidationError(field + ".parent_transform", "non-finite offset");
  }
};

struct ChainLink {
  JointSpec joint;
  LinkInertia link;
};

/// Serial revolute manipulator. Immutable after construction.
class ChainModel {
 public:
  ChainModel(std::vector<ChainLink> links, Pose base_pose = {}, Pose tool_transform = {})
      : links_(std::move(links)), base_(std::move(base_pose)), tool_(std::move(tool_transform)) {
    if (links_.empty()) throw ValidationError("chain.joints", "chain needs at least one joint");
    for (std::size_t i = 0; i < links_.size(); ++i) {
      const std::string f = "chain.joints[" + std::to_string(i) + "]";
      links_[i].joint.validate(f);
      links_[i].link.validate(f + ".link");
    }
  }

  int dof() const { return static_cast<int>(links_.size()); }
  const std::vector<ChainLink>& links() const { return links_; }
  const Pose& base_pose() const { return base_; }
  const Pose& tool_transform() const { return tool_; }

  JointState lower_limits() const {
    JointState l(dof());
    for (int i = 0; i < dof(); ++i) l[i] = links_[i].joint.lower;
    return l;
  }
  JointState upper_limits() const {
    JointState u(dof());
    for (int i = 0; i < dof(); ++i) u[i] = links_[i].joint.upper;
    return u;
  }
  bool within_limits(const JointState& q) const {
    return q.size() == dof() && (q.array() >= lower_limits().array()).all() &&
           (q.array() <= upper_limits().array()).all();
  }

 private:
  std::vector<ChainLink> links_;
  Pose base_;
  Pose tool_;
};

/// World-frame kinematic quantities of one configuration.
struct ChainKinematics {
  std::vector<Pose> link_frames;       // frame of link i (after its joint rotation)
  std::vector<Vector3> joint_origins;  // world position of joint i
  std::vector<Vector3> joint_axes;     // world unit axis of joint i
  Pose end_effector;
};

namespace detail {
inline void check_dimension(const ChainModel& model, const JointState& q) {
  if (q.size() != model.dof())
    throw DimensionMismatch("joint vector has " + std::to_string(q.size()) +
                            " entries, chain has " + std::to_string(model.dof()) + " joints");
}
}  // namespace detail

inline ChainKinematics chain_kinematics(const ChainModel& model, const JointState& q) {
  detail::check_dimension(model, q);
  ChainKinematics k;
  const int n = model.dof();
  k.link_frames.reserve(n);
  k.joint_origins.reserve(n);
  k.joint_axes.reserve(n);
  Pose frame = model.base_pose();
  for (int i = 0; i < n; ++i) {
    const JointSpec& j = model.links()[i].joint;
    frame = frame * j.parent_transform;
    k.joint_origins.push_back(frame.position);
    k.joint_axes.push_back(frame.orientation * j.axis);
    frame = frame * Pose{Vector3::Zero(), Rotation::about_axis(j.axis, q[i])};
    k.link_frames.push_back(frame);
  }
  k.end_effector = frame * model.tool_transform();
  return k;
}

inline Pose forward_kinematics(const ChainModel& model, const JointState& q) {
  return chain_kinematics(model, q).end_effector;
}

/// Geometric Jacobian in base-frame axes, referenced at the end-effector
/// origin; rows are (linear, angular).
inline Jacobian geometric_jacobian(const ChainModel& model, const JointState& q) {
  const ChainKinematics k = chain_kinematics(model, q);
  Jacobian jac(6, model.dof());
  const Vector3& pe = k.end_effector.position;
  for (int i = 0; i < model.dof(); ++i) {
    const Vector3& z = k.joint_axes[i];
    jac.col(i) << z.cross(pe - k.joint_origins[i]), z;
  }
  return jac;
}

/// 6×6 spatial inertia (linear-first) of a body referenced at the world
/// origin, from its world-frame CoM and world-axes rotational inertia.
inline Matrix6 spatial_inertia_at_origin(double mass, const Vector3& com_world,
                                         const Matrix3& inertia_world) {
  Matrix6 body = Matrix6::Zero();
  body.topLeftCorner<3, 3>() = mass * Matrix3::Identity();
  body.bottomRightCorner<3, 3>() = inertia_world;
  const Matrix6 t = velocity_transform(-com_world);
  return t.transpose() * body * t;
}

/// Joint-space inertia by the composite-rigid-body recursion: accumulate
/// link inertias from the tip inward, then M(i,j) = Sᵢᵀ I^c_max(i,j) Sⱼ.
inline Eigen::MatrixXd mass_matrix(const ChainModel& model, const JointState& q) {
  const ChainKinematics k = chain_kinematics(model, q);
  const int n = model.dof();

  std::vector<Vector6> motion(n);
  for (int i = 0; i < n; ++i) {
    const Vector3& z = k.joint_axes[i];
    motion[i] << k.joint_origins[i].cross(z), z;
  }

  std::vector<Matrix6> composite(n);
  Matrix6 acc = Matrix6::Zero();
  for (int i = n - 1; i >= 0; --i) {
    const LinkInertia& li = model.links()[i].link;
    const Rotation& r = k.link_frames[i].orientation;
    const Vector3 c = k.link_frames[i].transform_point(li.com);
    acc += spatial_inertia_at_origin(li.mass, c, r.matrix() * li.inertia * r.matrix().transpose());
    composite[i] = acc;
  }

  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    const Vector6 f = composite[i] * motion[i];
    for (int j = 0; j <= i; ++j) {
      m(i, j) = motion[j].dot(f);
      m(j, i) = m(i, j);
    }
  }
  return m;
}

enum class Quality { clean, near_singular };

inline const char* to_string(Quality q) {
  return q == Quality::clean ? "clean" : "near_singular";
}

struct OperationalInertia {
  KineticEnergyMatrix lambda;
  Quality quality = Quality::clean;
  double min_singular_value = 0.0;
};

/// Λ = (J M⁻¹ Jᵀ)⁻¹ in base-frame twist coordinates at the end-effector.
/// Near a kinematic singularity (σ_min(J) < 1e-6, or fewer than six joints)
/// the damped inverse (J M⁻¹ Jᵀ + λ²I)⁻¹ is returned with a degraded flag.
inline OperationalInertia operational_space_inertia(const ChainModel& model, const JointState& q) {
  const Jacobian jac = geometric_jacobian(model, q);
  const Eigen::MatrixXd m = mass_matrix(model, q);
  const Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("joint-space mass matrix is not PD");

  const Matrix6 mobility = jac * llt.solve(jac.transpose());

  OperationalInertia out;
  if (model.dof() >= 6) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    out.min_singular_value = svd.singularValues()[5];
  }
  Matrix6 lambda;
  if (out.min_singular_value < tol::kJacobianSingular) {
    out.quality = Quality::near_singular;
    const double damp = tol::kOsiDamping * tol::kOsiDamping;
    lambda = (mobility + damp * Matrix6::Identity()).ldlt().solve(Matrix6::Identity());
  } else {
    lambda = mobility.ldlt().solve(Matrix6::Identity());
  }
  out.lambda = KineticEnergyMatrix(0.5 * (lambda + lambda.transpose()));
  return out;
}

struct IkOptions {
  int max_iterations = tol::kIkMaxIterations;
  double damping = tol::kIkDamping;
  double step_clamp = tol::kIkStepClamp;
  double position_tolerance = tol::kIkPosition;
  double orientation_tolerance = tol::kIkOrientation;
};

/// Damped least-squares IK warm-started from `seed`; joint limits are
/// enforced by clamping after each step.
inline JointState inverse_kinematics(const ChainModel& model, const Pose& target,
                                     const JointState& seed, const IkOptions& opt = {}) {
  detail::check_dimension(model, seed);
  const JointState lo = model.lower_limits();
  const JointState hi = model.upper_limits();

  JointState q = seed;
  JointState best_q = q;
  double best_pos = std::numeric_limits<double>::infinity();
  double best_ori = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter <= opt.max_iterations; ++iter) {
    const Pose current = forward_kinematics(model, q);
    Vector6 err;
    err << target.position - current.position, orientation_error(target.orientation, current.orientation);
    const double pos = err.head<3>().norm();
    const double ori = err.tail<3>().norm();
    if (pos + ori < best_pos + best_ori) {
      best_pos = pos;
      best_ori = ori;
      best_q = q;
    }
    if (pos < opt.position_tolerance && ori < opt.orientation_tolerance) return q;
    if (iter == opt.max_iterations) break;

    const Jacobian jac = geometric_jacobian(model, q);
    const Matrix6 jjt = jac * jac.transpose() + opt.damping * opt.damping * Matrix6::Identity();
    JointState dq = jac.transpose() * jjt.ldlt().solve(err);
    const double biggest = dq.cwiseAbs().maxCoeff();
    if (biggest > opt.step_clamp) dq *= opt.step_clamp / biggest;
    q = (q + dq).cwiseMax(lo).cwiseMin(hi);
  }
  throw IkDidNotConverge("IK did not converge after " + std::to_string(opt.max_iterations) +
                             " iterations (position residual " + std::to_string(best_pos) +
                             " m, orientation residual " + std::to_string(best_ori) + " rad)",
                         best_q, best_pos, best_ori);
}

}  // namespace graspsafe
