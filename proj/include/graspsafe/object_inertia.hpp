#pragma once

#include <array>
#include <string>
#include <vector>

#include "graspsafe/chain_dynamics.hpp"
#include "graspsafe/kinetic_energy.hpp"
#include "graspsafe/spatial_math.hpp"

namespace graspsafe {

/// Inertial description of the grasped object. `com_pose` places the CoM
/// frame in the object's reference frame; `inertia` is about the CoM in
/// CoM-frame axes.
struct RigidBodyInertia {
  double mass = 0.0;
  Pose com_pose;
  Matrix3 inertia = Matrix3::Zero();

  void validate(const std::string& field = "object") const {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw ValidationError(field + ".mass_kg", "mass must be > 0");
    validate_inertia_tensor(inertia, field + ".inertia_kgm2");
  }

  /// Inertia about the reference-frame origin, reference-frame axes.
  Matrix3 inertia_about_reference_origin() const {
    const Matrix3& r = com_pose.orientation.matrix();
    const Vector3& c = com_pose.position;
    return r * inertia * r.transpose() + mass * (c.squaredNorm() * Matrix3::Identity() - c * c.transpose());
  }
};

/// A candidate grasp: the grasp frame F_gp expressed relative to the CoM frame.
struct GraspCandidate {
  std::string id;
  Pose grasp_pose;
};

inline KineticEnergyMatrix com_energy_matrix(const RigidBodyInertia& body) {
  Matrix6 k = Matrix6::Zero();
  k.topLeftCorner<3, 3>() = body.mass * Matrix3::Identity();
  k.bottomRightCorner<3, 3>() = body.inertia;
  return KineticEnergyMatrix(k);
}

/// Re-expresses the CoM-frame matrix at the grasp frame, in grasp-frame axes:
/// Tᵀ Λ T with T = velocity_transform(r), r the grasp origin relative to the
/// CoM. With an identity grasp orientation the blocks are
/// [[mI, m·skew(r)], [m·skew(r)ᵀ, I_com + m·skew(r)ᵀskew(r)]].
inline KineticEnergyMatrix transform_to_grasp(const KineticEnergyMatrix& com_matrix,
                                              const GraspCandidate& grasp) {
  const Rotation r_gc = grasp.grasp_pose.orientation.inverse();
  const Matrix6 in_grasp_axes = rotate_block_matrix(com_matrix.matrix(), r_gc);
  const Vector3 r = r_gc * grasp.grasp_pose.position;
  const Matrix6 t = velocity_transform(r);
  return KineticEnergyMatrix(t.transpose() * in_grasp_axes * t);
}

/// Rotates a grasp-frame matrix into base-frame axes given the world
/// orientation of the grasp (end-effector) frame.
inline KineticEnergyMatrix express_in_base(const KineticEnergyMatrix& grasp_matrix,
                                           const Rotation& grasp_orientation) {
  return KineticEnergyMatrix(rotate_block_matrix(grasp_matrix.matrix(), grasp_orientation));
}

/// Operational-coordinate form Eᵀ Λ E, so that ½ẋᵀΛ_op ẋ equals the twist
/// energy for twist = E ẋ.
inline KineticEnergyMatrix to_operational(const KineticEnergyMatrix& twist_matrix,
                                          const OperationalCoords& coords) {
  return twist_matrix.congruence(euler_rate_map(coords));
}

inline RigidBodyInertia build_cuboid(double mass, const Vector3& dims) {
  if (!(mass > 0.0)) throw ValidationError("object.mass_kg", "mass must be > 0");
  if (!(dims.array() > 0.0).all()) throw ValidationError("object.dims_m", "dimensions must be > 0");
  const double a2 = dims.x() * dims.x(), b2 = dims.y() * dims.y(), c2 = dims.z() * dims.z();
  RigidBodyInertia body;
  body.mass = mass;
  body.inertia = (mass / 12.0 * Vector3(b2 + c2, a2 + c2, a2 + b2)).asDiagonal();
  return body;
}

/// Cross-shaped object with sliding ring weights. The handle is a cylinder
/// along x centred on the hub, spanning [-handle_length/2, handle_length/2];
/// four arms of `cylinder_length` run from the hub along +y, -y, +z, -z.
/// ring_positions[0] is the signed x of the handle ring, ring_positions[1..4]
/// the distance of each arm's ring from the hub.
struct TensorObjectConfig {
  double handle_length = 0.30;
  double cylinder_length = 0.15;
  double cylinder_mass = 0.05;
  double ring_mass = 0.036;
  double cylinder_radius = 0.01;
  double ring_radius = 0.02;
  std::array<double, 5> ring_positions{0.0, 0.0, 0.0, 0.0, 0.0};

  static constexpr std::array<const char*, 5> kCylinderNames{"handle_x", "arm_pos_y", "arm_neg_y",
                                                             "arm_pos_z", "arm_neg_z"};

  double total_mass() const { return 5.0 * cylinder_mass + 5.0 * ring_mass; }
};

/// One homogeneous primitive of a composite body: centre, unit axis, mass and
/// inertia about its own centre (world-aligned).
struct MassPrimitive {
  enum class Shape { solid_cylinder, thin_ring } shape;
  Vector3 center;
  Vector3 axis;
  double mass;
  double length;  // cylinder length; 0 for rings
  double radius;

  Matrix3 inertia_about_center() const {
    double axial = 0.0, perp = 0.0;
    if (shape == Shape::solid_cylinder) {
      axial = 0.5 * mass * radius * radius;
      perp = mass * (3.0 * radius * radius + length * length) / 12.0;
    } else {
      axial = mass * radius * radius;
      perp = 0.5 * mass * radius * radius;
    }
    return perp * Matrix3::Identity() + (axial - perp) * axis * axis.transpose();
  }
};

inline std::vector<MassPrimitive> tensor_object_primitives(const TensorObjectConfig& cfg) {
  const auto bad = [](const std::string& f, const std::string& m) { return ValidationError(f, m); };
  if (!(cfg.handle_length > 0.0)) throw bad("object.tensor.handle_length_m", "must be > 0");
  if (!(cfg.cylinder_length > 0.0)) throw bad("object.tensor.cylinder_length_m", "must be > 0");
  if (!(cfg.cylinder_mass > 0.0)) throw bad("object.tensor.cylinder_mass_kg", "must be > 0");
  if (!(cfg.ring_mass > 0.0)) throw bad("object.tensor.ring_mass_kg", "must be > 0");
  if (!(cfg.cylinder_radius > 0.0)) throw bad("object.tensor.cylinder_radius_m", "must be > 0");
  if (!(cfg.ring_radius > 0.0)) throw bad("object.tensor.ring_radius_m", "must be > 0");

  const std::array<Vector3, 5> axes{Vector3::UnitX(), Vector3::UnitY(), -Vector3::UnitY(),
                                    Vector3::UnitZ(), -Vector3::UnitZ()};
  std::vector<MassPrimitive> parts;
  parts.reserve(10);
  for (int k = 0; k < 5; ++k) {
    const bool handle = k == 0;
    const double len = handle ? cfg.handle_length : cfg.cylinder_length;
    const Vector3 center = handle ? Vector3::Zero() : Vector3(0.5 * len * axes[k]);
    parts.push_back({MassPrimitive::Shape::solid_cylinder, center, axes[k], cfg.cylinder_mass, len,
                     cfg.cylinder_radius});

    const double s = cfg.ring_positions[k];
    const double lo = handle ? -0.5 * len : 0.0;
    const double hi = handle ? 0.5 * len : len;
    if (!std::isfinite(s) || s < lo - 1e-12 || s > hi + 1e-12)
      throw RingOutOfRange("ring " + std::to_string(k) + " (" + TensorObjectConfig::kCylinderNames[k] +
                           ") at " + std::to_string(s) + " m lies outside [" + std::to_string(lo) +
                           ", " + std::to_string(hi) + "]");
    parts.push_back({MassPrimitive::Shape::thin_ring, Vector3(s * axes[k]), axes[k], cfg.ring_mass, 0.0,
                     cfg.ring_radius});
  }
  return parts;
}

/// Composite of primitives: CoM at the mass-weighted centroid, inertia summed
/// with parallel-axis shifts. The CoM frame keeps reference-frame axes.
inline RigidBodyInertia composite_body(const std::vector<MassPrimitive>& parts) {
  RigidBodyInertia body;
  Vector3 moment = Vector3::Zero();
  for (const auto& p : parts) {
    body.mass += p.mass;
    moment += p.mass * p.center;
  }
  const Vector3 com = moment / body.mass;
  for (const auto& p : parts) {
    const Vector3 d = p.center - com;
    body.inertia += p.inertia_about_center() + p.mass * (d.squaredNorm() * Matrix3::Identity() - d * d.transpose());
  }
  body.com_pose = Pose{com, Rotation()};
  return body;
}

inline RigidBodyInertia build_tensor_object(const TensorObjectConfig& cfg) {
  return composite_body(tensor_object_primitives(cfg));
}

}  // namespace graspsafe
