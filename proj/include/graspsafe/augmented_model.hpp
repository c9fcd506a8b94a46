#pragma once

#include "graspsafe/chain_dynamics.hpp"
#include "graspsafe/kinetic_energy.hpp"

namespace graspsafe {

/// Robot plus held object. Both matrices must share reference point, axes
/// and coordinate representation.
inline KineticEnergyMatrix augment(const KineticEnergyMatrix& robot, const KineticEnergyMatrix& object) {
  return KineticEnergyMatrix(robot.matrix() + object.matrix());
}

/// Blocks of Λ⁻¹ in the linear-first layout:
///   Λ⁻¹ = [[translational_inv, coupling], [couplingᵀ, rotational_inv]]
/// translational_inv is the inverse of the Schur complement
/// Λ_u − Λ_uw Λ_w⁻¹ Λ_uwᵀ.
struct PartitionedInverse {
  Matrix3 translational_inv;
  Matrix3 coupling;
  Matrix3 rotational_inv;

  Matrix6 assemble() const {
    Matrix6 m;
    m << translational_inv, coupling, coupling.transpose(), rotational_inv;
    return m;
  }
};

inline PartitionedInverse partition_inverse(const KineticEnergyMatrix& total) {
  const double min_eig = total.min_eigenvalue();
  if (!(min_eig > tol::kPositiveDefinite))
    throw NotPositiveDefinite("kinetic-energy matrix is not positive definite (min eigenvalue " +
                              std::to_string(min_eig) + ")");
  const Eigen::LLT<Matrix6> llt(total.matrix());
  Matrix6 inv = llt.solve(Matrix6::Identity());
  inv = 0.5 * (inv + inv.transpose());
  return {inv.topLeftCorner<3, 3>(), inv.topRightCorner<3, 3>(), inv.bottomRightCorner<3, 3>()};
}

struct EffectiveMass {
  double value = 0.0;  // kg
  Vector3 direction = Vector3::UnitX();
  Quality quality = Quality::clean;
  bool direction_renormalized = false;
};

/// M = 1 / (vᵀ [Λ⁻¹]_uu v). Non-unit directions are normalized and flagged;
/// a zero direction is rejected.
inline EffectiveMass effective_mass(const KineticEnergyMatrix& total, const Vector3& direction,
                                    Quality quality = Quality::clean) {
  const double norm = direction.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw InvalidArgument("effective mass direction must be a non-zero finite vector");
  EffectiveMass out;
  out.direction = direction / norm;
  out.direction_renormalized = std::abs(norm - 1.0) > tol::kUnitDirection;
  out.quality = quality;
  const PartitionedInverse blocks = partition_inverse(total);
  out.value = 1.0 / out.direction.dot(blocks.translational_inv * out.direction);
  return out;
}

}  // namespace graspsafe
