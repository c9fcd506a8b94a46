#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>

#include "graspsafe/spatial_math.hpp"

namespace graspsafe {

/// Symmetric 6×6 matrix K with kinetic energy ½ ẋᵀ K ẋ. Blocks follow the
/// linear-first layout: top-left translational (kg), bottom-right rotational
/// (kg·m²), off-diagonal coupling (kg·m).
///
/// Construction rejects asymmetric input and stores the exact symmetric part.
/// Positive definiteness is not enforced here because the zero matrix is a
/// legitimate "no load" object term; consumers that invert check it.
class KineticEnergyMatrix {
 public:
  KineticEnergyMatrix() : m_(Matrix6::Zero()) {}

  explicit KineticEnergyMatrix(const Matrix6& m) {
    if (!m.allFinite()) throw InvalidArgument("kinetic-energy matrix has non-finite entries");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > tol::kSymmetry * scale)
      throw InvalidArgument("kinetic-energy matrix is not symmetric");
    m_ = 0.5 * (m + m.transpose());
  }

  static KineticEnergyMatrix zero() { return {}; }

  const Matrix6& matrix() const { return m_; }
  Matrix3 translational() const { return m_.topLeftCorner<3, 3>(); }
  Matrix3 rotational() const { return m_.bottomRightCorner<3, 3>(); }
  Matrix3 coupling() const { return m_.topRightCorner<3, 3>(); }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix6> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
  }
  bool is_positive_definite() const { return min_eigenvalue() > tol::kPositiveDefinite; }

  double energy(const Vector6& xdot) const { return 0.5 * xdot.dot(m_ * xdot); }

  /// Congruence Aᵀ K A: re-expresses K for velocities y with x = A y.
  KineticEnergyMatrix congruence(const Matrix6& a) const {
    return KineticEnergyMatrix(a.transpose() * m_ * a);
  }

 private:
  Matrix6 m_;
};

}  // namespace graspsafe
