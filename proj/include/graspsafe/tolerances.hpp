#pragma once

// Numeric thresholds shared by every module. Kept in one table so the
// acceptance suite and the library agree on what "within tolerance" means.

namespace graspsafe::tol {

inline constexpr double kOrthonormality = 1e-9;   // R Rᵀ = I, det R = 1
inline constexpr double kSymmetry = 1e-9;         // kinetic-energy matrices
inline constexpr double kUnitAxis = 1e-9;         // joint axes, directions
inline constexpr double kSingularPitch = 1e-6;    // |cos(pitch)| guard for ZYX rates
inline constexpr double kJacobianSingular = 1e-6; // smallest singular value of J
inline constexpr double kOsiDamping = 1e-4;       // λ for the damped Λ fallback
inline constexpr double kPositiveDefinite = 1e-12;
inline constexpr double kUnitDirection = 1e-6;    // |v| deviation tolerated silently
inline constexpr double kZeroSpeed = 1e-8;        // trajectory rest threshold

inline constexpr double kIkPosition = 1e-4;       // m
inline constexpr double kIkOrientation = 1e-3;    // rad
inline constexpr int kIkMaxIterations = 200;
inline constexpr double kIkDamping = 1e-3;
inline constexpr double kIkStepClamp = 0.2;       // rad

inline constexpr double kImpactStepFactor = 1e-4; // dt <= factor * sqrt(M/k)

}  // namespace graspsafe::tol
