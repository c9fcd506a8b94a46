#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace graspsafe {

/// Root of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI's JSON error output.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define GRASPSAFE_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(#Name, what) {}     \
  };

GRASPSAFE_DEFINE_ERROR(InvalidArgument)
GRASPSAFE_DEFINE_ERROR(SingularRepresentation)
GRASPSAFE_DEFINE_ERROR(DimensionMismatch)
GRASPSAFE_DEFINE_ERROR(NotPositiveDefinite)
GRASPSAFE_DEFINE_ERROR(NonPositiveDuration)
GRASPSAFE_DEFINE_ERROR(InvalidStep)
GRASPSAFE_DEFINE_ERROR(DegenerateTrajectory)
GRASPSAFE_DEFINE_ERROR(RingOutOfRange)
GRASPSAFE_DEFINE_ERROR(EmptyInput)
GRASPSAFE_DEFINE_ERROR(LengthMismatch)
GRASPSAFE_DEFINE_ERROR(UnstableStep)
GRASPSAFE_DEFINE_ERROR(ParseError)

#undef GRASPSAFE_DEFINE_ERROR

/// Scene or model invariant violation. `field()` is a dotted path such as
/// `object.mass_kg` or `chain.joints[3].axis`.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error("ValidationError", field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Damped least-squares IK gave up. Carries the best configuration found and
/// its residual; `sample_index()` is set when raised from trajectory tracking
/// (0 means the initial grasp pose, -1 means not applicable).
class IkDidNotConverge : public Error {
 public:
  IkDidNotConverge(const std::string& what, Eigen::VectorXd best_q,
                   double position_residual, double orientation_residual,
                   int sample_index = -1)
      : Error("IkDidNotConverge", what),
        best_q_(std::move(best_q)),
        position_residual_(position_residual),
        orientation_residual_(orientation_residual),
        sample_index_(sample_index) {}

  const Eigen::VectorXd& best_q() const noexcept { return best_q_; }
  double position_residual() const noexcept { return position_residual_; }
  double orientation_residual() const noexcept { return orientation_residual_; }
  int sample_index() const noexcept { return sample_index_; }

 private:
  Eigen::VectorXd best_q_;
  double position_residual_;
  double orientation_residual_;
  int sample_index_;
};

}  // namespace graspsafe
