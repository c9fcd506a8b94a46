#include <gtest/gtest.h>

#include "graspsafe/augmented_model.hpp"
#include "graspsafe/object_inertia.hpp"
#include "test_support.hpp"

using namespace graspsafe;

TEST(Augment, AdditiveIdentityAndSum) {
  std::mt19937 rng(30);
  const KineticEnergyMatrix robot(testkit::random_spd(rng));
  EXPECT_EQ(augment(robot, KineticEnergyMatrix::zero()).matrix(), robot.matrix());

  Vector6 up, down;
  up << 1, 2, 3, 4, 5, 6;
  down << 6, 5, 4, 3, 2, 1;
  const KineticEnergyMatrix sum = augment(KineticEnergyMatrix(up.asDiagonal()), KineticEnergyMatrix(down.asDiagonal()));
  EXPECT_TRUE(sum.matrix().isApprox(7.0 * Matrix6::Identity()));
}

TEST(Augment, MinEigenvalueNeverDrops) {
  std::mt19937 rng(31);
  for (int i = 0; i < 100; ++i) {
    const KineticEnergyMatrix robot(testkit::random_spd(rng));
    const RigidBodyInertia b = testkit::random_body(rng);
    const KineticEnergyMatrix obj = transform_to_grasp(com_energy_matrix(b), {"g", Pose{testkit::random_vector(rng), Rotation()}});
    EXPECT_GE(augment(robot, obj).min_eigenvalue(), robot.min_eigenvalue() - 1e-12);
  }
}

TEST(PartitionInverse, DecoupledCase) {
  Matrix6 m = Matrix6::Zero();
  m.topLeftCorner<3, 3>() = Vector3(2, 3, 4).asDiagonal();
  m.bottomRightCorner<3, 3>() = Vector3(5, 6, 7).asDiagonal();
  const PartitionedInverse p = partition_inverse(KineticEnergyMatrix(m));
  EXPECT_TRUE(p.translational_inv.isApprox(Matrix3(Vector3(0.5, 1.0 / 3, 0.25).asDiagonal())));
  EXPECT_TRUE(p.coupling.isZero(1e-15));
}

TEST(PartitionInverse, ReassemblesInverseAndSchurComplement) {
  std::mt19937 rng(32);
  for (int i = 0; i < 1000; ++i) {
    const Matrix6 l = testkit::random_spd(rng, 0.05);
    const PartitionedInverse p = partition_inverse(KineticEnergyMatrix(l));
    EXPECT_LT((p.assemble() * l - Matrix6::Identity()).cwiseAbs().maxCoeff(), 1e-9);

    const Matrix3 a = l.topLeftCorner<3, 3>(), b = l.topRightCorner<3, 3>(), d = l.bottomRightCorner<3, 3>();
    const Matrix3 schur = a - b * d.inverse() * b.transpose();
    EXPECT_LT((p.translational_inv * schur - Matrix3::Identity()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(PartitionInverse, RejectsIndefinite) {
  Matrix6 m = Matrix6::Identity();
  m(5, 5) = 0.0;
  EXPECT_THROW(partition_inverse(KineticEnergyMatrix(m)), NotPositiveDefinite);
  EXPECT_THROW(effective_mass(KineticEnergyMatrix::zero(), Vector3::UnitX()), NotPositiveDefinite);
}

TEST(EffectiveMass, DecoupledIsotropic) {
  Matrix6 m = Matrix6::Identity();
  m.topLeftCorner<3, 3>() *= 2.0;
  const EffectiveMass e = effective_mass(KineticEnergyMatrix(m), Vector3::UnitX());
  EXPECT_NEAR(e.value, 2.0, 1e-15);
  EXPECT_FALSE(e.direction_renormalized);
}

TEST(EffectiveMass, DirectionHandling) {
  const KineticEnergyMatrix k(Matrix6::Identity());
  EXPECT_THROW(effective_mass(k, Vector3::Zero()), InvalidArgument);
  const EffectiveMass e = effective_mass(k, Vector3(0, 3, 4));
  EXPECT_TRUE(e.direction_renormalized);
  EXPECT_TRUE(e.direction.isApprox(Vector3(0, 0.6, 0.8)));
  EXPECT_EQ(effective_mass(k, Vector3::UnitY(), Quality::near_singular).quality, Quality::near_singular);
}

TEST(EffectiveMass, MinimumOverDirectionsIsInverseLargestEigenvalue) {
  std::mt19937 rng(33);
  for (int i = 0; i < 50; ++i) {
    const KineticEnergyMatrix l(testkit::random_spd(rng));
    const PartitionedInverse p = partition_inverse(l);
    Eigen::SelfAdjointEigenSolver<Matrix3> es(p.translational_inv);
    const double lowest = 1.0 / es.eigenvalues()[2];
    EXPECT_NEAR(effective_mass(l, es.eigenvectors().col(2)).value, lowest, 1e-12 * lowest);
    for (int k = 0; k < 50; ++k) EXPECT_GE(effective_mass(l, testkit::random_unit(rng)).value, lowest * (1 - 1e-12));
  }
}

TEST(EffectiveMass, FreeBodyBoundedByTotalMass) {
  std::mt19937 rng(34);
  for (int i = 0; i < 200; ++i) {
    const RigidBodyInertia b = testkit::random_body(rng);
    const Vector3 r = testkit::random_vector(rng, 0.3);
    const KineticEnergyMatrix k = transform_to_grasp(com_energy_matrix(b), {"g", Pose{r, Rotation()}});
    EXPECT_LE(effective_mass(k, testkit::random_unit(rng)).value, b.mass * (1 + 1e-12));
    EXPECT_NEAR(effective_mass(k, r.normalized()).value, b.mass, 1e-12 * b.mass);
  }
}
