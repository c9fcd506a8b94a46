#include <gtest/gtest.h>

#include "graspsafe/impact_oracle.hpp"

using namespace graspsafe;

namespace {

ForceTrace undamped(double mass, double speed = 1.0, double k = 1e4) {
  return simulate_impact(ImpactScenario::with_default_timing(mass, speed, k, 0.0));
}

EffectiveMassProfile flat(const std::string& id, double mass, int n = 5) {
  EffectiveMassProfile p;
  p.grasp_id = id;
  for (int i = 0; i < n; ++i) p.samples.push_back({0.1 * (i + 1), mass, Quality::clean, Vector3::UnitX(), {}});
  return p;
}

}  // namespace

TEST(SimulateImpact, ClosedFormPeaks) {
  const ForceTrace a = undamped(1.0);
  EXPECT_NEAR(a.peak_force, 100.0, 0.5);
  EXPECT_NEAR(a.peak_time, M_PI / 2 * std::sqrt(1.0 / 1e4), 1e-5);
  EXPECT_NEAR(a.peak_time, 0.0157, 1e-4);
  EXPECT_NEAR(undamped(4.0).peak_force, 200.0, 1.0);
}

TEST(SimulateImpact, ContactEndsAfterHalfPeriod) {
  const ForceTrace t = undamped(2.0, 0.5);
  const double half = M_PI * std::sqrt(2.0 / 1e4);
  EXPECT_NEAR(t.contact_end, half, 1e-3 * half);
  EXPECT_EQ(t.samples.back().force, 0.0);
  EXPECT_NEAR(t.max_compression, 0.5 * std::sqrt(2.0 / 1e4), 1e-6);
}

TEST(SimulateImpact, ForceNeverNegative) {
  const ForceTrace t = simulate_impact(ImpactScenario::with_default_timing(1.0, 1.0, 1e4, 80.0));
  for (const auto& s : t.samples) EXPECT_GE(s.force, 0.0);
}

TEST(SimulateImpact, EnergyBound) {
  // Stored spring energy never exceeds the incoming kinetic energy.
  for (double c : {0.0, 20.0, 100.0}) {
    const ForceTrace t = simulate_impact(ImpactScenario::with_default_timing(1.5, 0.8, 1e4, c));
    EXPECT_LE(0.5 * 1e4 * t.max_compression * t.max_compression, 0.5 * 1.5 * 0.8 * 0.8 * (1 + 1e-9));
  }
}

TEST(SimulateImpact, SquareRootScaleLaw) {
  for (double m : {0.1, 1.0, 10.0}) {
    const double ratio = undamped(4.0 * m).peak_force / undamped(m).peak_force;
    EXPECT_NEAR(ratio, 2.0, 0.02);
  }
}

TEST(SimulateImpact, PeakGrowsWithMassSpeedAndStiffness) {
  double prev = 0.0;
  for (double m : {0.1, 0.3, 1.0, 3.0}) {
    for (double c : {0.0, 10.0}) {
      const double p = simulate_impact(ImpactScenario::with_default_timing(m, 1.0, 1e4, c)).peak_force;
      if (c == 0.0) {
        EXPECT_GT(p, prev);
        prev = p;
      }
    }
  }
  EXPECT_GT(undamped(1.0, 2.0).peak_force, undamped(1.0, 1.0).peak_force);
  EXPECT_GT(undamped(1.0, 1.0, 2e4).peak_force, undamped(1.0, 1.0, 1e4).peak_force);
}

TEST(SimulateImpact, RejectsUnstableStepAndBadInput) {
  ImpactScenario s = ImpactScenario::with_default_timing(1.0, 1.0, 1e4, 0.0);
  s.step *= 10.0;
  EXPECT_THROW(simulate_impact(s), UnstableStep);
  EXPECT_THROW(ImpactScenario::with_default_timing(0.0, 1.0, 1e4, 0.0), InvalidArgument);
  EXPECT_THROW(ImpactScenario::with_default_timing(1.0, -1.0, 1e4, 0.0), InvalidArgument);
  EXPECT_THROW(ImpactScenario::with_default_timing(1.0, 1.0, 1e4, -1.0), InvalidArgument);
}

TEST(PredictOrdering, FollowsEffectiveMass) {
  const auto out = predict_ordering({flat("c", 3.0), flat("a", 1.0), flat("b", 2.0)}, 2, 0.5, 1e4, 0.0);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].grasp_id, "a");
  EXPECT_EQ(out[1].grasp_id, "b");
  EXPECT_EQ(out[2].grasp_id, "c");
  for (const auto& p : out) EXPECT_NEAR(p.peak_force, undamped_peak_force(p.effective_mass, 0.5, 1e4), 5e-3 * p.peak_force);
}

TEST(PredictOrdering, TiesBrokenById) {
  const auto out = predict_ordering({flat("z", 1.0), flat("m", 1.0)}, 1, 1.0, 1e4, 0.0);
  EXPECT_EQ(out[0].grasp_id, "m");
  EXPECT_EQ(out[1].grasp_id, "z");
}

TEST(PredictOrdering, CollisionSampleRange) {
  EXPECT_THROW(predict_ordering({flat("a", 1.0)}, 0, 1.0, 1e4, 0.0), InvalidArgument);
  EXPECT_THROW(predict_ordering({flat("a", 1.0)}, 6, 1.0, 1e4, 0.0), InvalidArgument);
}
