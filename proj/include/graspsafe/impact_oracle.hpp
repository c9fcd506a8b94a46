#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "graspsafe/grasp_eval.hpp"

namespace graspsafe {

/// One-dimensional contact of a mass against a spring-damper wall:
///   M ẍ = −k x − c ẋ,  x(0) = 0,  ẋ(0) = approach_speed,
/// active while the wall is compressed (x > 0).
struct ImpactScenario {
  double effective_mass = 1.0;   // kg
  double approach_speed = 1.0;   // m/s
  double stiffness = 1e4;        // N/m
  double damping = 0.0;          // N·s/m
  double duration = 0.0;         // s
  double step = 0.0;             // s

  double natural_time() const { return std::sqrt(effective_mass / stiffness); }
  double max_stable_step() const { return tol::kImpactStepFactor * natural_time(); }

  /// Step at the stability bound; duration covers the undamped contact
  /// (half a period) with margin.
  static ImpactScenario with_default_timing(double mass, double speed, double stiffness, double damping) {
    ImpactScenario s{mass, speed, stiffness, damping, 0.0, 0.0};
    s.validate_physical();
    s.step = s.max_stable_step();
    s.duration = 1.25 * M_PI * s.natural_time();
    return s;
  }

  void validate_physical() const {
    const auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
    if (!positive(effective_mass)) throw InvalidArgument("impact: effective mass must be > 0");
    if (!positive(approach_speed)) throw InvalidArgument("impact: approach speed must be > 0");
    if (!positive(stiffness)) throw InvalidArgument("impact: stiffness must be > 0");
    if (!(damping >= 0.0) || !std::isfinite(damping)) throw InvalidArgument("impact: damping must be >= 0");
  }
};

struct ForceSample {
  double t;
  double force;  // N
};

struct ForceTrace {
  std::vector<ForceSample> samples;
  double peak_force = 0.0;
  double peak_time = 0.0;
  double max_compression = 0.0;  // m
  double contact_end = -1.0;     // s, −1 if still in contact at the end
};

/// Fixed-step RK4. Once the wall decompresses (x ≤ 0) the bodies separate and
/// the force stays zero.
inline ForceTrace simulate_impact(const ImpactScenario& s) {
  s.validate_physical();
  if (!(s.duration > 0.0)) throw InvalidArgument("impact: duration must be > 0");
  if (!(s.step > 0.0) || s.step > s.max_stable_step() * (1.0 + 1e-12))
    throw UnstableStep("impact: step " + std::to_string(s.step) + " s exceeds the stability bound " +
                       std::to_string(s.max_stable_step()) + " s");

  const double m = s.effective_mass, k = s.stiffness, c = s.damping;
  const auto accel = [&](double x, double v) { return (-k * x - c * v) / m; };
  const auto force = [&](double x, double v) { return std::max(0.0, k * x + c * v); };

  ForceTrace trace;
  const auto steps = static_cast<std::size_t>(std::ceil(s.duration / s.step));
  trace.samples.reserve(steps + 1);

  double x = 0.0, v = s.approach_speed;
  bool contact = true;
  const auto record = [&](double t) {
    const double f = contact ? force(x, v) : 0.0;
    trace.samples.push_back({t, f});
    if (f > trace.peak_force) {
      trace.peak_force = f;
      trace.peak_time = t;
    }
  };
  record(0.0);
  const double h = s.step;
  for (std::size_t i = 1; i <= steps; ++i) {
    if (contact) {
      const double k1x = v, k1v = accel(x, v);
      const double k2x = v + 0.5 * h * k1v, k2v = accel(x + 0.5 * h * k1x, v + 0.5 * h * k1v);
      const double k3x = v + 0.5 * h * k2v, k3v = accel(x + 0.5 * h * k2x, v + 0.5 * h * k2v);
      const double k4x = v + h * k3v, k4v = accel(x + h * k3x, v + h * k3v);
      x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      trace.max_compression = std::max(trace.max_compression, x);
      if (x <= 0.0) {
        contact = false;
        trace.contact_end = static_cast<double>(i) * h;
      }
    }
    record(static_cast<double>(i) * h);
  }
  return trace;
}

/// Undamped closed form v·√(k·M).
inline double undamped_peak_force(double mass, double speed, double stiffness) {
  return speed * std::sqrt(stiffness * mass);
}

struct ImpactPrediction {
  std::string grasp_id;
  double effective_mass = 0.0;
  double peak_force = 0.0;
  double peak_time = 0.0;
  ForceTrace trace;
};

/// Simulates each grasp's collision at `collision_sample` (1-based) with the
/// given approach speed; returns predictions by ascending peak force (ties by
/// grasp id).
inline std::vector<ImpactPrediction> predict_ordering(const std::vector<EffectiveMassProfile>& profiles,
                                                      int collision_sample, double speed, double stiffness,
                                                      double damping) {
  detail::check_equal_lengths(profiles);
  if (collision_sample < 1 || collision_sample > static_cast<int>(profiles.front().size()))
    throw InvalidArgument("collision sample " + std::to_string(collision_sample) + " outside 1.." +
                          std::to_string(profiles.front().size()));
  std::vector<ImpactPrediction> out;
  out.reserve(profiles.size());
  for (const auto& p : profiles) {
    const double mass = p.samples[collision_sample - 1].mass;
    ForceTrace trace = simulate_impact(ImpactScenario::with_default_timing(mass, speed, stiffness, damping));
    out.push_back({p.grasp_id, mass, trace.peak_force, trace.peak_time, std::move(trace)});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.peak_force != b.peak_force) return a.peak_force < b.peak_force;
    return a.grasp_id < b.grasp_id;
  });
  return out;
}

}  // namespace graspsafe
