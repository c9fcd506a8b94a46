#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "graspsafe/augmented_model.hpp"
#include "graspsafe/chain_dynamics.hpp"
#include "graspsafe/object_inertia.hpp"
#include "graspsafe/trajectory.hpp"

namespace graspsafe {

struct ProfileSample {
  double t = 0.0;
  double mass = 0.0;  // kg
  Quality quality = Quality::clean;
  Vector3 direction = Vector3::UnitX();
  JointState q;
};

/// Effective mass of one grasp at every trajectory sample.
struct EffectiveMassProfile {
  std::string grasp_id;
  std::vector<ProfileSample> samples;

  std::size_t size() const { return samples.size(); }
};

struct EvaluationOptions {
  /// Evaluate along this fixed base-frame direction instead of the
  /// instantaneous direction of motion.
  std::optional<Vector3> fixed_direction;
  IkOptions ik;
};

/// Object kinetic-energy matrix at the grasp frame in operational
/// coordinates for one end-effector pose.
inline KineticEnergyMatrix object_operational_matrix(const KineticEnergyMatrix& grasp_frame_matrix,
                                                     const Pose& ee_pose) {
  const OperationalCoords coords = OperationalCoords::from_pose(ee_pose);
  return to_operational(express_in_base(grasp_frame_matrix, ee_pose.orientation), coords);
}

/// Robot Λ in the same operational-coordinate representation as the object.
inline OperationalInertia robot_operational_matrix(const ChainModel& chain, const JointState& q,
                                                   const Pose& ee_pose) {
  OperationalInertia osi = operational_space_inertia(chain, q);
  osi.lambda = osi.lambda.congruence(euler_rate_map(OperationalCoords::from_pose(ee_pose)));
  return osi;
}

/// Direction of motion at samples[i]. When every sample is at rest (a single
/// sample at t_f, say) the straight path's chord direction is used.
inline Vector3 motion_direction(const QuinticTrajectory& traj, const std::vector<TrajectorySample>& samples,
                                std::size_t i) {
  try {
    return direction_at(samples, i);
  } catch (const DegenerateTrajectory&) {
    const Vector3 chord = traj.position(traj.duration) - traj.position(0.0);
    if (chord.norm() < tol::kZeroSpeed) throw;
    return chord.normalized();
  }
}

/// Tracks the trajectory with warm-started IK (the grasp pose at t = 0 is
/// solved from `q_seed`), then evaluates the augmented effective mass at
/// each sample along the local direction of motion.
inline EffectiveMassProfile evaluate_grasp(const ChainModel& chain, const RigidBodyInertia& object,
                                           const GraspCandidate& grasp, const QuinticTrajectory& traj,
                                           double dt, const JointState& q_seed,
                                           const EvaluationOptions& opt = {}) {
  object.validate();
  const std::vector<TrajectorySample> samples = sample(traj, dt);
  const KineticEnergyMatrix grasp_matrix = transform_to_grasp(com_energy_matrix(object), grasp);

  const auto solve = [&](const Pose& target, const JointState& seed, int index) {
    try {
      return inverse_kinematics(chain, target, seed, opt.ik);
    } catch (const IkDidNotConverge& e) {
      const std::string where = index == 0 ? "the grasp pose (t = 0)" : "sample " + std::to_string(index);
      throw IkDidNotConverge("grasp '" + grasp.id + "': IK failed at " + where + ": " + e.what(), e.best_q(),
                             e.position_residual(), e.orientation_residual(), index);
    }
  };

  EffectiveMassProfile profile;
  profile.grasp_id = grasp.id;
  profile.samples.reserve(samples.size());
  JointState q = solve(traj.pose(0.0), q_seed, 0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const TrajectorySample& s = samples[i];
    q = solve(s.pose, q, s.index);
    const OperationalInertia robot = robot_operational_matrix(chain, q, s.pose);
    const KineticEnergyMatrix total = augment(robot.lambda, object_operational_matrix(grasp_matrix, s.pose));
    const Vector3 v = opt.fixed_direction ? opt.fixed_direction->normalized() : motion_direction(traj, samples, i);
    const EffectiveMass m = effective_mass(total, v, robot.quality);
    profile.samples.push_back({s.t, m.value, m.quality, m.direction, q});
  }
  return profile;
}

/// How a profile collapses to one score.
struct Aggregator {
  enum class Kind { max, mean, at_sample } kind = Kind::max;
  int sample = 0;  // 1-based, for at_sample

  static Aggregator max() { return {Kind::max, 0}; }
  static Aggregator mean() { return {Kind::mean, 0}; }
  static Aggregator at_sample(int k) { return {Kind::at_sample, k}; }

  /// Accepts "max", "mean" and "at-sample=K".
  static Aggregator parse(const std::string& text) {
    if (text == "max") return max();
    if (text == "mean") return mean();
    const std::string prefix = "at-sample=";
    if (text.rfind(prefix, 0) == 0) {
      std::size_t used = 0;
      int k = 0;
      try {
        k = std::stoi(text.substr(prefix.size()), &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used > 0 && used == text.size() - prefix.size() && k >= 1) return at_sample(k);
    }
    throw InvalidArgument("unknown aggregator '" + text + "' (expected max, mean or at-sample=K)");
  }

  std::string name() const {
    switch (kind) {
      case Kind::max: return "max";
      case Kind::mean: return "mean";
      case Kind::at_sample: return "at-sample=" + std::to_string(sample);
    }
    return "?";
  }
};

struct AggregateResult {
  double value = 0.0;
  int excluded_samples = 0;  // near-singular samples left out of a max
  bool fallback_all = false; // every sample was near-singular, so all were used
};

/// max skips near-singular samples (unless all are); mean uses every sample.
inline AggregateResult aggregate(const EffectiveMassProfile& profile, const Aggregator& agg) {
  if (profile.samples.empty()) throw EmptyInput("profile '" + profile.grasp_id + "' has no samples");
  AggregateResult r;
  switch (agg.kind) {
    case Aggregator::Kind::max: {
      double best = -1.0;
      for (const auto& s : profile.samples) {
        if (s.quality == Quality::near_singular) {
          ++r.excluded_samples;
          continue;
        }
        best = std::max(best, s.mass);
      }
      if (best < 0.0) {
        r.fallback_all = true;
        r.excluded_samples = 0;
        for (const auto& s : profile.samples) best = std::max(best, s.mass);
      }
      r.value = best;
      break;
    }
    case Aggregator::Kind::mean: {
      double sum = 0.0;
      for (const auto& s : profile.samples) sum += s.mass;
      r.value = sum / static_cast<double>(profile.samples.size());
      break;
    }
    case Aggregator::Kind::at_sample: {
      if (agg.sample < 1 || agg.sample > static_cast<int>(profile.samples.size()))
        throw InvalidArgument("aggregator sample " + std::to_string(agg.sample) + " outside 1.." +
                              std::to_string(profile.samples.size()));
      r.value = profile.samples[agg.sample - 1].mass;
      break;
    }
  }
  return r;
}

struct RankingEntry {
  std::string grasp_id;
  double aggregate = 0.0;
  int excluded_samples = 0;
  bool fallback_all = false;
};

/// Entries ordered by ascending aggregate (ties by grasp id); the first entry
/// is the recommended grasp.
struct RankingReport {
  std::string aggregator;
  std::vector<RankingEntry> entries;
  std::vector<EffectiveMassProfile> profiles;  // input order
  std::vector<std::string> notes;

  const RankingEntry& recommended() const { return entries.front(); }
};

namespace detail {
inline void check_equal_lengths(const std::vector<EffectiveMassProfile>& profiles) {
  if (profiles.empty()) throw EmptyInput("no profiles to rank");
  for (const auto& p : profiles)
    if (p.size() != profiles.front().size())
      throw LengthMismatch("profile '" + p.grasp_id + "' has " + std::to_string(p.size()) + " samples, '" +
                           profiles.front().grasp_id + "' has " + std::to_string(profiles.front().size()));
}
}  // namespace detail

inline RankingReport rank_grasps(std::vector<EffectiveMassProfile> profiles, const Aggregator& agg) {
  detail::check_equal_lengths(profiles);
  RankingReport report;
  report.aggregator = agg.name();
  for (const auto& p : profiles) {
    const AggregateResult a = aggregate(p, agg);
    report.entries.push_back({p.grasp_id, a.value, a.excluded_samples, a.fallback_all});
    if (a.fallback_all)
      report.notes.push_back("grasp '" + p.grasp_id + "': every sample is near-singular; max taken over all");
    else if (a.excluded_samples > 0)
      report.notes.push_back("grasp '" + p.grasp_id + "': " + std::to_string(a.excluded_samples) +
                             " near-singular sample(s) excluded from max");
  }
  std::stable_sort(report.entries.begin(), report.entries.end(), [](const auto& a, const auto& b) {
    if (a.aggregate != b.aggregate) return a.aggregate < b.aggregate;
    return a.grasp_id < b.grasp_id;
  });
  report.profiles = std::move(profiles);
  return report;
}

/// Grasps × samples matrix of effective masses (kg).
inline Eigen::MatrixXd mass_map(const std::vector<EffectiveMassProfile>& profiles) {
  detail::check_equal_lengths(profiles);
  Eigen::MatrixXd m(profiles.size(), profiles.front().size());
  for (std::size_t g = 0; g < profiles.size(); ++g)
    for (std::size_t i = 0; i < profiles[g].size(); ++i) m(g, i) = profiles[g].samples[i].mass;
  return m;
}

/// Runs `fn(i)` for i in [0, count) on up to `threads` workers. Results are
/// written by index, so output order does not depend on scheduling. The first
/// exception (lowest index) is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace graspsafe
