#pragma once

#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "graspsafe/grasp_eval.hpp"
#include "graspsafe/impact_oracle.hpp"
#include "graspsafe/scene.hpp"

namespace graspsafe {

inline constexpr const char* kToolName = "grasp_planner";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

/// Fixed CSV number format: 9 significant digits.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string fnv1a64_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string scene_digest(const Scene& scene) { return fnv1a64_hex(scene_to_json(scene).dump()); }

/// Worker count from GRASP_PLANNER_THREADS (default: hardware concurrency).
inline unsigned thread_budget() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GRASP_PLANNER_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) n = static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return n;
}

/// Effective-mass profiles of every grasp in scene order. Grasps are
/// evaluated concurrently; each one is deterministic on its own.
inline std::vector<EffectiveMassProfile> evaluate_scene(const Scene& scene, unsigned threads = thread_budget()) {
  const std::vector<ResolvedGrasp> grasps = resolve_grasps(scene);
  std::vector<EffectiveMassProfile> profiles(grasps.size());
  parallel_for(grasps.size(), threads, [&](std::size_t i) {
    profiles[i] = evaluate_grasp(scene.chain, grasps[i].object, grasps[i].candidate, grasps[i].trajectory,
                                 scene.trajectory.dt, scene.ik_seed);
  });
  return profiles;
}

inline std::string mass_map_csv(const std::vector<EffectiveMassProfile>& profiles) {
  const Eigen::MatrixXd map = mass_map(profiles);
  std::string out = "grasp_id";
  for (const auto& s : profiles.front().samples) out += "," + format_number(s.t);
  out += "\n";
  for (Eigen::Index g = 0; g < map.rows(); ++g) {
    out += profiles[g].grasp_id;
    for (Eigen::Index i = 0; i < map.cols(); ++i) out += "," + format_number(map(g, i));
    out += "\n";
  }
  return out;
}

inline std::string profile_csv(const EffectiveMassProfile& profile) {
  std::string out = "t_s,effective_mass_kg,quality\n";
  for (const auto& s : profile.samples)
    out += format_number(s.t) + "," + format_number(s.mass) + "," + to_string(s.quality) + "\n";
  return out;
}

/// Writes every `stride`-th sample plus the peak sample.
inline std::string force_trace_csv(const ForceTrace& trace, std::size_t stride = 1) {
  stride = std::max<std::size_t>(1, stride);
  std::string out = "t_s,force_n\n";
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const auto& s = trace.samples[i];
    if (i % stride == 0 || i + 1 == trace.samples.size() || s.t == trace.peak_time)
      out += format_number(s.t) + "," + format_number(s.force) + "\n";
  }
  return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("IoError", "cannot write '" + path.string() + "'");
  out << text;
}

/// Scene with the sampling step optionally overridden from the command line.
inline Scene with_step(Scene scene, std::optional<double> dt) {
  if (dt) {
    if (!(*dt > 0.0) || *dt > scene.trajectory.duration)
      throw InvalidArgument("--dt must satisfy 0 < dt <= trajectory duration");
    if (scene.collision.sample_index) {
      scene.collision.time = *scene.collision.sample_index * scene.trajectory.dt;
      scene.collision.sample_index.reset();
    }
    if (!scene.collision.time) scene.collision.time = scene.trajectory.duration;
    scene.trajectory.dt = *dt;
  }
  collision_sample(scene);
  return scene;
}

struct RankArtifact {
  nlohmann::json report;
  std::string mass_map;
  RankingReport ranking;
};

inline RankArtifact cmd_rank(const Scene& scene, const Aggregator& agg, unsigned threads = thread_budget()) {
  std::vector<EffectiveMassProfile> profiles = evaluate_scene(scene, threads);
  RankArtifact a;
  a.mass_map = mass_map_csv(profiles);
  a.ranking = rank_grasps(std::move(profiles), agg);

  nlohmann::json times = nlohmann::json::array();
  for (const auto& s : a.ranking.profiles.front().samples) times.push_back(s.t);
  nlohmann::json grasps = nlohmann::json::array();
  for (std::size_t r = 0; r < a.ranking.entries.size(); ++r) {
    const RankingEntry& e = a.ranking.entries[r];
    const auto it = std::find_if(a.ranking.profiles.begin(), a.ranking.profiles.end(),
                                 [&](const auto& p) { return p.grasp_id == e.grasp_id; });
    nlohmann::json masses = nlohmann::json::array(), quality = nlohmann::json::array();
    for (const auto& s : it->samples) {
      masses.push_back(s.mass);
      quality.push_back(to_string(s.quality));
    }
    grasps.push_back({{"id", e.grasp_id},
                      {"rank", r + 1},
                      {"aggregate_kg", e.aggregate},
                      {"excluded_samples", e.excluded_samples},
                      {"effective_mass_kg", masses},
                      {"quality", quality}});
  }
  nlohmann::json ordering = nlohmann::json::array();
  for (const auto& e : a.ranking.entries) ordering.push_back(e.grasp_id);
  a.report = {{"schema_version", kReportSchemaVersion},
              {"tool", kToolName},
              {"tool_version", kToolVersion},
              {"scene", {{"name", scene.name}, {"digest_fnv1a64", scene_digest(scene)}}},
              {"aggregator", a.ranking.aggregator},
              {"sample_times_s", times},
              {"ordering", ordering},
              {"recommended", a.ranking.recommended().grasp_id},
              {"grasps", grasps},
              {"notes", a.ranking.notes}};
  return a;
}

inline std::string cmd_profile(const Scene& scene, const std::string& grasp_id) {
  const std::vector<ResolvedGrasp> grasps = resolve_grasps(scene);
  const auto it = std::find_if(grasps.begin(), grasps.end(), [&](const auto& g) { return g.candidate.id == grasp_id; });
  if (it == grasps.end()) throw InvalidArgument("scene has no grasp with id '" + grasp_id + "'");
  const EffectiveMassProfile p =
      evaluate_grasp(scene.chain, it->object, it->candidate, it->trajectory, scene.trajectory.dt, scene.ik_seed);
  return profile_csv(p);
}

struct ImpactArtifact {
  nlohmann::json summary;
  std::vector<ImpactPrediction> predictions;  // ascending peak force
  std::vector<EffectiveMassProfile> profiles;
};

/// Collision at the scene's collision sample for every grasp. The approach
/// speed is the end-effector speed of each grasp's trajectory there.
inline ImpactArtifact cmd_simulate_impact(const Scene& scene, unsigned threads = thread_budget()) {
  ImpactArtifact a;
  a.profiles = evaluate_scene(scene, threads);
  const int k = collision_sample(scene);
  const std::vector<ResolvedGrasp> grasps = resolve_grasps(scene);
  const double t = a.profiles.front().samples[k - 1].t;
  const double speed = grasps.front().trajectory.velocity(t).norm();
  if (!(speed > tol::kZeroSpeed))
    throw InvalidArgument("collision sample " + std::to_string(k) + " is at rest; pick a sample where the path moves");
  for (const auto& g : grasps)
    if (std::abs(g.trajectory.velocity(t).norm() - speed) > 1e-9 * speed)
      throw InvalidArgument("grasp trajectories have different speeds at the collision sample");

  a.predictions = predict_ordering(a.profiles, k, speed, scene.collision.stiffness, scene.collision.damping);

  std::vector<std::pair<double, std::string>> by_mass;
  for (const auto& p : a.profiles) by_mass.emplace_back(p.samples[k - 1].mass, p.grasp_id);
  std::sort(by_mass.begin(), by_mass.end());
  nlohmann::json mass_order = nlohmann::json::array(), force_order = nlohmann::json::array();
  for (const auto& [m, id] : by_mass) mass_order.push_back(id);
  bool agree = true;
  for (std::size_t i = 0; i < a.predictions.size(); ++i) {
    force_order.push_back(a.predictions[i].grasp_id);
    agree = agree && a.predictions[i].grasp_id == by_mass[i].second;
  }

  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : a.predictions) {
    nlohmann::json row = {{"id", p.grasp_id},
                          {"effective_mass_kg", p.effective_mass},
                          {"peak_force_n", p.peak_force},
                          {"peak_time_s", p.peak_time}};
    if (scene.collision.damping == 0.0) {
      const double analytic = undamped_peak_force(p.effective_mass, speed, scene.collision.stiffness);
      row["analytic_peak_n"] = analytic;
      row["analytic_rel_error"] = std::abs(p.peak_force - analytic) / analytic;
    }
    rows.push_back(row);
  }
  const auto& lo = a.predictions.front();
  const auto& hi = a.predictions.back();
  const auto& mid = a.predictions[(a.predictions.size() - 1) / 2];
  a.summary = {{"schema_version", kReportSchemaVersion},
               {"tool", kToolName},
               {"tool_version", kToolVersion},
               {"scene", {{"name", scene.name}, {"digest_fnv1a64", scene_digest(scene)}}},
               {"collision", {{"sample_index", k},
                              {"time_s", t},
                              {"approach_speed_m_per_s", speed},
                              {"stiffness_n_per_m", scene.collision.stiffness},
                              {"damping_ns_per_m", scene.collision.damping}}},
               {"ordering_by_peak_force", force_order},
               {"ordering_by_effective_mass", mass_order},
               {"orderings_agree", agree},
               {"min_peak", {{"id", lo.grasp_id}, {"peak_force_n", lo.peak_force}}},
               {"median_peak", {{"id", mid.grasp_id}, {"peak_force_n", mid.peak_force}}},
               {"max_peak", {{"id", hi.grasp_id}, {"peak_force_n", hi.peak_force}}},
               {"max_to_min_peak_ratio", hi.peak_force / lo.peak_force},
               {"grasps", rows}};
  return a;
}

}  // namespace graspsafe
