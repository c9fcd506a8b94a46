// Command-line driver: rank grasps by post-grasp effective mass, dump
// per-grasp profiles, and run the impact model on a scene file.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "graspsafe/commands.hpp"
#include "graspsafe/demo_scenes.hpp"

namespace fs = std::filesystem;
using namespace graspsafe;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitKinematics = 2;

struct Options {
  std::string scene_path;
  std::string aggregator = "max";
  std::optional<double> dt;
  std::string out_dir = ".";
  std::string grasp_id;
  std::string demo_name;
  std::string emit_scene;
  std::size_t trace_stride = 10;
  bool json = false;
};

void print_ranking(const RankArtifact& a) {
  std::cout << "aggregator: " << a.ranking.aggregator << "\n";
  std::cout << "rank  grasp                 effective mass [kg]\n";
  for (std::size_t i = 0; i < a.ranking.entries.size(); ++i) {
    const auto& e = a.ranking.entries[i];
    std::printf("%4zu  %-20s  %s%s\n", i + 1, e.grasp_id.c_str(), format_number(e.aggregate).c_str(),
                i == 0 ? "   <- recommended" : "");
  }
  for (const auto& n : a.ranking.notes) std::cout << "note: " << n << "\n";
}

void print_impact(const ImpactArtifact& a) {
  const auto& c = a.summary["collision"];
  std::cout << "collision at sample " << c["sample_index"].get<int>() << " (t = "
            << format_number(c["time_s"].get<double>()) << " s), approach speed "
            << format_number(c["approach_speed_m_per_s"].get<double>()) << " m/s\n";
  std::cout << "grasp                 effective mass [kg]   peak force [N]\n";
  for (const auto& p : a.predictions)
    std::printf("%-20s  %-20s  %s\n", p.grasp_id.c_str(), format_number(p.effective_mass).c_str(),
                format_number(p.peak_force).c_str());
  std::cout << "min / median / max peak: " << a.summary["min_peak"]["id"].get<std::string>() << " / "
            << a.summary["median_peak"]["id"].get<std::string>() << " / "
            << a.summary["max_peak"]["id"].get<std::string>() << "\n";
  std::cout << "max/min peak ratio: " << format_number(a.summary["max_to_min_peak_ratio"].get<double>()) << "\n";
  std::cout << "peak-force ordering matches effective-mass ordering: "
            << (a.summary["orderings_agree"].get<bool>() ? "yes" : "NO") << "\n";
}

RankArtifact run_rank(const Scene& scene, const Options& o) {
  RankArtifact a = cmd_rank(scene, Aggregator::parse(o.aggregator));
  write_file(fs::path(o.out_dir) / "ranking.json", a.report.dump(2) + "\n");
  write_file(fs::path(o.out_dir) / "mass_map.csv", a.mass_map);
  if (o.json)
    std::cout << a.report.dump(2) << "\n";
  else
    print_ranking(a);
  return a;
}

ImpactArtifact run_impact(const Scene& scene, const Options& o) {
  ImpactArtifact a = cmd_simulate_impact(scene);
  write_file(fs::path(o.out_dir) / "impact_summary.json", a.summary.dump(2) + "\n");
  for (const auto& p : a.predictions)
    write_file(fs::path(o.out_dir) / ("force_trace_" + p.grasp_id + ".csv"), force_trace_csv(p.trace, o.trace_stride));
  if (o.json)
    std::cout << a.summary.dump(2) << "\n";
  else
    print_impact(a);
  return a;
}

int report_error(const Error& e, bool json) {
  const auto* ik = dynamic_cast<const IkDidNotConverge*>(&e);
  const int code = ik ? kExitKinematics : kExitError;
  if (json) {
    nlohmann::json err = {{"kind", e.kind()}, {"message", e.what()}, {"exit_code", code}};
    if (const auto* v = dynamic_cast<const ValidationError*>(&e)) err["field"] = v->field();
    if (ik) {
      err["sample_index"] = ik->sample_index();
      err["position_residual_m"] = ik->position_residual();
      err["orientation_residual_rad"] = ik->orientation_residual();
    }
    std::cout << nlohmann::json{{"error", err}}.dump(2) << "\n";
  } else {
    std::cerr << "error [" << e.kind() << "]: " << e.what() << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank candidate grasps by the effective mass of the robot+object system along a post-grasp path"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json, "Machine-readable JSON on stdout (results and errors)");

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--dt", o.dt, "Override the trajectory sampling step [s]");
    cmd->add_option("--out-dir", o.out_dir, "Directory for output files")->capture_default_str();
  };

  CLI::App* rank = app.add_subcommand("rank", "Rank every grasp in a scene");
  rank->add_option("scene", o.scene_path, "Scene JSON file")->required();
  rank->add_option("--aggregator", o.aggregator, "max | mean | at-sample=K")->capture_default_str();
  add_common(rank);

  CLI::App* profile = app.add_subcommand("profile", "Effective-mass profile (t, M) of one grasp as CSV");
  profile->add_option("scene", o.scene_path, "Scene JSON file")->required();
  profile->add_option("--grasp", o.grasp_id, "Grasp id")->required();
  profile->add_option("--dt", o.dt, "Override the trajectory sampling step [s]");
  std::optional<std::string> profile_out;
  profile->add_option("--out-dir", profile_out, "Write profile_<id>.csv here instead of stdout");

  CLI::App* impact = app.add_subcommand("simulate-impact", "Collide every grasp at the scene's collision sample");
  impact->add_option("scene", o.scene_path, "Scene JSON file")->required();
  impact->add_option("--trace-stride", o.trace_stride, "Write every N-th integration step to the trace CSVs")
      ->capture_default_str();
  add_common(impact);

  CLI::App* demo_cmd = app.add_subcommand("demo", "Run a built-in scene (rank + simulate-impact)");
  demo_cmd->add_option("name", o.demo_name, "book | tensor")->required()->check(CLI::IsMember({"book", "tensor"}));
  demo_cmd->add_option("--aggregator", o.aggregator, "max | mean | at-sample=K")->capture_default_str();
  demo_cmd->add_option("--emit-scene", o.emit_scene, "Also write the scene JSON to this path");
  add_common(demo_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*rank) {
      run_rank(with_step(parse_scene(o.scene_path), o.dt), o);
    } else if (*profile) {
      const Scene scene = with_step(parse_scene(o.scene_path), o.dt);
      const std::string csv = cmd_profile(scene, o.grasp_id);
      if (profile_out)
        write_file(fs::path(*profile_out) / ("profile_" + o.grasp_id + ".csv"), csv);
      else
        std::cout << csv;
    } else if (*impact) {
      run_impact(with_step(parse_scene(o.scene_path), o.dt), o);
    } else if (*demo_cmd) {
      const Scene scene = with_step(demo::scene_by_name(o.demo_name), o.dt);
      write_file(fs::path(o.out_dir) / (o.demo_name + ".scene.json"), write_scene_text(scene));
      if (!o.emit_scene.empty()) write_file(o.emit_scene, write_scene_text(scene));
      run_rank(scene, o);
      if (!o.json) std::cout << "\n";
      run_impact(scene, o);
    }
  } catch (const Error& e) {
    return report_error(e, o.json);
  } catch (const std::exception& e) {
    return report_error(Error("InternalError", e.what()), o.json);
  }
  return kExitOk;
}
