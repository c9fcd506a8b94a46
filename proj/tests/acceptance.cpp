// Acceptance suite: one PASS/FAIL line per criterion, each with its measured
// value, tolerance and runtime budget. Exit status is non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "graspsafe/commands.hpp"
#include "graspsafe/demo_scenes.hpp"
#include "test_support.hpp"

using namespace graspsafe;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string shipped(const std::string& name) { return std::string(GRASPSAFE_SCENE_DIR) + "/" + name + ".scene.json"; }

Outcome quintic_boundaries() {
  const Pose start = Pose::translation(1.0, 0.0, 0.03), end = Pose::translation(1.1, -0.38, 0.16);
  const QuinticTrajectory q = fit_quintic(start, end, 2.0);
  double worst = 0.0;
  worst = std::max(worst, (q.position(0.0) - start.position).cwiseAbs().maxCoeff());
  worst = std::max(worst, (q.position(2.0) - end.position).cwiseAbs().maxCoeff());
  for (double t : {0.0, 2.0}) {
    worst = std::max(worst, q.velocity(t).cwiseAbs().maxCoeff());
    worst = std::max(worst, q.acceleration(t).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-9, "max boundary error " + fmt("%.3g", worst) + " (tol 1e-9)"};
}

Outcome sampling_count() {
  const auto s = sample(fit_quintic(Pose::translation(1, 0, 0.03), Pose::translation(1.1, -0.38, 0.16), 2.0), 0.1);
  return {s.size() == 20, std::to_string(s.size()) + " samples (expected 20)"};
}

Outcome effective_mass_oracle() {
  std::mt19937 rng(2024);
  double worst_rel = 0.0, worst_parallel = 0.0, worst_excess = -1.0;
  for (int i = 0; i < 1000; ++i) {
    const RigidBodyInertia body = testkit::random_body(rng);
    const Vector3 r = testkit::random_vector(rng, 0.3);
    const Rotation r_cg = testkit::random_rotation(rng);  // grasp axes in CoM axes
    const Rotation r_ee = testkit::random_rotation(rng);  // grasp axes in base axes
    const GraspCandidate grasp{"g", Pose{r, r_cg}};
    const Pose ee{testkit::random_vector(rng), r_ee};
    const KineticEnergyMatrix op =
        to_operational(express_in_base(transform_to_grasp(com_energy_matrix(body), grasp), r_ee),
                       OperationalCoords::from_pose(ee));

    const Vector3 v_base = testkit::random_unit(rng);
    const Vector3 v_com = r_cg * (r_ee.inverse() * v_base);
    const double got = effective_mass(op, v_base).value;
    const double oracle = testkit::impulse_effective_mass(body.mass, body.inertia, Vector3::Zero(), r, v_com);
    worst_rel = std::max(worst_rel, std::abs(got - oracle) / oracle);
    worst_excess = std::max(worst_excess, (got - body.mass) / body.mass);

    // Direction along the lever arm: no rotation is excited.
    const Vector3 v_par = r_ee * (r_cg.inverse() * r.normalized());
    worst_parallel = std::max(worst_parallel, std::abs(effective_mass(op, v_par).value - body.mass) / body.mass);
  }
  const bool ok = worst_rel <= 1e-9 && worst_excess <= 1e-12 && worst_parallel <= 1e-9;
  return {ok, "max rel error vs impulse oracle " + fmt("%.3g", worst_rel) + " (tol 1e-9); max (M-m)/m " +
                  fmt("%.3g", worst_excess) + " (<= 0); r||v rel error " + fmt("%.3g", worst_parallel) +
                  " (tol 1e-9)"};
}

Outcome schur_identity() {
  std::mt19937 rng(7);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Matrix6 l = testkit::random_spd(rng, 0.05);
    const PartitionedInverse p = partition_inverse(KineticEnergyMatrix(l));
    worst = std::max(worst, (p.assemble() * l - Matrix6::Identity()).cwiseAbs().maxCoeff());
    const Matrix3 a = l.topLeftCorner<3, 3>(), b = l.topRightCorner<3, 3>(), d = l.bottomRightCorner<3, 3>();
    worst = std::max(worst, (p.translational_inv * (a - b * d.inverse() * b.transpose()) - Matrix3::Identity())
                                .cwiseAbs()
                                .maxCoeff());
  }
  return {worst <= 1e-9, "max |blocks*Lambda - I| " + fmt("%.3g", worst) + " over 1000 matrices (tol 1e-9)"};
}

Outcome dynamics_cross_checks() {
  std::mt19937 rng(99);
  double worst_jac = 0.0, worst_energy = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 5;
    const ChainModel m = testkit::random_chain(rng, n);
    const JointState q = testkit::random_q(rng, n);
    const Jacobian jac = geometric_jacobian(m, q);
    const Pose p0 = forward_kinematics(m, q);
    const double eps = 1e-6;
    for (int i = 0; i < n; ++i) {
      JointState qp = q;
      qp[i] += eps;
      const Pose p1 = forward_kinematics(m, qp);
      Vector6 fd;
      fd << (p1.position - p0.position) / eps, orientation_error(p1.orientation, p0.orientation) / eps;
      worst_jac = std::max(worst_jac, (fd - jac.col(i)).cwiseAbs().maxCoeff());
    }
    const JointState qd = testkit::random_q(rng, n, 1.0);
    const double e = 0.5 * qd.dot(mass_matrix(m, q) * qd);
    worst_energy = std::max(worst_energy, std::abs(e - testkit::per_link_energy(m, q, qd)));
  }
  return {worst_jac < 1e-5 && worst_energy < 1e-9, "Jacobian vs finite differences " + fmt("%.3g", worst_jac) +
                                                       " (tol 1e-5); energy vs per-link sum " +
                                                       fmt("%.3g", worst_energy) + " J (tol 1e-9)"};
}

Outcome book_ordering() {
  const ImpactArtifact a = cmd_simulate_impact(parse_scene(shipped("book")));
  const bool agree = a.summary["orderings_agree"].get<bool>();
  const double ratio = a.summary["max_to_min_peak_ratio"].get<double>();
  std::string order;
  for (const auto& p : a.predictions) order += (order.empty() ? "" : " < ") + p.grasp_id;
  return {agree && ratio > 1.05, std::string("peak order ") + order + (agree ? " matches" : " DIFFERS FROM") +
                                     " effective-mass order; max/min peak ratio " + fmt("%.4f", ratio) +
                                     " (need > 1.05)"};
}

Outcome tensor_discrimination() {
  const Scene scene = parse_scene(shipped("tensor"));
  const RankArtifact a = cmd_rank(scene, Aggregator::max());
  std::vector<double> agg;
  for (const auto& e : a.ranking.entries) agg.push_back(e.aggregate);
  std::sort(agg.begin(), agg.end());
  const double median = 0.5 * (agg[(agg.size() - 1) / 2] + agg[agg.size() / 2]);
  const double spread = (agg.back() - agg.front()) / median;
  const Eigen::MatrixXd map = mass_map(a.ranking.profiles);
  std::istringstream csv(a.mass_map);
  std::string line;
  int rows = -1;
  bool cols_ok = true;
  while (std::getline(csv, line)) {
    ++rows;
    cols_ok = cols_ok && std::count(line.begin(), line.end(), ',') == sample_count(scene.trajectory);
  }
  const double total = build_object(scene.object).mass;
  const bool ok = spread >= 0.05 && map.rows() == 20 && map.cols() == sample_count(scene.trajectory) && rows == 20 &&
                  cols_ok && std::abs(total - 0.43) < 1e-12;
  return {ok, "spread (max-min)/median " + fmt("%.4f", spread) + " (need >= 0.05); mass map " +
                  std::to_string(map.rows()) + "x" + std::to_string(map.cols()) + ", CSV " + std::to_string(rows) +
                  " rows; object mass " + fmt("%.3f", total) + " kg"};
}

Outcome impact_analytics() {
  double worst_peak = 0.0, worst_scale = 0.0;
  std::vector<double> masses, peaks;
  for (int i = 0; i <= 30; ++i) {
    const double m = 0.1 * std::pow(500.0, i / 30.0);  // 0.1 .. 50 kg
    const ForceTrace t = simulate_impact(ImpactScenario::with_default_timing(m, 0.4, 1e4, 0.0));
    worst_peak = std::max(worst_peak, std::abs(t.peak_force - undamped_peak_force(m, 0.4, 1e4)) / undamped_peak_force(m, 0.4, 1e4));
    masses.push_back(m);
    peaks.push_back(t.peak_force);
  }
  for (std::size_t i = 0; i < masses.size(); ++i)
    for (std::size_t j = i + 1; j < masses.size(); ++j)
      worst_scale = std::max(worst_scale, std::abs(peaks[j] / peaks[i] / std::sqrt(masses[j] / masses[i]) - 1.0));
  return {worst_peak <= 5e-3 && worst_scale <= 1e-2, "max peak error vs v*sqrt(kM) " + fmt("%.3g", worst_peak) +
                                                         " (tol 0.5%); sqrt(M) scale-law error " +
                                                         fmt("%.3g", worst_scale) + " (tol 1%)"};
}

Outcome determinism() {
  const RankArtifact a = cmd_rank(parse_scene(shipped("book")), Aggregator::max());
  const RankArtifact b = cmd_rank(parse_scene(shipped("book")), Aggregator::max());
  const bool same = a.mass_map == b.mass_map && a.report.dump() == b.report.dump();
  return {same, std::string("mass-map CSV ") + (same ? "byte-identical" : "DIFFERS") + " across runs (" +
                    std::to_string(a.mass_map.size()) + " bytes)"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "quintic boundary conditions", 1.0, quintic_boundaries},
      {2, "sampling count", 1.0, sampling_count},
      {3, "effective mass vs impulse oracle", 30.0, effective_mass_oracle},
      {4, "Schur/partition identity", 10.0, schur_identity},
      {5, "dynamics cross-checks", 30.0, dynamics_cross_checks},
      {6, "book ordering reproduction", 20.0, book_ordering},
      {7, "tensor-object discrimination", 60.0, tensor_discrimination},
      {8, "impact-oracle analytics", 10.0, impact_analytics},
      {9, "determinism", 20.0, determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = o.ok && secs < c.budget_s;
    failures += ok ? 0 : 1;
    std::printf("%s criterion %d (%s): %s; runtime %.3f s (limit %.0f s)\n", ok ? "PASS" : "FAIL", c.id,
                c.title.c_str(), o.detail.c_str(), secs, c.budget_s);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
