#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "graspsafe/chain_dynamics.hpp"
#include "graspsafe/object_inertia.hpp"
#include "graspsafe/trajectory.hpp"

namespace graspsafe {

struct CuboidSpec {
  double mass = 0.0;
  Vector3 dims = Vector3::Zero();
};

using ObjectSpec = std::variant<RigidBodyInertia, CuboidSpec, TensorObjectConfig>;

/// Grasp as authored in a scene: the grasp frame in the object's reference
/// frame. Tensor-object scenes may override the ring layout per grasp.
struct GraspSpec {
  std::string id;
  Pose pose_in_object;
  std::optional<std::array<double, 5>> ring_positions;
};

struct TrajectorySpec {
  /// end_effector: start/end are end-effector poses shared by every grasp.
  /// object: start/end are object reference-frame poses; each grasp's
  /// end-effector path follows from its grasp pose.
  enum class Frame { end_effector, object } frame = Frame::end_effector;
  Pose start;
  Pose end;
  double duration = 2.0;  // s
  double dt = 0.1;        // s
};

struct CollisionSpec {
  std::optional<int> sample_index;  // 1-based
  std::optional<double> time;       // s
  double stiffness = 1e4;           // N/m
  double damping = 0.0;             // N·s/m
};

struct Scene {
  std::string name;
  ChainModel chain{{ChainLink{JointSpec{}, LinkInertia{1.0, Vector3::Zero(), Matrix3::Identity()}}}};
  ObjectSpec object;
  std::vector<GraspSpec> grasps;
  TrajectorySpec trajectory;
  CollisionSpec collision;
  JointState ik_seed;
};

/// A grasp ready for evaluation: candidate relative to the CoM frame, the
/// object it holds and the end-effector trajectory it implies.
struct ResolvedGrasp {
  GraspCandidate candidate;
  RigidBodyInertia object;
  QuinticTrajectory trajectory;
};

inline RigidBodyInertia build_object(const ObjectSpec& spec,
                                     const std::optional<std::array<double, 5>>& rings = std::nullopt) {
  if (const auto* body = std::get_if<RigidBodyInertia>(&spec)) {
    body->validate();
    return *body;
  }
  if (const auto* cub = std::get_if<CuboidSpec>(&spec)) return build_cuboid(cub->mass, cub->dims);
  TensorObjectConfig cfg = std::get<TensorObjectConfig>(spec);
  if (rings) cfg.ring_positions = *rings;
  return build_tensor_object(cfg);
}

inline int sample_count(const TrajectorySpec& t) {
  return std::max(1, static_cast<int>(std::lround(t.duration / t.dt)));
}

/// 1-based collision sample; a time is mapped to the nearest sample.
inline int collision_sample(const Scene& scene) {
  const int n = sample_count(scene.trajectory);
  int k = 0;
  if (scene.collision.sample_index) {
    k = *scene.collision.sample_index;
  } else if (scene.collision.time) {
    k = static_cast<int>(std::lround(*scene.collision.time / scene.trajectory.dt));
    k = std::clamp(k, 1, n);
  } else {
    k = n;
  }
  if (k < 1 || k > n)
    throw ValidationError("collision", "collision sample " + std::to_string(k) + " outside 1.." + std::to_string(n));
  return k;
}

inline std::vector<ResolvedGrasp> resolve_grasps(const Scene& scene) {
  std::vector<ResolvedGrasp> out;
  out.reserve(scene.grasps.size());
  for (std::size_t i = 0; i < scene.grasps.size(); ++i) {
    const GraspSpec& g = scene.grasps[i];
    RigidBodyInertia body;
    try {
      body = build_object(scene.object, g.ring_positions);
    } catch (const RingOutOfRange& e) {
      throw ValidationError("grasps[" + std::to_string(i) + "].ring_positions_m", e.what());
    }
    ResolvedGrasp r;
    r.candidate = {g.id, pose_inverse(body.com_pose) * g.pose_in_object};
    r.object = body;
    const TrajectorySpec& t = scene.trajectory;
    if (t.frame == TrajectorySpec::Frame::object)
      r.trajectory = fit_quintic(t.start * g.pose_in_object, t.end * g.pose_in_object, t.duration);
    else
      r.trajectory = fit_quintic(t.start, t.end, t.duration);
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace scene_json {

using nlohmann::json;

inline const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError(path, "expected a finite number");
  return v;
}

inline double number_at(const json& j, const std::string& key, const std::string& path) {
  return number(require(j, key, path), join(path, key));
}

inline double positive_at(const json& j, const std::string& key, const std::string& path) {
  const double v = number_at(j, key, path);
  if (!(v > 0.0)) throw ValidationError(join(path, key), "must be > 0");
  return v;
}

inline Eigen::VectorXd vector(const json& j, const std::string& path, int size) {
  if (!j.is_array() || (size >= 0 && static_cast<int>(j.size()) != size))
    throw ValidationError(path, size >= 0 ? "expected an array of " + std::to_string(size) + " numbers"
                                          : "expected an array of numbers");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

inline Vector3 vec3(const json& j, const std::string& path) { return vector(j, path, 3); }

inline Matrix3 mat3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw ValidationError(path, "expected a 3×3 nested array");
  Matrix3 m;
  for (int r = 0; r < 3; ++r) m.row(r) = vec3(j[r], path + "[" + std::to_string(r) + "]").transpose();
  return m;
}

inline Pose pose(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected a pose object");
  Pose p;
  if (j.contains("position_m")) p.position = vec3(j["position_m"], join(path, "position_m"));
  if (j.contains("euler_zyx_rad") && j.contains("rotation"))
    throw ValidationError(path, "give either euler_zyx_rad or rotation, not both");
  if (j.contains("euler_zyx_rad")) {
    const Vector3 e = vec3(j["euler_zyx_rad"], join(path, "euler_zyx_rad"));
    p.orientation = Rotation::from_euler_zyx(e[0], e[1], e[2]);
  } else if (j.contains("rotation")) {
    const std::string f = join(path, "rotation");
    try {
      p.orientation = Rotation(mat3(j["rotation"], f));
    } catch (const InvalidArgument& e) {
      throw ValidationError(f, e.what());
    }
  }
  return p;
}

inline json to_json(const Vector3& v) { return json::array({v[0] + 0.0, v[1] + 0.0, v[2] + 0.0}); }  // no -0.0
inline json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}
inline json to_json(const Matrix3& m) {
  json a = json::array();
  for (int r = 0; r < 3; ++r) a.push_back(json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return a;
}
inline json to_json(const Pose& p) {
  return {{"position_m", to_json(p.position)}, {"euler_zyx_rad", to_json(p.orientation.euler_zyx())}};
}

inline ChainModel chain(const json& j, const std::string& path) {
  const json& joints = require(j, "joints", path);
  const std::string jp = join(path, "joints");
  if (!joints.is_array() || joints.empty()) throw ValidationError(jp, "expected a non-empty array");
  std::vector<ChainLink> links;
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const std::string p = jp + "[" + std::to_string(i) + "]";
    const json& jj = joints[i];
    ChainLink l;
    l.joint.name = jj.value("name", "joint" + std::to_string(i + 1));
    if (jj.contains("type") && jj["type"] != "revolute")
      throw ValidationError(join(p, "type"), "only revolute joints are supported");
    if (jj.contains("parent_transform")) l.joint.parent_transform = pose(jj["parent_transform"], join(p, "parent_transform"));
    l.joint.axis = vec3(require(jj, "axis", p), join(p, "axis"));
    const Eigen::VectorXd lim = vector(require(jj, "limits_rad", p), join(p, "limits_rad"), 2);
    l.joint.lower = lim[0];
    l.joint.upper = lim[1];
    const json& link = require(jj, "link", p);
    const std::string lp = join(p, "link");
    l.link.mass = number_at(link, "mass_kg", lp);
    l.link.com = vec3(require(link, "com_m", lp), join(lp, "com_m"));
    l.link.inertia = mat3(require(link, "inertia_kgm2", lp), join(lp, "inertia_kgm2"));
    links.push_back(std::move(l));
  }
  const Pose base = j.contains("base_pose") ? pose(j["base_pose"], join(path, "base_pose")) : Pose{};
  const Pose tool = j.contains("tool_transform") ? pose(j["tool_transform"], join(path, "tool_transform")) : Pose{};
  return ChainModel(std::move(links), base, tool);
}

inline json chain_to_json(const ChainModel& c) {
  json joints = json::array();
  for (const auto& l : c.links()) {
    joints.push_back({{"name", l.joint.name},
                      {"type", "revolute"},
                      {"parent_transform", to_json(l.joint.parent_transform)},
                      {"axis", to_json(l.joint.axis)},
                      {"limits_rad", json::array({l.joint.lower, l.joint.upper})},
                      {"link",
                       {{"mass_kg", l.link.mass}, {"com_m", to_json(l.link.com)}, {"inertia_kgm2", to_json(l.link.inertia)}}}});
  }
  return {{"base_pose", to_json(c.base_pose())}, {"tool_transform", to_json(c.tool_transform())}, {"joints", joints}};
}

inline std::array<double, 5> rings(const json& j, const std::string& path) {
  const Eigen::VectorXd v = vector(j, path, 5);
  return {v[0], v[1], v[2], v[3], v[4]};
}

inline ObjectSpec object(const json& j, const std::string& path) {
  const json& type = require(j, "type", path);
  if (!type.is_string()) throw ValidationError(join(path, "type"), "expected a string");
  const std::string t = type.get<std::string>();
  if (t == "cuboid") {
    CuboidSpec c{positive_at(j, "mass_kg", path), vec3(require(j, "dims_m", path), join(path, "dims_m"))};
    if (!(c.dims.array() > 0.0).all()) throw ValidationError(join(path, "dims_m"), "dimensions must be > 0");
    return c;
  }
  if (t == "tensor") {
    TensorObjectConfig c;
    c.handle_length = positive_at(j, "handle_length_m", path);
    c.cylinder_length = positive_at(j, "cylinder_length_m", path);
    c.cylinder_mass = positive_at(j, "cylinder_mass_kg", path);
    c.ring_mass = positive_at(j, "ring_mass_kg", path);
    c.cylinder_radius = positive_at(j, "cylinder_radius_m", path);
    c.ring_radius = positive_at(j, "ring_radius_m", path);
    c.ring_positions = rings(require(j, "ring_positions_m", path), join(path, "ring_positions_m"));
    try {
      build_tensor_object(c);
    } catch (const RingOutOfRange& e) {
      throw ValidationError(join(path, "ring_positions_m"), e.what());
    }
    return c;
  }
  if (t == "rigid_body") {
    RigidBodyInertia b;
    b.mass = positive_at(j, "mass_kg", path);
    if (j.contains("com_pose")) b.com_pose = pose(j["com_pose"], join(path, "com_pose"));
    b.inertia = mat3(require(j, "inertia_kgm2", path), join(path, "inertia_kgm2"));
    b.validate(path);
    return b;
  }
  throw ValidationError(join(path, "type"), "unknown object type '" + t + "' (cuboid, tensor, rigid_body)");
}

inline json object_to_json(const ObjectSpec& spec) {
  if (const auto* b = std::get_if<RigidBodyInertia>(&spec))
    return {{"type", "rigid_body"}, {"mass_kg", b->mass}, {"com_pose", to_json(b->com_pose)}, {"inertia_kgm2", to_json(b->inertia)}};
  if (const auto* c = std::get_if<CuboidSpec>(&spec))
    return {{"type", "cuboid"}, {"mass_kg", c->mass}, {"dims_m", to_json(c->dims)}};
  const auto& t = std::get<TensorObjectConfig>(spec);
  return {{"type", "tensor"},
          {"handle_length_m", t.handle_length},
          {"cylinder_length_m", t.cylinder_length},
          {"cylinder_mass_kg", t.cylinder_mass},
          {"ring_mass_kg", t.ring_mass},
          {"cylinder_radius_m", t.cylinder_radius},
          {"ring_radius_m", t.ring_radius},
          {"ring_positions_m", t.ring_positions}};
}

}  // namespace scene_json

/// Converts a byte offset into "line L, column C" for parse diagnostics.
inline std::string describe_offset(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline Scene parse_scene_json(const nlohmann::json& j) {
  using namespace scene_json;
  if (!j.is_object()) throw ValidationError("", "scene must be a JSON object");
  if (j.contains("schema_version") && j["schema_version"] != 1)
    throw ValidationError("schema_version", "unsupported scene schema version");

  Scene s;
  s.name = j.value("name", "scene");
  s.chain = chain(require(j, "chain", ""), "chain");
  s.object = object(require(j, "object", ""), "object");

  const json& grasps = require(j, "grasps", "");
  if (!grasps.is_array() || grasps.empty()) throw ValidationError("grasps", "expected a non-empty array");
  const bool tensor = std::holds_alternative<TensorObjectConfig>(s.object);
  for (std::size_t i = 0; i < grasps.size(); ++i) {
    const std::string p = "grasps[" + std::to_string(i) + "]";
    const json& g = grasps[i];
    GraspSpec spec;
    const json& id = require(g, "id", p);
    if (!id.is_string() || id.get<std::string>().empty()) throw ValidationError(join(p, "id"), "expected a non-empty string");
    spec.id = id.get<std::string>();
    for (const auto& prev : s.grasps)
      if (prev.id == spec.id) throw ValidationError(join(p, "id"), "duplicate grasp id '" + spec.id + "'");
    spec.pose_in_object = pose(require(g, "pose_in_object", p), join(p, "pose_in_object"));
    if (g.contains("ring_positions_m")) {
      if (!tensor) throw ValidationError(join(p, "ring_positions_m"), "ring overrides need a tensor object");
      spec.ring_positions = rings(g["ring_positions_m"], join(p, "ring_positions_m"));
    }
    s.grasps.push_back(std::move(spec));
  }

  const json& t = require(j, "trajectory", "");
  const std::string frame = t.value("frame", "end_effector");
  if (frame == "object") s.trajectory.frame = TrajectorySpec::Frame::object;
  else if (frame == "end_effector") s.trajectory.frame = TrajectorySpec::Frame::end_effector;
  else throw ValidationError("trajectory.frame", "expected 'end_effector' or 'object'");
  s.trajectory.start = pose(require(t, "start", "trajectory"), "trajectory.start");
  s.trajectory.end = pose(require(t, "end", "trajectory"), "trajectory.end");
  s.trajectory.duration = positive_at(t, "duration_s", "trajectory");
  s.trajectory.dt = positive_at(t, "dt_s", "trajectory");
  if (s.trajectory.dt > s.trajectory.duration) throw ValidationError("trajectory.dt_s", "must not exceed duration_s");

  if (j.contains("collision")) {
    const json& c = j["collision"];
    if (c.contains("sample_index")) {
      if (!c["sample_index"].is_number_integer()) throw ValidationError("collision.sample_index", "expected an integer");
      s.collision.sample_index = c["sample_index"].get<int>();
    }
    if (c.contains("time_s")) {
      const double tc = number(c["time_s"], "collision.time_s");
      if (!(tc > 0.0) || tc > s.trajectory.duration)
        throw ValidationError("collision.time_s", "collision time must lie in (0, duration_s]");
      s.collision.time = tc;
    }
    if (c.contains("stiffness_n_per_m")) s.collision.stiffness = positive_at(c, "stiffness_n_per_m", "collision");
    if (c.contains("damping_ns_per_m")) {
      s.collision.damping = number(c["damping_ns_per_m"], "collision.damping_ns_per_m");
      if (s.collision.damping < 0.0) throw ValidationError("collision.damping_ns_per_m", "must be >= 0");
    }
  }
  collision_sample(s);

  s.ik_seed = vector(require(j, "ik_seed_rad", ""), "ik_seed_rad", s.chain.dof());
  if (!s.chain.within_limits(s.ik_seed)) throw ValidationError("ik_seed_rad", "seed violates joint limits");

  for (std::size_t i = 0; i < s.grasps.size(); ++i) {
    try {
      build_object(s.object, s.grasps[i].ring_positions);
    } catch (const Error& e) {
      throw ValidationError("grasps[" + std::to_string(i) + "].ring_positions_m", e.what());
    }
  }
  return s;
}

inline Scene parse_scene_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed scene JSON at " + describe_offset(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
  }
  return parse_scene_json(j);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Scene parse_scene(const std::string& path) { return parse_scene_text(read_text_file(path)); }

inline nlohmann::json scene_to_json(const Scene& s) {
  using namespace scene_json;
  json grasps = json::array();
  for (const auto& g : s.grasps) {
    json e = {{"id", g.id}, {"pose_in_object", to_json(g.pose_in_object)}};
    if (g.ring_positions) e["ring_positions_m"] = *g.ring_positions;
    grasps.push_back(e);
  }
  json collision = {{"stiffness_n_per_m", s.collision.stiffness}, {"damping_ns_per_m", s.collision.damping}};
  if (s.collision.sample_index) collision["sample_index"] = *s.collision.sample_index;
  if (s.collision.time) collision["time_s"] = *s.collision.time;
  return {{"schema_version", 1},
          {"name", s.name},
          {"chain", chain_to_json(s.chain)},
          {"object", object_to_json(s.object)},
          {"grasps", grasps},
          {"trajectory",
           {{"frame", s.trajectory.frame == TrajectorySpec::Frame::object ? "object" : "end_effector"},
            {"start", to_json(s.trajectory.start)},
            {"end", to_json(s.trajectory.end)},
            {"duration_s", s.trajectory.duration},
            {"dt_s", s.trajectory.dt}}},
          {"collision", collision},
          {"ik_seed_rad", to_json(s.ik_seed)}};
}

namespace detail {
/// Pretty JSON with arrays of scalars kept on one line.
inline void write_compact(const nlohmann::json& j, int indent, std::string& out) {
  const std::string pad(indent, ' '), inner(indent + 2, ' ');
  const auto scalar = [](const nlohmann::json& e) { return !e.is_structured(); };
  if (j.is_object() && !j.empty()) {
    out += "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      out += inner + nlohmann::json(it.key()).dump() + ": ";
      write_compact(it.value(), indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += pad + "}";
  } else if (j.is_array() && !j.empty() && !std::all_of(j.begin(), j.end(), scalar)) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += inner;
      write_compact(j[i], indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += pad + "]";
  } else if (j.is_array()) {
    out += "[";
    for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + j[i].dump();
    out += "]";
  } else {
    out += j.dump();
  }
}
}  // namespace detail

inline std::string write_scene_text(const Scene& s) {
  std::string out;
  detail::write_compact(scene_to_json(s), 0, out);
  return out + "\n";
}

}  // namespace graspsafe
