#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <utility>
#include <string>
#include <vector>

#include "graspsafe/scene.hpp"

namespace graspsafe::demo {

/// Uniform rod of radius `radius` along the local z axis.
inline Matrix3 rod_inertia(double mass, double length, double radius) {
  const double perp = mass * (3.0 * radius * radius + length * length) / 12.0;
  const double axial = 0.5 * mass * radius * radius;
  return Vector3(perp, perp, axial).asDiagonal();
}

/// Generic 7-DOF anthropomorphic arm (z-y-z-y-z-y-z axes, 0.45 m upper arm
/// and forearm), link masses decreasing from 2.0 to 0.3 kg, base at
/// x = 0.45 m. The tool frame sits 0.18 m past the last joint with its z
/// axis along the flange.
inline ChainModel example_chain() {
  struct Seg {
    const char* name;
    double offset;  // along parent z to this joint
    Vector3 axis;
    double lower, upper;
    double mass;
    double length;  // link extent along its own z
  };
  const std::array<Seg, 7> segs{{
      {"shoulder_yaw", 0.30, Vector3::UnitZ(), -2.9, 2.9, 2.0, 0.20},
      {"shoulder_pitch", 0.00, Vector3::UnitY(), -2.0, 2.0, 1.7, 0.225},
      {"upper_arm_roll", 0.225, Vector3::UnitZ(), -2.9, 2.9, 1.4, 0.225},
      {"elbow", 0.225, Vector3::UnitY(), -2.4, 2.4, 1.1, 0.225},
      {"forearm_roll", 0.225, Vector3::UnitZ(), -2.9, 2.9, 0.8, 0.225},
      {"wrist_pitch", 0.225, Vector3::UnitY(), -2.0, 2.0, 0.5, 0.08},
      {"wrist_roll", 0.08, Vector3::UnitZ(), -2.9, 2.9, 0.3, 0.06},
  }};
  std::vector<ChainLink> links;
  for (const Seg& s : segs) {
    ChainLink l;
    l.joint.name = s.name;
    l.joint.parent_transform = Pose::translation(0.0, 0.0, s.offset);
    l.joint.axis = s.axis;
    l.joint.lower = s.lower;
    l.joint.upper = s.upper;
    l.link.mass = s.mass;
    l.link.com = Vector3(0.0, 0.0, 0.5 * s.length);
    l.link.inertia = rod_inertia(s.mass, s.length, 0.05);
    links.push_back(l);
  }
  return ChainModel(std::move(links), Pose::translation(0.45, 0.0, 0.0), Pose::translation(0.0, 0.0, 0.18));
}

/// Gripper pointing straight down (tool z along world −z).
inline Rotation gripper_down() { return Rotation::from_euler_zyx(0.0, 0.0, M_PI); }

inline JointState example_seed() {
  JointState q(7);
  q << 0.0, 0.6, 0.0, 1.5, 0.0, 1.0, 0.0;
  return q;
}

/// Book-moving task: 22 × 15 × 1.5 cm, 0.34 kg, grasped on the spine (the
/// 22 cm edge, along the object y axis) at −0.1, 0 and +0.1 m. The path is
/// given for the book, so each grasp moves the arm along its own shifted path.
inline Scene book_scene() {
  Scene s;
  s.name = "book";
  s.chain = example_chain();
  s.object = CuboidSpec{0.34, Vector3(0.15, 0.22, 0.015)};
  const std::array<std::pair<const char*, double>, 3> spots{{{"spine_y-0.10", -0.10}, {"spine_y+0.00", 0.0}, {"spine_y+0.10", 0.10}}};
  for (const auto& [id, y] : spots) s.grasps.push_back({id, Pose{Vector3(-0.075, y, 0.0), gripper_down()}, std::nullopt});
  s.trajectory.frame = TrajectorySpec::Frame::object;
  s.trajectory.start = Pose::translation(1.075, 0.0, 0.03);
  s.trajectory.end = Pose::translation(1.175, -0.38, 0.16);
  s.trajectory.duration = 2.0;
  s.trajectory.dt = 0.1;
  s.collision.time = 1.0;
  s.ik_seed = example_seed();
  return s;
}

/// Tensor object held by the handle; 20 ring layouts (y-arm rings × z-arm
/// rings) with the handle ring at the hub. Same end-effector path for all.
inline Scene tensor_scene() {
  Scene s;
  s.name = "tensor";
  s.chain = example_chain();
  TensorObjectConfig cfg;
  s.object = cfg;
  int n = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 5; ++b) {
      const double y_ring = cfg.cylinder_length * a / 3.0;
      const double z_ring = cfg.cylinder_length * b / 4.0;
      char id[24];
      std::snprintf(id, sizeof id, "tensor_%02d", ++n);
      s.grasps.push_back({id, Pose{Vector3(-0.13, 0.0, 0.0), gripper_down()},
                          std::array<double, 5>{0.0, y_ring, y_ring, z_ring, z_ring}});
    }
  }
  s.trajectory.frame = TrajectorySpec::Frame::end_effector;
  s.trajectory.start = Pose{Vector3(1.0, 0.0, 0.03), gripper_down()};
  s.trajectory.end = Pose{Vector3(1.1, -0.38, 0.16), gripper_down()};
  s.trajectory.duration = 2.0;
  s.trajectory.dt = 0.1;
  s.collision.time = 1.5;
  s.ik_seed = example_seed();
  return s;
}

inline Scene scene_by_name(const std::string& name) {
  if (name == "book") return book_scene();
  if (name == "tensor") return tensor_scene();
  throw InvalidArgument("unknown demo '" + name + "' (expected book or tensor)");
}

}  // namespace graspsafe::demo
