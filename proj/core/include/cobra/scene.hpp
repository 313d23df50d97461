// Copyright 2026 The cobrasim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COBRA_SCENE_HPP_
#define COBRA_SCENE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "cobra/math.hpp"

namespace cobra {

// Sphere collision primitive attached to a link, in link-frame coordinates.
struct CollisionSphere {
  Vec3 center = Vec3::Zero();  // [m] offset in link frame
  double radius = 0.0;         // [m]
};

// One articulated module. The link frame has its origin at the joint that
// connects the link to its parent; the joint axis is expressed in the parent
// frame and coincides with the child frame axis at zero angle.
struct LinkSpec {
  std::string name;
  double mass = 0.0;            // [kg]
  Mat3 inertia = Mat3::Zero();  // [kg m^2] about the COM, link frame
  Vec3 com = Vec3::Zero();      // [m] COM position in link frame
  Vec3 parent_joint_axis = Vec3::UnitZ();  // unit axis in parent frame
  Vec3 joint_offset = Vec3::Zero();        // [m] joint position in parent frame
  std::vector<CollisionSphere> collision_spheres;
};

// Serial chain with a floating base. links[i] attaches to links[i-1]
// (links[0] attaches to the base). The head is the last link.
struct ChainSpec {
  LinkSpec base_link;
  std::vector<LinkSpec> links;  // revolute joints, one per link
  double q_max = 1.5;           // [rad] symmetric joint angle bound
  double tau_max = 12.0;        // [N m] symmetric joint torque bound
};

// Free rigid box. Its body frame sits at the COM; contact_points are
// body-frame candidate contact locations (default: the 8 box vertices).
struct FreeBodySpec {
  std::string name;
  double mass = 0.0;
  Mat3 inertia = Mat3::Zero();     // about COM, body frame
  Vec3 half_extents = Vec3::Zero();
  std::vector<Vec3> contact_points;
};

// Terrain half-space {x : n.x <= offset} is solid; gap of a point p is
// n.p - offset. An optional world-XY footprint restricts where the surface
// generates contacts (used for raised platforms and ramps).
struct HalfSpace {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;  // [m]
  double mu = 0.5;
  bool has_footprint = false;
  Vec2 footprint_min = Vec2::Zero();
  Vec2 footprint_max = Vec2::Zero();
};

struct TerrainSpec {
  std::vector<HalfSpace> half_spaces;
};

// Weld attachment of the chain head to a free body, engaged on a timed
// window. Anchors are captured from the relative pose at engagement so the
// weld starts with zero gap; engagement requires a quiet relative velocity.
struct DockingSpec {
  std::string body;                  // name of the docked free body
  Vec3 head_point = Vec3::Zero();    // latch center in head link frame
  double engage_time = 0.0;          // [s]
  double release_time = 0.0;         // [s]; <= engage_time means never released
};

// Immutable scene description shared by every module. Safe to share
// read-only across concurrent rollouts.
struct SceneModel {
  ChainSpec chain;
  std::vector<FreeBodySpec> free_bodies;
  TerrainSpec terrain;
  Vec3 gravity = Vec3(0, 0, -9.81);
  double robot_object_friction = 0.4;
  std::optional<DockingSpec> docking;

  int num_joints() const { return static_cast<int>(chain.links.size()); }
  int num_free_bodies() const { return static_cast<int>(free_bodies.size()); }
};

// Generalized coordinates and velocities of the concatenated system.
// Position layout: base position (3), base quaternion wxyz (4), joint
// angles, then per free body: position (3), quaternion wxyz (4).
// Velocity layout: base [world linear, world angular] (6), joint rates,
// then per free body [world linear of COM, world angular] (6).
struct GeneralizedState {
  VecX q;
  VecX u;
  double t = 0.0;
};

// Named index ranges into q and u. Half-open ranges [start, start+size).
struct IndexRange {
  int start = 0;
  int size = 0;
  int end() const { return start + size; }
};

struct CoordinateLayout {
  int num_joints = 0;
  int num_free_bodies = 0;

  IndexRange q_base_pos;    // 3
  IndexRange q_base_quat;   // 4, wxyz
  IndexRange q_joints;      // num_joints
  std::vector<IndexRange> q_body_pos;   // 3 each
  std::vector<IndexRange> q_body_quat;  // 4 each

  IndexRange u_base;    // 6: [v; w]
  IndexRange u_joints;  // num_joints
  std::vector<IndexRange> u_body;  // 6 each: [v; w]

  int position_dim = 0;
  int velocity_dim = 0;
};

// Stable index ranges covering every coordinate exactly once.
CoordinateLayout coordinate_layout(const SceneModel& scene);

// Default 11-joint COBRA chain with alternating yaw/pitch axes, uniform
// module masses, flat ground. No free body is registered; use
// with_free_body(scene, default_box()) to add the manipulation box.
SceneModel build_default_cobra();

// Default manipulated box (0.2 m cube, 0.5 kg, vertex contact points).
FreeBodySpec default_box(const std::string& name = "box");

// Box spec of arbitrary size with vertex contact points and solid-box inertia.
FreeBodySpec make_box(const std::string& name, double mass, const Vec3& half_extents);

// Copy of the scene with one more free body appended.
SceneModel with_free_body(const SceneModel& scene, const FreeBodySpec& body);

// One invariant violation: which field broke which rule.
struct Violation {
  std::string field;
  std::string rule;
};

// Empty iff every type invariant holds. Violations are data, not failures.
std::vector<Violation> validate(const SceneModel& scene);

// State whose configuration places everything at identity poses with zero
// velocity (chain base at origin, free bodies at origin; callers reposition).
GeneralizedState neutral_state(const SceneModel& scene);

// q advanced by dt along velocity u: positions integrate additively, base
// and body quaternions multiplicatively through the exponential map.
VecX integrate_positions(const SceneModel& scene, const VecX& q, const VecX& u, double dt);

}  // namespace cobra

#endif  // COBRA_SCENE_HPP_
