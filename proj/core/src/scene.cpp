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

#include "cobra/scene.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cobra {

namespace {

constexpr double kUnitTol = 1e-9;

// Solid cylinder along local x, used for the default module geometry.
Mat3 cylinder_inertia(double mass, double radius, double length) {
  Mat3 inertia = Mat3::Zero();
  inertia(0, 0) = 0.5 * mass * radius * radius;
  inertia(1, 1) = inertia(2, 2) =
      mass * (3.0 * radius * radius + length * length) / 12.0;
  return inertia;
}

Mat3 box_inertia(double mass, const Vec3& he) {
  Mat3 inertia = Mat3::Zero();
  const Vec3 d = 2.0 * he;
  inertia(0, 0) = mass * (d.y() * d.y() + d.z() * d.z()) / 12.0;
  inertia(1, 1) = mass * (d.x() * d.x() + d.z() * d.z()) / 12.0;
  inertia(2, 2) = mass * (d.x() * d.x() + d.y() * d.y()) / 12.0;
  return inertia;
}

LinkSpec default_module(const std::string& name, const Vec3& axis, bool attached) {
  // Default module parameters: 0.4 kg, 0.12 m long, 0.04 m radius.
  constexpr double kMass = 0.4;
  constexpr double kLength = 0.12;
  constexpr double kRadius = 0.04;
  LinkSpec link;
  link.name = name;
  link.mass = kMass;
  link.inertia = cylinder_inertia(kMass, kRadius, kLength);
  link.com = Vec3(0.5 * kLength, 0, 0);
  link.parent_joint_axis = axis;
  link.joint_offset = attached ? Vec3(kLength, 0, 0) : Vec3::Zero();
  link.collision_spheres = {
      {Vec3(0.25 * kLength, 0, 0), kRadius},
      {Vec3(0.75 * kLength, 0, 0), kRadius},
  };
  return link;
}

void check_unit(const std::string& field, const Vec3& v,
                std::vector<Violation>& out) {
  if (std::abs(v.norm() - 1.0) > kUnitTol) {
    out.push_back({field, "must have unit norm within 1e-9"});
  }
}

void check_inertia(const std::string& field, const Mat3& inertia,
                   std::vector<Violation>& out) {
  if (!approx_symmetric(inertia, 1e-9)) {
    out.push_back({field, "inertia must be symmetric"});
    return;
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(inertia);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    out.push_back({field, "inertia must be positive definite"});
  }
}

void check_link(const std::string& prefix, const LinkSpec& link,
                std::vector<Violation>& out) {
  if (!(link.mass > 0.0)) out.push_back({prefix + ".mass", "must be > 0"});
  check_inertia(prefix + ".inertia", link.inertia, out);
  check_unit(prefix + ".parent_joint_axis", link.parent_joint_axis, out);
  for (size_t s = 0; s < link.collision_spheres.size(); ++s) {
    if (!(link.collision_spheres[s].radius > 0.0)) {
      out.push_back({prefix + ".collision_spheres[" + std::to_string(s) + "].radius",
                     "must be > 0"});
    }
  }
}

}  // namespace

CoordinateLayout coordinate_layout(const SceneModel& scene) {
  CoordinateLayout layout;
  layout.num_joints = scene.num_joints();
  layout.num_free_bodies = scene.num_free_bodies();

  int q = 0;
  layout.q_base_pos = {q, 3};
  q += 3;
  layout.q_base_quat = {q, 4};
  q += 4;
  layout.q_joints = {q, layout.num_joints};
  q += layout.num_joints;
  for (int b = 0; b < layout.num_free_bodies; ++b) {
    layout.q_body_pos.push_back({q, 3});
    q += 3;
    layout.q_body_quat.push_back({q, 4});
    q += 4;
  }
  layout.position_dim = q;

  int u = 0;
  layout.u_base = {u, 6};
  u += 6;
  layout.u_joints = {u, layout.num_joints};
  u += layout.num_joints;
  for (int b = 0; b < layout.num_free_bodies; ++b) {
    layout.u_body.push_back({u, 6});
    u += 6;
  }
  layout.velocity_dim = u;
  return layout;
}

SceneModel build_default_cobra() {
  SceneModel scene;
  scene.chain.q_max = 1.5;
  scene.chain.tau_max = 12.0;
  scene.chain.base_link = default_module("base", Vec3::UnitZ(), /*attached=*/false);
  for (int j = 0; j < 11; ++j) {
    // Alternating yaw (z) / pitch (y) joints along the body.
    const Vec3 axis = (j % 2 == 0) ? Vec3::UnitZ() : Vec3::UnitY();
    scene.chain.links.push_back(
        default_module("link" + std::to_string(j), axis, /*attached=*/true));
  }
  HalfSpace ground;
  ground.normal = Vec3::UnitZ();
  ground.offset = 0.0;
  ground.mu = 0.8;
  scene.terrain.half_spaces = {ground};
  scene.gravity = Vec3(0, 0, -9.81);
  scene.robot_object_friction = 0.4;
  return scene;
}

FreeBodySpec make_box(const std::string& name, double mass, const Vec3& he) {
  FreeBodySpec body;
  body.name = name;
  body.mass = mass;
  body.half_extents = he;
  body.inertia = box_inertia(mass, he);
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      for (int sz : {-1, 1}) {
        body.contact_points.push_back(
            Vec3(sx * he.x(), sy * he.y(), sz * he.z()));
      }
    }
  }
  return body;
}

FreeBodySpec default_box(const std::string& name) {
  return make_box(name, 0.5, Vec3(0.1, 0.1, 0.1));
}

SceneModel with_free_body(const SceneModel& scene, const FreeBodySpec& body) {
  SceneModel out = scene;
  out.free_bodies.push_back(body);
  return out;
}

std::vector<Violation> validate(const SceneModel& scene) {
  std::vector<Violation> out;

  check_link("chain.base_link", scene.chain.base_link, out);
  for (size_t i = 0; i < scene.chain.links.size(); ++i) {
    check_link("chain.links[" + std::to_string(i) + "]", scene.chain.links[i], out);
  }
  if (!(scene.chain.q_max > 0.0)) out.push_back({"chain.q_max", "must be > 0"});
  if (!(scene.chain.tau_max > 0.0)) out.push_back({"chain.tau_max", "must be > 0"});

  std::set<std::string> names;
  names.insert(scene.chain.base_link.name);
  for (const auto& link : scene.chain.links) {
    if (!names.insert(link.name).second) {
      out.push_back({"chain.links", "name '" + link.name + "' is not unique"});
    }
  }
  for (size_t b = 0; b < scene.free_bodies.size(); ++b) {
    const auto& body = scene.free_bodies[b];
    const std::string prefix = "free_bodies[" + std::to_string(b) + "]";
    if (!names.insert(body.name).second) {
      out.push_back({prefix + ".name", "name '" + body.name + "' is not unique"});
    }
    if (!(body.mass > 0.0)) out.push_back({prefix + ".mass", "must be > 0"});
    check_inertia(prefix + ".inertia", body.inertia, out);
    if (!(body.half_extents.minCoeff() > 0.0)) {
      out.push_back({prefix + ".half_extents", "must be componentwise > 0"});
    }
    for (size_t p = 0; p < body.contact_points.size(); ++p) {
      const Vec3 d = body.contact_points[p].cwiseAbs() - body.half_extents;
      // On the surface: no component outside, at least one on a face.
      if (std::abs(d.maxCoeff()) > kUnitTol) {
        out.push_back({prefix + ".contact_points[" + std::to_string(p) + "]",
                       "must lie on the box surface"});
      }
    }
  }

  for (size_t h = 0; h < scene.terrain.half_spaces.size(); ++h) {
    const auto& hs = scene.terrain.half_spaces[h];
    const std::string prefix = "terrain.half_spaces[" + std::to_string(h) + "]";
    check_unit(prefix + ".normal", hs.normal, out);
    if (!(hs.mu >= 0.0)) out.push_back({prefix + ".mu", "must be >= 0"});
    if (hs.has_footprint &&
        !((hs.footprint_max - hs.footprint_min).minCoeff() > 0.0)) {
      out.push_back({prefix + ".footprint", "must have positive extent"});
    }
  }

  if (!scene.gravity.allFinite()) out.push_back({"gravity", "must be finite"});
  if (!(scene.robot_object_friction >= 0.0)) {
    out.push_back({"robot_object_friction", "must be >= 0"});
  }

  if (scene.docking) {
    bool found = false;
    for (const auto& body : scene.free_bodies) found |= body.name == scene.docking->body;
    if (!found) {
      out.push_back({"docking.body",
                     "references unknown free body '" + scene.docking->body + "'"});
    }
    if (scene.chain.links.empty()) {
      out.push_back({"docking", "requires a chain with at least one link"});
    }
  }
  return out;
}

GeneralizedState neutral_state(const SceneModel& scene) {
  const CoordinateLayout layout = coordinate_layout(scene);
  GeneralizedState state;
  state.q = VecX::Zero(layout.position_dim);
  state.u = VecX::Zero(layout.velocity_dim);
  state.q[layout.q_base_quat.start] = 1.0;
  for (int b = 0; b < layout.num_free_bodies; ++b) {
    state.q[layout.q_body_quat[b].start] = 1.0;
  }
  return state;
}

namespace {

void integrate_quat(const VecX& q, VecX& out, const IndexRange& quat_range,
                    const Vec3& omega, double dt) {
  const Quat rot(q[quat_range.start], q[quat_range.start + 1],
                 q[quat_range.start + 2], q[quat_range.start + 3]);
  Quat next = quat_exp(omega * dt) * rot;
  next.normalize();
  out[quat_range.start] = next.w();
  out.segment<3>(quat_range.start + 1) = next.vec();
}

}  // namespace

VecX integrate_positions(const SceneModel& scene, const VecX& q, const VecX& u,
                         double dt) {
  const CoordinateLayout layout = coordinate_layout(scene);
  if (q.size() != layout.position_dim || u.size() != layout.velocity_dim) {
    throw std::invalid_argument("integrate_positions: state dimension mismatch");
  }
  VecX out = q;
  out.segment<3>(layout.q_base_pos.start) += dt * u.segment<3>(layout.u_base.start);
  integrate_quat(q, out, layout.q_base_quat,
                 u.segment<3>(layout.u_base.start + 3), dt);
  out.segment(layout.q_joints.start, layout.q_joints.size) +=
      dt * u.segment(layout.u_joints.start, layout.u_joints.size);
  for (int b = 0; b < layout.num_free_bodies; ++b) {
    out.segment<3>(layout.q_body_pos[b].start) +=
        dt * u.segment<3>(layout.u_body[b].start);
    integrate_quat(q, out, layout.q_body_quat[b],
                   u.segment<3>(layout.u_body[b].start + 3), dt);
  }
  return out;
}

}  // namespace cobra
