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
//
// Dense Lagrangian dynamics for the concatenated chain + free-body system:
// mass matrix M(q), bias h(q, u, tau), and point Jacobians, assembled so
// that M * du/dt = h + sum_i J_i^T f_ext,i.

#ifndef COBRA_DYNAMICS_HPP_
#define COBRA_DYNAMICS_HPP_

#include <string>
#include <vector>

#include "cobra/math.hpp"
#include "cobra/scene.hpp"

namespace cobra {

// World poses of every link, free body, and collision primitive at a given q.
struct FramePoses {
  // Chain frames: index 0 is the base, index i >= 1 is chain.links[i-1].
  std::vector<Isometry> link_pose;
  std::vector<Isometry> body_pose;  // free bodies, scene order

  std::vector<Vec3> joint_anchor;  // world joint positions, one per joint
  std::vector<Vec3> joint_axis;    // world unit axes, one per joint

  std::vector<std::vector<Vec3>> sphere_center;  // [chain frame][sphere]
  std::vector<std::vector<Vec3>> vertex_pos;     // [free body][contact point]
};

// Reference to a dynamic body: a chain frame (0 = base, i = links[i-1]) or a
// free body by index.
struct BodyRef {
  bool is_free_body = false;
  int index = 0;
};

// Resolves a body name to a reference; throws std::invalid_argument for
// unknown names.
BodyRef resolve_body(const SceneModel& scene, const std::string& name);

FramePoses forward_kinematics(const SceneModel& scene, const VecX& q);

// dim(u) x dim(u), symmetric positive definite, block-diagonal across the
// chain and each free body.
MatX mass_matrix(const SceneModel& scene, const VecX& q);

// Bias forces h = C(q,u)u + G(q) + B(q)tau with the sign convention
// M * du/dt = h + sum J^T f. With u = 0 and tau = 0 this is the generalized
// gravity force.
VecX bias_forces(const SceneModel& scene, const VecX& q, const VecX& u,
                 const VecX& tau);

// 3 x dim(u) map from generalized velocity to the world velocity of a
// material point given in the body frame.
MatX point_jacobian(const SceneModel& scene, const VecX& q,
                    const std::string& body, const Vec3& local_point);
MatX point_jacobian(const SceneModel& scene, const CoordinateLayout& layout,
                    const FramePoses& poses, const BodyRef& body,
                    const Vec3& local_point);

// dJ/dt * u for the same material point, computed by directional finite
// differencing of J along the flow of u (step 1e-6).
Vec3 jacobian_dot_u(const SceneModel& scene, const VecX& q, const VecX& u,
                    const std::string& body, const Vec3& local_point);

// 6 x dim(u) body Jacobian [J_v; J_w] of a world point attached to the body.
MatX body_jacobian6(const SceneModel& scene, const CoordinateLayout& layout,
                    const FramePoses& poses, const BodyRef& body,
                    const Vec3& world_point);

// Everything the timestepper needs at one configuration.
struct DynamicsTerms {
  MatX M;
  VecX h;
  FramePoses poses;
};

DynamicsTerms dynamics_terms(const SceneModel& scene, const VecX& q,
                             const VecX& u, const VecX& tau);

double kinetic_energy(const SceneModel& scene, const VecX& q, const VecX& u);
double potential_energy(const SceneModel& scene, const VecX& q);
double total_energy(const SceneModel& scene, const VecX& q, const VecX& u);

}  // namespace cobra

#endif  // COBRA_DYNAMICS_HPP_
