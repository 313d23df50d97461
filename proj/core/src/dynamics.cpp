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

#include "cobra/dynamics.hpp"

#include <stdexcept>

namespace cobra {

namespace {

constexpr double kFdStep = 1e-6;  // directional step for dJ/dt * u

void check_q(const CoordinateLayout& layout, const VecX& q) {
  if (q.size() != layout.position_dim) {
    throw std::invalid_argument("dynamics: q has dimension " +
                                std::to_string(q.size()) + ", scene expects " +
                                std::to_string(layout.position_dim));
  }
}

void check_u(const CoordinateLayout& layout, const VecX& u) {
  if (u.size() != layout.velocity_dim) {
    throw std::invalid_argument("dynamics: u has dimension " +
                                std::to_string(u.size()) + ", scene expects " +
                                std::to_string(layout.velocity_dim));
  }
}

Quat read_quat(const VecX& q, const IndexRange& range) {
  return Quat(q[range.start], q[range.start + 1], q[range.start + 2],
              q[range.start + 3]);
}

// Chain frame spec by index: 0 = base, i >= 1 = links[i-1].
const LinkSpec& chain_link(const SceneModel& scene, int frame) {
  return frame == 0 ? scene.chain.base_link : scene.chain.links[frame - 1];
}

// World rotational inertia about the COM.
Mat3 world_inertia(const Mat3& body_inertia, const Mat3& rotation) {
  return rotation * body_inertia * rotation.transpose();
}

}  // namespace

BodyRef resolve_body(const SceneModel& scene, const std::string& name) {
  if (scene.chain.base_link.name == name) return {false, 0};
  for (size_t i = 0; i < scene.chain.links.size(); ++i) {
    if (scene.chain.links[i].name == name) {
      return {false, static_cast<int>(i) + 1};
    }
  }
  for (size_t b = 0; b < scene.free_bodies.size(); ++b) {
    if (scene.free_bodies[b].name == name) {
      return {true, static_cast<int>(b)};
    }
  }
  throw std::invalid_argument("unknown body name '" + name + "'");
}

FramePoses forward_kinematics(const SceneModel& scene, const VecX& q) {
  const CoordinateLayout layout = coordinate_layout(scene);
  check_q(layout, q);

  FramePoses poses;
  const int num_joints = layout.num_joints;
  poses.link_pose.resize(1 + num_joints);
  poses.joint_anchor.resize(num_joints);
  poses.joint_axis.resize(num_joints);

  Isometry base = Isometry::Identity();
  base.linear() = read_quat(q, layout.q_base_quat).normalized().toRotationMatrix();
  base.translation() = q.segment<3>(layout.q_base_pos.start);
  poses.link_pose[0] = base;

  for (int j = 0; j < num_joints; ++j) {
    const LinkSpec& link = scene.chain.links[j];
    const Isometry& parent = poses.link_pose[j];
    const double angle = q[layout.q_joints.start + j];
    poses.joint_anchor[j] = parent * link.joint_offset;
    poses.joint_axis[j] = parent.linear() * link.parent_joint_axis;
    Isometry child = Isometry::Identity();
    child.linear() =
        parent.linear() *
        Eigen::AngleAxisd(angle, link.parent_joint_axis).toRotationMatrix();
    child.translation() = poses.joint_anchor[j];
    poses.link_pose[j + 1] = child;
  }

  poses.sphere_center.resize(1 + num_joints);
  for (int frame = 0; frame <= num_joints; ++frame) {
    const LinkSpec& link = chain_link(scene, frame);
    for (const CollisionSphere& sphere : link.collision_spheres) {
      poses.sphere_center[frame].push_back(poses.link_pose[frame] * sphere.center);
    }
  }

  poses.body_pose.resize(layout.num_free_bodies);
  poses.vertex_pos.resize(layout.num_free_bodies);
  for (int b = 0; b < layout.num_free_bodies; ++b) {
    Isometry pose = Isometry::Identity();
    pose.linear() =
        read_quat(q, layout.q_body_quat[b]).normalized().toRotationMatrix();
    pose.translation() = q.segment<3>(layout.q_body_pos[b].start);
    poses.body_pose[b] = pose;
    for (const Vec3& point : scene.free_bodies[b].contact_points) {
      poses.vertex_pos[b].push_back(pose * point);
    }
  }
  return poses;
}

MatX body_jacobian6(const SceneModel& scene, const CoordinateLayout& layout,
                    const FramePoses& poses, const BodyRef& body,
                    const Vec3& world_point) {
  MatX jac = MatX::Zero(6, layout.velocity_dim);
  if (body.is_free_body) {
    const int col = layout.u_body[body.index].start;
    const Vec3 r = world_point - poses.body_pose[body.index].translation();
    jac.block<3, 3>(0, col) = Mat3::Identity();
    jac.block<3, 3>(0, col + 3) = -skew(r);
    jac.block<3, 3>(3, col + 3) = Mat3::Identity();
    return jac;
  }

  // Chain frame: floating base plus every joint on the path to it.
  const Vec3 r_base = world_point - poses.link_pose[0].translation();
  jac.block<3, 3>(0, layout.u_base.start) = Mat3::Identity();
  jac.block<3, 3>(0, layout.u_base.start + 3) = -skew(r_base);
  jac.block<3, 3>(3, layout.u_base.start + 3) = Mat3::Identity();
  for (int j = 0; j < body.index; ++j) {
    const Vec3& axis = poses.joint_axis[j];
    const int col = layout.u_joints.start + j;
    jac.block<3, 1>(0, col) = axis.cross(world_point - poses.joint_anchor[j]);
    jac.block<3, 1>(3, col) = axis;
  }
  return jac;
}

MatX point_jacobian(const SceneModel& scene, const CoordinateLayout& layout,
                    const FramePoses& poses, const BodyRef& body,
                    const Vec3& local_point) {
  const Isometry& pose = body.is_free_body ? poses.body_pose[body.index]
                                           : poses.link_pose[body.index];
  return body_jacobian6(scene, layout, poses, body, pose * local_point)
      .topRows<3>();
}

MatX point_jacobian(const SceneModel& scene, const VecX& q,
                    const std::string& body, const Vec3& local_point) {
  if (!local_point.allFinite()) {
    throw std::invalid_argument("point_jacobian: local point must be finite");
  }
  const CoordinateLayout layout = coordinate_layout(scene);
  check_q(layout, q);
  const FramePoses poses = forward_kinematics(scene, q);
  return point_jacobian(scene, layout, poses, resolve_body(scene, body),
                        local_point);
}

Vec3 jacobian_dot_u(const SceneModel& scene, const VecX& q, const VecX& u,
                    const std::string& body, const Vec3& local_point) {
  const CoordinateLayout layout = coordinate_layout(scene);
  check_q(layout, q);
  check_u(layout, u);
  const BodyRef ref = resolve_body(scene, body);

  const VecX q_plus = integrate_positions(scene, q, u, kFdStep);
  const VecX q_minus = integrate_positions(scene, q, u, -kFdStep);
  const FramePoses poses_plus = forward_kinematics(scene, q_plus);
  const FramePoses poses_minus = forward_kinematics(scene, q_minus);
  const MatX j_plus =
      point_jacobian(scene, layout, poses_plus, ref, local_point);
  const MatX j_minus =
      point_jacobian(scene, layout, poses_minus, ref, local_point);
  return ((j_plus - j_minus) / (2.0 * kFdStep)) * u;
}

MatX mass_matrix(const SceneModel& scene, const VecX& q) {
  const CoordinateLayout layout = coordinate_layout(scene);
  check_q(layout, q);
  const FramePoses poses = forward_kinematics(scene, q);

  MatX M = MatX::Zero(layout.velocity_dim, layout.velocity_dim);
  for (int frame = 0; frame <= layout.num_joints; ++frame) {
    const LinkSpec& link = chain_link(scene, frame);
    const Vec3 com_world = poses.link_pose[frame] * link.com;
    const MatX jac =
        body_jacobian6(scene, layout, poses, BodyRef{false, frame}, com_world);
    const Mat3 inertia_w = world_inertia(link.inertia, poses.link_pose[frame].linear());
    M.noalias() += link.mass * jac.topRows<3>().transpose() * jac.topRows<3>();
    M.noalias() += jac.bottomRows<3>().transpose() * inertia_w * jac.bottomRows<3>();
  }
  for (int b = 0; b < layout.num_free_bodies; ++b) {
    const FreeBodySpec& body = scene.free_bodies[b];
    const int col = layout.u_body[b].start;
    M.block<3, 3>(col, col) += body.mass * Mat3::Identity();
    M.block<3, 3>(col + 3, col + 3) +=
        world_inertia(body.inertia, poses.body_pose[b].linear());
  }
  // Symmetrize away accumulation roundoff.
  M = 0.5 * (M + M.transpose()).eval();
  return M;
}

VecX bias_forces(const SceneModel& scene, const VecX& q, const VecX& u,
                 const VecX& tau) {
  const CoordinateLayout layout = coordinate_layout(scene);
  check_q(layout, q);
  check_u(layout, u);
  if (tau.size() != layout.num_joints) {
    throw std::invalid_argument("bias_forces: tau has dimension " +
                                std::to_string(tau.size()) + ", scene has " +
                                std::to_string(layout.num_joints) + " joints");
  }

  const FramePoses poses = forward_kinematics(scene, q);
  VecX h = VecX::Zero(layout.velocity_dim);

  // Velocity-dependent terms for the chain come from the Newton-Euler wrench
  // of each body under zero generalized acceleration: the COM bias
  // acceleration is (dJ/dt) u, obtained by directional finite differences.
  const bool moving = u.squaredNorm() > 0.0;
  FramePoses poses_plus, poses_minus;
  if (moving) {
    poses_plus = forward_kinematics(scene, integrate_positions(scene, q, u, kFdStep));
    poses_minus = forward_kinematics(scene, integrate_positions(scene, q, u, -kFdStep));
  }

  for (int frame = 0; frame <= layout.num_joints; ++frame) {
    const LinkSpec& link = chain_link(scene, frame);
    const BodyRef ref{false, frame};
    const Vec3 com_world = poses.link_pose[frame] * link.com;
    const MatX jac = body_jacobian6(scene, layout, poses, ref, com_world);
    const Mat3 inertia_w = world_inertia(link.inertia, poses.link_pose[frame].linear());

    Vec3 accel_bias = Vec3::Zero();
    Vec3 alpha_bias = Vec3::Zero();
    Vec3 omega = Vec3::Zero();
    if (moving) {
      // Evaluate both offset Jacobians at the same material point.
      const Vec3 com_local = link.com;
      const MatX j_plus = body_jacobian6(
          scene, layout, poses_plus, ref, poses_plus.link_pose[frame] * com_local);
      const MatX j_minus = body_jacobian6(
          scene, layout, poses_minus, ref, poses_minus.link_pose[frame] * com_local);
      const VecX jdot_u = ((j_plus - j_minus) / (2.0 * kFdStep)) * u;
      accel_bias = jdot_u.head<3>();
      alpha_bias = jdot_u.tail<3>();
      omega = jac.bottomRows<3>() * u;
    }

    VecX wrench(6);
    wrench.head<3>() = link.mass * (scene.gravity - accel_bias);
    wrench.tail<3>() = -(inertia_w * alpha_bias + omega.cross(inertia_w * omega));
    h.noalias() += jac.transpose() * wrench;
  }

  for (int b = 0; b < layout.num_free_bodies; ++b) {
    const FreeBodySpec& body = scene.free_bodies[b];
    const int row = layout.u_body[b].start;
    const Mat3 inertia_w = world_inertia(body.inertia, poses.body_pose[b].linear());
    const Vec3 omega = u.segment<3>(row + 3);
    h.segment<3>(row) += body.mass * scene.gravity;
    h.segment<3>(row + 3) -= omega.cross(inertia_w * omega);
  }

  // Actuation enters only the joint-rate rows.
  h.segment(layout.u_joints.start, layout.u_joints.size) += tau;
  return h;
}

DynamicsTerms dynamics_terms(const SceneModel& scene, const VecX& q,
                             const VecX& u, const VecX& tau) {
  DynamicsTerms terms;
  terms.M = mass_matrix(scene, q);
  terms.h = bias_forces(scene, q, u, tau);
  terms.poses = forward_kinematics(scene, q);
  return terms;
}

double kinetic_energy(const SceneModel& scene, const VecX& q, const VecX& u) {
  const MatX M = mass_matrix(scene, q);
  return 0.5 * u.dot(M * u);
}

double potential_energy(const SceneModel& scene, const VecX& q) {
  const CoordinateLayout layout = coordinate_layout(scene);
  check_q(layout, q);
  const FramePoses poses = forward_kinematics(scene, q);
  double pe = 0.0;
  for (int frame = 0; frame <= layout.num_joints; ++frame) {
    const LinkSpec& link = chain_link(scene, frame);
    pe -= link.mass * scene.gravity.dot(poses.link_pose[frame] * link.com);
  }
  for (int b = 0; b < layout.num_free_bodies; ++b) {
    pe -= scene.free_bodies[b].mass *
          scene.gravity.dot(poses.body_pose[b].translation());
  }
  return pe;
}

double total_energy(const SceneModel& scene, const VecX& q, const VecX& u) {
  return kinetic_energy(scene, q, u) + potential_energy(scene, q);
}

}  // namespace cobra
