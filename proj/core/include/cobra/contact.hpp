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
// Contact pipeline: candidate detection over sphere/vertex/half-space
// primitives, stacked contact Jacobians, Delassus assembly, and the
// cone-constrained force QP solved by blockwise projected Gauss-Seidel.

#ifndef COBRA_CONTACT_HPP_
#define COBRA_CONTACT_HPP_

#include <string>
#include <vector>

#include "cobra/dynamics.hpp"
#include "cobra/math.hpp"
#include "cobra/scene.hpp"

namespace cobra {

inline constexpr double kDefaultActivationDistance = 0.005;  // [m]
inline constexpr double kDefaultQpTol = 1e-8;                // [N]
inline constexpr int kDefaultQpMaxIter = 200;

enum class ConeKind { kUnilateralFrictional, kBilateral };

// Admissible force set of one contact: the Coulomb second-order cone
// {f_N >= 0, ||f_T|| <= mu f_N} or all of R^3 for bilateral welds.
// Forces are in (normal, t1, t2) block coordinates.
struct ForceCone {
  ConeKind kind = ConeKind::kUnilateralFrictional;
  double mu = 0.0;

  bool contains(const Vec3& f, double tol) const;
  // Euclidean projection onto the cone (idempotent, closed form).
  Vec3 project(const Vec3& f) const;
};

enum class PrimitiveKind {
  kLinkSphere,   // body = chain frame index, primitive = sphere index
  kBodyVertex,   // body = free body index, primitive = contact point index
  kBodySurface,  // body = free body index (closest-point contact)
  kTerrain,      // body = half-space index
  kDockAnchor,   // body = chain frame or free body index, primitive = anchor
};

struct PrimitiveRef {
  PrimitiveKind kind = PrimitiveKind::kTerrain;
  int body = 0;
  int primitive = 0;
};

// Channel grouping used by logs and plot emission.
enum class ContactGroup { kRobotGround, kRobotObject, kObjectGround, kWeld };

struct ContactCandidate {
  PrimitiveRef a;  // force acts on A
  PrimitiveRef b;  // reaction acts on B
  double gap = 0.0;       // [m] signed separation, positive = separated
  Vec3 point = Vec3::Zero();    // world contact point on A
  Vec3 point_b = Vec3::Zero();  // world attach point on B (welds only differ)
  Vec3 normal = Vec3::UnitZ();  // world unit normal, from B into A
  Vec3 t1 = Vec3::UnitX();
  Vec3 t2 = Vec3::UnitY();
  double mu = 0.0;
  ConeKind kind = ConeKind::kUnilateralFrictional;
  // Weld displacement (p_a - p_b) expressed in (n, t1, t2); zero otherwise.
  Vec3 weld_error = Vec3::Zero();
  ContactGroup group = ContactGroup::kRobotGround;

  // Stable identifier, e.g. "link3/s1|ground0".
  std::string id(const SceneModel& scene) const;
};

// Weld attachment resolved to body-frame anchor points; captured by the
// timestepper when docking engages.
struct WeldAnchors {
  int head_frame = 0;  // chain frame index
  int body = 0;        // free body index
  std::vector<Vec3> head_points;  // head link frame
  std::vector<Vec3> body_points;  // free body frame, same count
};

// Every sphere-half-space, sphere-box, and box-vertex-half-space pair with
// gap <= activation_distance, in a fixed deterministic order; weld anchors
// (when given) are always appended as bilateral candidates.
std::vector<ContactCandidate> detect_contacts(
    const SceneModel& scene, const FramePoses& poses,
    double activation_distance = kDefaultActivationDistance,
    const WeldAnchors* weld = nullptr);

// Stacked contact kinematics. W has one (normal, t1, t2) row triple per
// candidate; the relative constraint velocity is W u + zeta and the drift
// acceleration rows are zeta_hat = (dJ/dt u) differences projected on the
// contact frame.
struct ContactSet {
  std::vector<ContactCandidate> candidates;
  MatX W;        // 3k x dim(u)
  VecX zeta;     // 3k, explicit time-derivative terms (moving terrain only)
  VecX zeta_hat; // 3k
  int rows() const { return static_cast<int>(W.rows()); }
};

// Builds W, zeta, zeta_hat for candidates detected at this q. Throws if a
// candidate's gap re-evaluates further than stale_tol from its stored gap
// (the body moved since detection). terrain_velocity is the scripted-
// geometry hook: a rigidly translating terrain contributes zeta != 0.
ContactSet assemble_contact_set(const SceneModel& scene, const VecX& q,
                                const VecX& u,
                                const std::vector<ContactCandidate>& candidates,
                                const Vec3& terrain_velocity = Vec3::Zero(),
                                double stale_tol = kDefaultActivationDistance);

// Re-evaluates the signed gap of a candidate's primitive pair at new poses.
double candidate_gap(const SceneModel& scene, const FramePoses& poses,
                     const ContactCandidate& candidate);

// Delassus system G = W M^-1 W^T + eps I, c = zeta_hat + W M^-1 h, so that
// the stacked gap accelerations are G f + c.
struct DelassusSystem {
  MatX G;   // regularized
  VecX c;
  double regularization = 0.0;  // eps added to the diagonal
};

// Throws on singular M (never silently regularized at the M level).
DelassusSystem assemble_delassus(const MatX& M, const VecX& h,
                                 const ContactSet& set);

struct ContactForce {
  double normal = 0.0;
  Vec2 tangent = Vec2::Zero();
  Vec3 world_force = Vec3::Zero();  // on body A; negated on B
};

struct ContactForces {
  std::vector<ContactForce> contacts;
  VecX stacked;  // 3k, (n, t1, t2) blocks
  bool converged = true;
  int iterations = 0;
  double objective = 0.0;  // 0.5 f'Gf + f'c at the returned forces
  std::vector<double> objective_history;  // per sweep, non-increasing
};

// Minimizes 0.5 f'Gf + f'c over the product of cones by blockwise projected
// Gauss-Seidel (projected Newton block steps with a monotonicity safeguard).
// Convergence: blockwise force update norm <= tol; hitting max_iter is
// flagged on the result, forces still returned. Throws if G fails its
// positive-definiteness check.
ContactForces solve_contact_qp(const DelassusSystem& sys,
                               const std::vector<ForceCone>& cones,
                               double tol = kDefaultQpTol,
                               int max_iter = kDefaultQpMaxIter);

std::vector<ForceCone> cones_for(const std::vector<ContactCandidate>& candidates);

// Fills per-contact world force vectors from the stacked solution.
void attach_world_forces(const std::vector<ContactCandidate>& candidates,
                         ContactForces& forces);

// Complementarity residuals of Eq-of-motion side conditions at one contact;
// all entries are >= 0 and zero at an exact solution.
struct ResidualRecord {
  double penetration = 0.0;      // max(-g, 0); |weld error| for bilateral
  double negative_force = 0.0;   // max(-f_N, 0)
  double force_gap = 0.0;        // |f_N * g|
  double force_gap_rate = 0.0;   // |f_N * gdot_N| (persistent contacts)
  double force_gap_accel = 0.0;  // |f_N * gddot_N|
  double cone_violation = 0.0;   // max(||f_T|| - mu f_N, 0)

  double worst() const;
};

// Lengths must agree (one entry per contact); gap accelerations may be empty
// when unavailable.
std::vector<ResidualRecord> complementarity_residual(
    const VecX& gaps, const VecX& gap_velocities,
    const VecX& gap_accelerations, const ContactForces& forces,
    const std::vector<ForceCone>& cones);

}  // namespace cobra

#endif  // COBRA_CONTACT_HPP_
