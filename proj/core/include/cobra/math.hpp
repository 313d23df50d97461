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

#ifndef COBRA_MATH_HPP_
#define COBRA_MATH_HPP_

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace cobra {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Quat = Eigen::Quaterniond;
using Isometry = Eigen::Isometry3d;

inline Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return s;
}

// Quaternion exponential of a rotation vector (angle*axis).
inline Quat quat_exp(const Vec3& w) {
  const double angle = w.norm();
  if (angle < 1e-12) {
    // First-order expansion; renormalized below.
    Quat q(1.0, 0.5 * w.x(), 0.5 * w.y(), 0.5 * w.z());
    q.normalize();
    return q;
  }
  const Vec3 axis = w / angle;
  return Quat(Eigen::AngleAxisd(angle, axis));
}

// Rotation vector such that quat_exp(quat_log(q)) == q (angle in [0, pi]).
inline Vec3 quat_log(const Quat& q_in) {
  Quat q = q_in.normalized();
  if (q.w() < 0) q.coeffs() *= -1.0;
  const double vn = q.vec().norm();
  if (vn < 1e-12) return 2.0 * q.vec();
  const double angle = 2.0 * std::atan2(vn, q.w());
  return (angle / vn) * q.vec();
}

// Deterministic, branch-light orthonormal basis completing a unit normal.
// From the normal n it returns tangents t1, t2 with {t1, t2, n} right-handed.
inline void tangent_basis(const Vec3& n, Vec3& t1, Vec3& t2) {
  const double s = std::copysign(1.0, n.z());
  const double a = -1.0 / (s + n.z());
  const double b = n.x() * n.y() * a;
  t1 = Vec3(1.0 + s * n.x() * n.x() * a, s * b, -s * n.x());
  t2 = Vec3(b, s + n.y() * n.y() * a, -n.y());
}

inline bool approx_symmetric(const MatX& m, double rel_tol) {
  const double scale = std::max(1e-300, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

}  // namespace cobra

#endif  // COBRA_MATH_HPP_
