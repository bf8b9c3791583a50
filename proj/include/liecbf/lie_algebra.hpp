// Copyright 2026 The liecbf Authors
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

#ifndef LIECBF__LIE_ALGEBRA_HPP_
#define LIECBF__LIE_ALGEBRA_HPP_

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace liecbf {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Element of SO(3). Construction from an arbitrary matrix is checked;
/// the group operations below keep the invariant up to rounding.
class Rotation {
 public:
  static constexpr double kTolerance = 1e-9;

  Rotation() : m_(Mat3::Identity()) {}

  /// Throws DegenerateRotationError unless m^T m = I and det(m) = 1 within
  /// `tolerance`.
  static Rotation from_matrix(const Mat3& m, double tolerance = kTolerance);

  const Mat3& matrix() const { return m_; }
  Rotation transpose() const { return Rotation(m_.transpose(), Unchecked{}); }
  Rotation inverse() const { return transpose(); }

  Rotation operator*(const Rotation& other) const {
    return Rotation(m_ * other.m_, Unchecked{});
  }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

  /// Frobenius norm of m^T m - I.
  double orthogonality_error() const;

 private:
  struct Unchecked {};
  Rotation(const Mat3& m, Unchecked) : m_(m) {}

  friend Rotation exp_so3(const Vec3& w);
  friend Rotation reorthonormalize(const Mat3& m);

  Mat3 m_;
};

/// Rigid transform g = (R, p).
struct Pose {
  Rotation rotation;
  Vec3 position = Vec3::Zero();

  Pose operator*(const Pose& other) const {
    return {rotation * other.rotation, rotation * other.position + position};
  }
  Pose inverse() const {
    const Rotation rt = rotation.transpose();
    return {rt, -(rt * position)};
  }
};

/// Body-frame twist. The 6-vector form is always (omega, v), angular first.
struct Twist {
  Vec3 omega = Vec3::Zero();
  Vec3 linear = Vec3::Zero();

  Vec6 vector() const {
    Vec6 out;
    out << omega, linear;
    return out;
  }
  static Twist from_vector(const Vec6& xi) {
    return {xi.head<3>(), xi.tail<3>()};
  }
};

Mat3 hat3(const Vec3& w);

/// vee of the skew-symmetric part of `m`.
Vec3 vee3(const Mat3& m);

/// Rodrigues formula. Below |w| = 1e-8 the sinc coefficients switch to their
/// second-order Taylor expansions.
Rotation exp_so3(const Vec3& w);

/// Rotation vector with angle in [0, pi]. For angles within 1e-6 of pi the
/// axis is read off the symmetric part (R + R^T) / 2 = I + (1 - cos t) k k^T,
/// with its sign fixed by the (small) skew part when that is informative.
Vec3 log_so3(const Rotation& r);

/// Left Jacobian of SO(3), V(w) with exp_se3((w, v)) = (exp(w), V(w) v).
Mat3 left_jacobian_so3(const Vec3& w);

/// Group exponential on SE(3).
Pose exp_se3(const Twist& xi);

/// Ad_g = [[R, 0], [p^ R, R]].
Mat6 adjoint_group(const Pose& g);

/// ad_xi = [[w^, 0], [v^, w^]].
Mat6 adjoint_algebra(const Twist& xi);

/// ad*_xi = ad_xi^T.
Mat6 coadjoint(const Twist& xi);

/// Closest rotation in Frobenius norm (orthogonal polar factor). Throws
/// DegenerateRotationError when det(m) <= 1e-9.
Rotation reorthonormalize(const Mat3& m);

/// Skew-symmetric part (m - m^T) / 2.
inline Mat3 skew(const Mat3& m) { return 0.5 * (m - m.transpose()); }

bool all_finite(const Vec6& v);

}  // namespace liecbf

#endif  // LIECBF__LIE_ALGEBRA_HPP_
