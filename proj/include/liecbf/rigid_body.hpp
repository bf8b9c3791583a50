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

#ifndef LIECBF__RIGID_BODY_HPP_
#define LIECBF__RIGID_BODY_HPP_

#include "liecbf/lie_algebra.hpp"

namespace liecbf {

/// Inertia tensor diag(J, m I3) of a rigid body with principal axes aligned
/// to the body frame.
class InertiaTensor {
 public:
  /// Throws InvalidArgumentError unless all entries are finite and positive.
  InertiaTensor(const Vec3& principal_moments, double mass);

  /// Thin disk of radius r about its symmetry axis body e3:
  /// J = diag(m r^2 / 4, m r^2 / 4, m r^2 / 2).
  static InertiaTensor disk(double radius, double mass);

  const Vec3& principal_moments() const { return moments_; }
  double mass() const { return mass_; }
  Mat6 matrix() const;
  Mat6 inverse_matrix() const;
  Vec6 apply(const Vec6& xi) const;
  Vec6 apply_inverse(const Vec6& mu) const;
  double min_eigenvalue() const;

 private:
  Vec3 moments_;
  double mass_;
};

/// Body-frame torque and force; the 6-vector form is (torque, force).
struct Wrench {
  Vec3 torque = Vec3::Zero();
  Vec3 force = Vec3::Zero();

  Vec6 vector() const {
    Vec6 out;
    out << torque, force;
    return out;
  }
  static Wrench from_vector(const Vec6& u) {
    return {u.head<3>(), u.tail<3>()};
  }
};

struct State {
  Pose pose;
  Twist twist;
};

/// xi_dot = II^-1 (u + ad*_xi II xi).
Vec6 acceleration(const Twist& xi, const Wrench& u, const InertiaTensor& inertia);
inline Vec6 acceleration(const State& state, const Wrench& u,
                         const InertiaTensor& inertia) {
  return acceleration(state.twist, u, inertia);
}

/// E = xi^T II xi / 2.
double kinetic_energy(const Twist& xi, const InertiaTensor& inertia);

constexpr double kDefaultTimeStep = 1e-3;

/// One step of length `dt` with `u` held constant.
///
/// The twist is advanced by classical RK4. The pose is advanced by the group
/// exponential of dt times the RK4-weighted mean of the stage twists and the
/// rotation is then projected back onto SO(3). Throws InvalidArgumentError
/// for dt <= 0 and NonFiniteStateError if the result is not finite.
State step(const State& state, const Wrench& u, const InertiaTensor& inertia,
           double dt);

}  // namespace liecbf

#endif  // LIECBF__RIGID_BODY_HPP_
