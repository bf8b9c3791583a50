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

#ifndef LIECBF__TRACKING_CONTROLLER_HPP_
#define LIECBF__TRACKING_CONTROLLER_HPP_

#include <vector>

#include "liecbf/lie_algebra.hpp"
#include "liecbf/rigid_body.hpp"

namespace liecbf {

struct ReferencePoint {
  Pose pose;
  Twist twist;
  Vec6 twist_dot = Vec6::Zero();
};

struct Waypoint {
  double time = 0.0;
  Vec3 position = Vec3::Zero();
  Rotation attitude;
};

/// How the position spline behaves at the first and last waypoint.
enum class EndpointVelocity {
  kRest,    // zero velocity
  kSecant,  // velocity of the adjacent chord
};

/// Piecewise reference on SE(3) through timed waypoints.
///
/// Position: cubic Hermite with chord-weighted tangents (C1 at the knots,
/// C-infinity inside each piece). Attitude: R_k exp(phi(tau) log(R_k^T R_k+1))
/// with the quintic smoothstep phi, so the angular velocity and acceleration
/// vanish at every knot. Twist and twist rate are analytic derivatives of the
/// interpolant. Outside [t_first, t_last] the reference holds the end pose
/// with zero twist.
class ReferenceTrajectory {
 public:
  /// Throws InvalidArgumentError for an empty list or non-increasing times.
  explicit ReferenceTrajectory(std::vector<Waypoint> waypoints,
                               EndpointVelocity endpoints = EndpointVelocity::kRest);

  static ReferenceTrajectory constant(const Pose& pose);

  ReferencePoint sample(double t) const;

  double start_time() const { return waypoints_.front().time; }
  double end_time() const { return waypoints_.back().time; }
  const std::vector<Waypoint>& waypoints() const { return waypoints_; }

 private:
  void check_derivatives() const;

  std::vector<Waypoint> waypoints_;
  std::vector<Vec3> tangents_;
  std::vector<Vec3> rotation_steps_;
};

/// Feedback gains; each matrix must be symmetric positive definite.
struct Gains {
  Mat3 k1 = 20.0 * Mat3::Identity();
  Mat3 k2 = 8.0 * Mat3::Identity();
  Mat6 kd = default_damping();

  static Mat6 default_damping();
  /// Throws InvalidArgumentError if a gain is not SPD.
  void validate() const;
};

/// The three pieces of the nominal wrench, each as a (torque, force) vector.
struct ControlTerms {
  Vec6 proportional = Vec6::Zero();
  Vec6 derivative = Vec6::Zero();
  Vec6 feedforward = Vec6::Zero();

  Vec6 total() const { return proportional + derivative + feedforward; }
};

ControlTerms control_terms(const State& state, const ReferencePoint& ref,
                           const Gains& gains, const InertiaTensor& inertia);

/// Geometric PD tracking law with feedforward, u_des = f_P + f_D + f_F.
inline Wrench control(const State& state, const ReferencePoint& ref,
                      const Gains& gains, const InertiaTensor& inertia) {
  return Wrench::from_vector(control_terms(state, ref, gains, inertia).total());
}

/// Rotation angle of R_d^T R in radians.
double attitude_error(const Rotation& r, const Rotation& r_d);

}  // namespace liecbf

#endif  // LIECBF__TRACKING_CONTROLLER_HPP_
