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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "liecbf/errors.hpp"
#include "liecbf/tracking_controller.hpp"

namespace liecbf {
namespace {

struct Smoothstep {
  double value;
  double rate;   // d/dtau
  double accel;  // d2/dtau2
};

Smoothstep quintic(double tau) {
  const double t2 = tau * tau;
  const double t3 = t2 * tau;
  return {t3 * (10.0 - 15.0 * tau + 6.0 * t2),
          30.0 * t2 * (1.0 - 2.0 * tau + t2),
          60.0 * tau * (1.0 - 3.0 * tau + 2.0 * t2)};
}

}  // namespace

ReferenceTrajectory::ReferenceTrajectory(std::vector<Waypoint> waypoints,
                                         EndpointVelocity endpoints)
    : waypoints_(std::move(waypoints)) {
  if (waypoints_.empty()) {
    throw InvalidArgumentError("reference trajectory needs at least one waypoint");
  }
  for (std::size_t k = 1; k < waypoints_.size(); ++k) {
    if (!(waypoints_[k].time > waypoints_[k - 1].time)) {
      std::ostringstream msg;
      msg << "waypoint times must be strictly increasing (index " << k << ")";
      throw InvalidArgumentError(msg.str());
    }
  }

  const std::size_t n = waypoints_.size();
  tangents_.assign(n, Vec3::Zero());
  rotation_steps_.assign(n > 0 ? n - 1 : 0, Vec3::Zero());
  if (n == 1) {
    return;
  }

  std::vector<Vec3> chords(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = waypoints_[k + 1].time - waypoints_[k].time;
    chords[k] = (waypoints_[k + 1].position - waypoints_[k].position) / h;
    rotation_steps_[k] = log_so3(waypoints_[k].attitude.transpose() *
                                 waypoints_[k + 1].attitude);
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h_prev = waypoints_[k].time - waypoints_[k - 1].time;
    const double h_next = waypoints_[k + 1].time - waypoints_[k].time;
    tangents_[k] = (h_next * chords[k - 1] + h_prev * chords[k]) / (h_prev + h_next);
  }
  if (endpoints == EndpointVelocity::kSecant) {
    tangents_.front() = chords.front();
    tangents_.back() = chords.back();
  }
  check_derivatives();
}

ReferenceTrajectory ReferenceTrajectory::constant(const Pose& pose) {
  return ReferenceTrajectory({Waypoint{0.0, pose.position, pose.rotation}});
}

ReferencePoint ReferenceTrajectory::sample(double t) const {
  ReferencePoint out;
  if (waypoints_.size() == 1 || t <= start_time() || t >= end_time()) {
    const Waypoint& w = t <= start_time() ? waypoints_.front() : waypoints_.back();
    out.pose = {w.attitude, w.position};
    return out;
  }

  const auto it = std::upper_bound(
      waypoints_.begin(), waypoints_.end(), t,
      [](double value, const Waypoint& w) { return value < w.time; });
  const std::size_t k = static_cast<std::size_t>(it - waypoints_.begin()) - 1;
  const Waypoint& a = waypoints_[k];
  const Waypoint& b = waypoints_[k + 1];
  const double h = b.time - a.time;
  const double tau = (t - a.time) / h;
  const double tau2 = tau * tau;
  const double tau3 = tau2 * tau;

  const Vec3 ma = h * tangents_[k];
  const Vec3 mb = h * tangents_[k + 1];
  const Vec3 p = (2 * tau3 - 3 * tau2 + 1) * a.position +
                 (tau3 - 2 * tau2 + tau) * ma +
                 (-2 * tau3 + 3 * tau2) * b.position + (tau3 - tau2) * mb;
  const Vec3 p_dot = ((6 * tau2 - 6 * tau) * a.position +
                      (3 * tau2 - 4 * tau + 1) * ma +
                      (-6 * tau2 + 6 * tau) * b.position +
                      (3 * tau2 - 2 * tau) * mb) / h;
  const Vec3 p_ddot = ((12 * tau - 6) * a.position + (6 * tau - 4) * ma +
                       (-12 * tau + 6) * b.position + (6 * tau - 2) * mb) /
                      (h * h);

  const Smoothstep phi = quintic(tau);
  const Vec3& turn = rotation_steps_[k];
  const Rotation r = a.attitude * exp_so3(phi.value * turn);
  const Vec3 omega = (phi.rate / h) * turn;
  const Vec3 omega_dot = (phi.accel / (h * h)) * turn;

  const Vec3 v = r.transpose() * p_dot;
  const Vec3 v_dot = -omega.cross(v) + r.transpose() * p_ddot;

  out.pose = {r, p};
  out.twist = {omega, v};
  out.twist_dot << omega_dot, v_dot;
  return out;
}

void ReferenceTrajectory::check_derivatives() const {
  constexpr double kEps = 1e-6;
  for (std::size_t k = 0; k + 1 < waypoints_.size(); ++k) {
    const double t = 0.5 * (waypoints_[k].time + waypoints_[k + 1].time);
    const ReferencePoint lo = sample(t - kEps);
    const ReferencePoint mid = sample(t);
    const ReferencePoint hi = sample(t + kEps);
    const Vec3 p_dot = (hi.pose.position - lo.pose.position) / (2 * kEps);
    const Vec3 omega = log_so3(lo.pose.rotation.transpose() * hi.pose.rotation) /
                       (2 * kEps);
    const Vec6 xi_dot = (hi.twist.vector() - lo.twist.vector()) / (2 * kEps);
    const double scale = 1.0 + mid.twist.vector().norm() + mid.twist_dot.norm();
    const double err =
        (p_dot - mid.pose.rotation * mid.twist.linear).norm() +
        (omega - mid.twist.omega).norm() + (xi_dot - mid.twist_dot).norm();
    if (err > 1e-4 * scale) {
      std::ostringstream msg;
      msg << "reference derivatives inconsistent on segment " << k
          << " (residual " << err << ")";
      throw InvalidArgumentError(msg.str());
    }
  }
}

}  // namespace liecbf
