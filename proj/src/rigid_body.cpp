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

#include "liecbf/rigid_body.hpp"

#include <cmath>
#include <sstream>

#include "liecbf/errors.hpp"

namespace liecbf {

InertiaTensor::InertiaTensor(const Vec3& principal_moments, double mass)
    : moments_(principal_moments), mass_(mass) {
  if (!moments_.allFinite() || !std::isfinite(mass_) ||
      moments_.minCoeff() <= 0.0 || mass_ <= 0.0) {
    std::ostringstream msg;
    msg << "inertia must be positive definite (J = " << moments_.transpose()
        << ", m = " << mass_ << ")";
    throw InvalidArgumentError(msg.str());
  }
}

InertiaTensor InertiaTensor::disk(double radius, double mass) {
  if (!(radius > 0.0)) {
    throw InvalidArgumentError("disk radius must be positive");
  }
  const double jx = 0.25 * mass * radius * radius;
  const double jz = 0.5 * mass * radius * radius;
  return InertiaTensor(Vec3(jx, jx, jz), mass);
}

Mat6 InertiaTensor::matrix() const {
  Vec6 d;
  d << moments_, Vec3::Constant(mass_);
  return d.asDiagonal();
}

Mat6 InertiaTensor::inverse_matrix() const {
  Vec6 d;
  d << moments_.cwiseInverse(), Vec3::Constant(1.0 / mass_);
  return d.asDiagonal();
}

Vec6 InertiaTensor::apply(const Vec6& xi) const {
  Vec6 out;
  out << moments_.cwiseProduct(xi.head<3>()), mass_ * xi.tail<3>();
  return out;
}

Vec6 InertiaTensor::apply_inverse(const Vec6& mu) const {
  Vec6 out;
  out << mu.head<3>().cwiseQuotient(moments_), mu.tail<3>() / mass_;
  return out;
}

double InertiaTensor::min_eigenvalue() const {
  return std::min(moments_.minCoeff(), mass_);
}

Vec6 acceleration(const Twist& xi, const Wrench& u,
                  const InertiaTensor& inertia) {
  const Vec6 momentum = inertia.apply(xi.vector());
  return inertia.apply_inverse(u.vector() + coadjoint(xi) * momentum);
}

double kinetic_energy(const Twist& xi, const InertiaTensor& inertia) {
  const Vec6 v = xi.vector();
  return 0.5 * v.dot(inertia.apply(v));
}

State step(const State& state, const Wrench& u, const InertiaTensor& inertia,
           double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgumentError("time step must be positive and finite");
  }
  auto f = [&](const Vec6& xi) {
    return acceleration(Twist::from_vector(xi), u, inertia);
  };

  const Vec6 xi1 = state.twist.vector();
  const Vec6 k1 = f(xi1);
  const Vec6 xi2 = xi1 + 0.5 * dt * k1;
  const Vec6 k2 = f(xi2);
  const Vec6 xi3 = xi1 + 0.5 * dt * k2;
  const Vec6 k3 = f(xi3);
  const Vec6 xi4 = xi1 + dt * k3;
  const Vec6 k4 = f(xi4);

  const Vec6 xi_next = xi1 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  const Vec6 xi_mean = (xi1 + 2.0 * xi2 + 2.0 * xi3 + xi4) / 6.0;

  const Pose increment = exp_se3(Twist::from_vector(dt * xi_mean));
  const Pose moved = state.pose * increment;

  if (!xi_next.allFinite() || !moved.position.allFinite() ||
      !moved.rotation.matrix().allFinite()) {
    throw NonFiniteStateError("integration step produced a non-finite state");
  }

  State next;
  next.pose.rotation = reorthonormalize(moved.rotation.matrix());
  next.pose.position = moved.position;
  next.twist = Twist::from_vector(xi_next);
  return next;
}

}  // namespace liecbf
