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

#include "liecbf/tracking_controller.hpp"

#include <Eigen/Dense>

#include "liecbf/errors.hpp"

namespace liecbf {
namespace {

template <typename M>
bool is_spd(const M& m) {
  if (!m.allFinite() || (m - m.transpose()).norm() > 1e-12 * (1.0 + m.norm())) {
    return false;
  }
  Eigen::LLT<M> llt(m);
  return llt.info() == Eigen::Success;
}

}  // namespace

Mat6 Gains::default_damping() {
  Vec6 d;
  d << 0.8, 0.8, 0.8, 8.0, 8.0, 8.0;
  return d.asDiagonal();
}

void Gains::validate() const {
  if (!is_spd(k1)) throw InvalidArgumentError("gain k1 must be symmetric positive definite");
  if (!is_spd(k2)) throw InvalidArgumentError("gain k2 must be symmetric positive definite");
  if (!is_spd(kd)) throw InvalidArgumentError("gain kd must be symmetric positive definite");
}

ControlTerms control_terms(const State& state, const ReferencePoint& ref,
                           const Gains& gains, const InertiaTensor& inertia) {
  const Mat3& r = state.pose.rotation.matrix();
  const Mat3& r_d = ref.pose.rotation.matrix();
  const Vec3 p_err = state.pose.position - ref.pose.position;
  const Vec3& omega = state.twist.omega;
  const Vec3& v = state.twist.linear;
  const Vec3& omega_d = ref.twist.omega;
  const Vec3& v_d = ref.twist.linear;
  const Mat3 rt_rd = r.transpose() * r_d;

  ControlTerms terms;
  terms.proportional.head<3>() = -vee3(skew(gains.k1 * r_d.transpose() * r));
  terms.proportional.tail<3>() = -r.transpose() * (r + r_d) * gains.k2 *
                                 (r.transpose() + r_d.transpose()) * p_err;

  Vec6 velocity_error;
  velocity_error.head<3>() = omega - rt_rd * omega_d;
  velocity_error.tail<3>() =
      v - rt_rd * (v_d + omega_d.cross(r.transpose() * p_err));
  terms.derivative = -gains.kd * velocity_error;

  // Reference twist carried into the current body frame.
  const Mat6 ad_rel = adjoint_group(state.pose.inverse() * ref.pose);
  const Mat6 inertia_m = inertia.matrix();
  terms.feedforward = -coadjoint(state.twist) * inertia_m * ad_rel * ref.twist.vector() +
                      inertia_m * ad_rel * ref.twist_dot;
  return terms;
}

double attitude_error(const Rotation& r, const Rotation& r_d) {
  return log_so3(r_d.transpose() * r).norm();
}

}  // namespace liecbf
