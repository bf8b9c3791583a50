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

#include "liecbf/barriers.hpp"

#include <cmath>
#include <sstream>

#include "liecbf/errors.hpp"

namespace liecbf {
namespace {

bool is_unit(const Vec3& v) {
  return v.allFinite() && std::abs(v.norm() - 1.0) <= 1e-12;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Mat3 outer(const Vec3& n) { return n * n.transpose(); }

}  // namespace

SlitSpec SlitSpec::centered(const Vec3& center, const Vec3& normal,
                            double width) {
  SlitSpec spec;
  spec.normal = normal;
  spec.center_left = center - 0.5 * width * normal;
  spec.center_right = center + 0.5 * width * normal;
  return spec;
}

void SlitSpec::validate() const {
  std::ostringstream msg;
  if (!is_unit(normal)) msg << "slit normal must be a unit vector; ";
  if (!is_unit(body_normal)) msg << "body normal must be a unit vector; ";
  if (!center_left.allFinite() || !center_right.allFinite()) msg << "slit centers must be finite; ";
  if (!(disk_radius > 0.0)) msg << "disk radius must be positive; ";
  if (!(margin >= 0.0)) msg << "margin must be nonnegative; ";
  if (!(sharpness > 0.0)) msg << "sharpness must be positive; ";
  if (!(gate.sigma > 0.0)) msg << "gate sigma must be positive; ";
  if (!(gate.ceiling > 0.0)) msg << "gate ceiling must be positive; ";
  if (!gate.offset.allFinite()) msg << "gate offset must be finite; ";
  if (!msg.str().empty()) {
    throw InvalidArgumentError("invalid slit: " + msg.str());
  }
}

SlitTerms slit_terms(const SlitSpec& spec, const Pose& g) {
  const Mat3& r = g.rotation.matrix();
  const Vec3& p = g.position;

  SlitTerms t;
  const Vec3 a = r.transpose() * spec.normal;
  t.alignment = a.dot(spec.body_normal);
  const double c2 = std::min(t.alignment * t.alignment, 1.0 - kSupportEpsilon);
  t.support = spec.disk_radius * std::sqrt(1.0 - c2);

  t.psi_left = spec.normal.dot(p - spec.center_left) - t.support - spec.margin;
  t.psi_right = -spec.normal.dot(p - spec.center_right) - t.support - spec.margin;

  // -log(exp(-b x) + exp(-b y)) / b, shifted by the minimum.
  const double lo = std::min(t.psi_left, t.psi_right);
  const double gap = std::abs(t.psi_left - t.psi_right);
  t.h_o = lo - std::log1p(std::exp(-spec.sharpness * gap)) / spec.sharpness;

  const Vec3 d = p - spec.gate_center();
  t.gate = std::exp(-0.5 * d.squaredNorm() / (spec.gate.sigma * spec.gate.sigma));
  t.h = (1.0 - t.gate) * spec.gate.ceiling + t.gate * t.h_o;
  return t;
}

double slit_h_rate(const SlitSpec& spec, const Pose& g, const Twist& xi) {
  const SlitTerms t = slit_terms(spec, g);
  if (t.alignment * t.alignment >= 1.0 - kSupportEpsilon) {
    throw SupportSingularityError(
        "slit support function is not differentiable with the disk normal "
        "parallel to the slit normal");
  }
  const Mat3& r = g.rotation.matrix();
  const Vec3 p_dot = r * xi.linear;
  const Vec3 a = r.transpose() * spec.normal;

  // a = R^T n  =>  a_dot = -w x a.
  const double alignment_rate = -xi.omega.cross(a).dot(spec.body_normal);
  const double support_rate =
      -spec.disk_radius * t.alignment * alignment_rate /
      std::sqrt(1.0 - t.alignment * t.alignment);

  const double normal_speed = spec.normal.dot(p_dot);
  const double psi_left_rate = normal_speed - support_rate;
  const double psi_right_rate = -normal_speed - support_rate;

  // Softmin weights exp(-b psi_j) / sum.
  const double w_left =
      1.0 / (1.0 + std::exp(-spec.sharpness * (t.psi_right - t.psi_left)));
  const double w_right = 1.0 - w_left;
  const double h_o_rate = w_left * psi_left_rate + w_right * psi_right_rate;

  const Vec3 d = g.position - spec.gate_center();
  const double gate_rate =
      -t.gate * d.dot(p_dot) / (spec.gate.sigma * spec.gate.sigma);

  return gate_rate * (t.h_o - spec.gate.ceiling) + t.gate * h_o_rate;
}

double constant_h(double e_max, double alpha_e) {
  if (!(e_max > 0.0) || !(alpha_e > 0.0)) {
    throw InvalidArgumentError("constant barrier needs E_max > 0 and alpha_e > 0");
  }
  return e_max / alpha_e;
}

double EnergyAugmentedCbf::h(const Pose& g) const {
  return std::visit(
      Overloaded{[&](const SlitSpec& s) { return slit_h(s, g); },
                 [&](const ConstantBarrier& c) { return constant_h(c.e_max, alpha_e); }},
      barrier);
}

double EnergyAugmentedCbf::h_rate(const Pose& g, const Twist& xi) const {
  return std::visit(
      Overloaded{[&](const SlitSpec& s) { return slit_h_rate(s, g, xi); },
                 [](const ConstantBarrier&) { return 0.0; }},
      barrier);
}

double EnergyAugmentedCbf::H(const State& state,
                             const InertiaTensor& inertia) const {
  return alpha_e * h(state.pose) - kinetic_energy(state.twist, inertia);
}

BarrierConstraint energy_augmented_constraint(const EnergyAugmentedCbf& cbf,
                                              const State& state,
                                              const InertiaTensor& inertia) {
  BarrierConstraint c;
  c.label = cbf.label;
  c.h_value = cbf.h(state.pose);
  c.H_value = cbf.alpha_e * c.h_value - kinetic_energy(state.twist, inertia);
  c.a = state.twist.vector();
  c.b = cbf.alpha_e * cbf.h_rate(state.pose, state.twist) + cbf.class_k(c.H_value);
  return c;
}

void DirectionalEnergyCbf::validate() const {
  if (!translational && !rotational) {
    throw InvalidArgumentError("directional CBF '" + label + "' has no direction enabled");
  }
  if (translational && !is_unit(*translational)) {
    throw InvalidArgumentError("directional CBF '" + label + "': n_v must be a unit vector");
  }
  if (rotational && !is_unit(*rotational)) {
    throw InvalidArgumentError("directional CBF '" + label + "': n_w must be a unit vector");
  }
  if (!(e_max > 0.0)) {
    throw InvalidArgumentError("directional CBF '" + label + "': E_max must be positive");
  }
}

Mat6 projection_matrix(const DirectionalEnergyCbf& cbf, const Pose& g) {
  const Rotation rt = g.rotation.transpose();
  Mat6 p = Mat6::Zero();
  if (cbf.rotational) {
    p.topLeftCorner<3, 3>() = outer(rt * *cbf.rotational);
  }
  if (cbf.translational) {
    p.bottomRightCorner<3, 3>() = outer(rt * *cbf.translational);
  }
  return p;
}

double directional_energy(const DirectionalEnergyCbf& cbf, const State& state,
                          const InertiaTensor& inertia) {
  const Vec6 xi = state.twist.vector();
  return 0.5 * xi.dot(projection_matrix(cbf, state.pose) * inertia.apply(xi));
}

Mat6 rotation_generator(const Twist& xi) {
  const Mat3 w = hat3(xi.omega);
  Mat6 omega = Mat6::Zero();
  omega.topLeftCorner<3, 3>() = w;
  omega.bottomRightCorner<3, 3>() = w;
  return omega;
}

double directional_virtual_power(const DirectionalEnergyCbf& cbf,
                                 const State& state,
                                 const InertiaTensor& inertia) {
  const Mat6 p = projection_matrix(cbf, state.pose);
  const Mat6 omega = rotation_generator(state.twist);
  const Mat6 p_dot = p * omega - omega * p;
  const Mat6 inertia_m = inertia.matrix();
  const Mat6 sym_pi = 0.5 * (p * inertia_m + inertia_m * p);

  const Vec6 xi = state.twist.vector();
  const Vec6 momentum = inertia_m * xi;
  const Vec6 drift_accel = inertia.apply_inverse(coadjoint(state.twist) * momentum);
  return xi.dot(sym_pi * drift_accel) + 0.5 * xi.dot(p_dot * momentum);
}

BarrierConstraint directional_constraint(const DirectionalEnergyCbf& cbf,
                                         const State& state,
                                         const InertiaTensor& inertia) {
  const Mat6 p = projection_matrix(cbf, state.pose);
  const Mat6 inertia_m = inertia.matrix();
  const Mat6 sym_pi = 0.5 * (p * inertia_m + inertia_m * p);
  const Vec6 xi = state.twist.vector();

  BarrierConstraint c;
  c.label = cbf.label;
  c.h_value = directional_energy(cbf, state, inertia);
  c.H_value = cbf.e_max - c.h_value;
  c.a = inertia.apply_inverse(sym_pi * xi);
  c.b = cbf.class_k(c.H_value) - directional_virtual_power(cbf, state, inertia);
  return c;
}

const std::string& cbf_label(const Cbf& cbf) {
  return std::visit([](const auto& c) -> const std::string& { return c.label; }, cbf);
}

BarrierConstraint make_constraint(const Cbf& cbf, const State& state,
                                  const InertiaTensor& inertia) {
  return std::visit(
      Overloaded{[&](const EnergyAugmentedCbf& c) {
                   return energy_augmented_constraint(c, state, inertia);
                 },
                 [&](const DirectionalEnergyCbf& c) {
                   return directional_constraint(c, state, inertia);
                 }},
      cbf);
}

BarrierConstraint barrier_values(const Cbf& cbf, const State& state,
                                 const InertiaTensor& inertia) {
  BarrierConstraint c;
  c.label = cbf_label(cbf);
  std::visit(Overloaded{[&](const EnergyAugmentedCbf& e) {
                          c.h_value = e.h(state.pose);
                          c.H_value = e.alpha_e * c.h_value -
                                      kinetic_energy(state.twist, inertia);
                        },
                        [&](const DirectionalEnergyCbf& d) {
                          c.h_value = directional_energy(d, state, inertia);
                          c.H_value = d.e_max - c.h_value;
                        }},
             cbf);
  return c;
}

}  // namespace liecbf
