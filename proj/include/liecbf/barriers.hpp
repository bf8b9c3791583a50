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

#ifndef LIECBF__BARRIERS_HPP_
#define LIECBF__BARRIERS_HPP_

#include <optional>
#include <string>
#include <variant>

#include "liecbf/lie_algebra.hpp"
#include "liecbf/rigid_body.hpp"

namespace liecbf {

/// Linear class-K function s -> coefficient * s.
struct ClassK {
  double coefficient = 1.0;

  double operator()(double s) const { return coefficient * s; }
};

/// Affine wrench-space constraint a^T u <= b, plus the barrier values it was
/// built from.
///
/// For energy-augmented barriers `h_value` is the kinematic barrier h(g); for
/// directional-energy barriers it is the directional energy E_dir.
struct BarrierConstraint {
  Vec6 a = Vec6::Zero();
  double b = 0.0;
  std::string label;
  double h_value = 0.0;
  double H_value = 0.0;
};

/// Gaussian gate chi(p) = exp(-|p - c|^2 / (2 sigma^2)), c = slit centre +
/// offset, blending the slit barrier toward the ceiling K away from the slit.
struct SlitGate {
  double sigma = 12.0;
  Vec3 offset = Vec3::Zero();
  double ceiling = 1.0;
};

/// Two parallel planes through center_left and center_right with outward
/// normals +normal and -normal, and a thin disk of radius r with body-frame
/// symmetry axis body_normal.
struct SlitSpec {
  Vec3 normal = Vec3::UnitX();
  Vec3 center_left = Vec3::Zero();
  Vec3 center_right = Vec3::Zero();
  double disk_radius = 1.0;
  Vec3 body_normal = Vec3::UnitZ();
  double margin = 0.02;
  double sharpness = 25.0;
  SlitGate gate;

  /// Slit of total width `width` centred at `center`:
  /// c_L = center - width/2 n, c_R = center + width/2 n.
  static SlitSpec centered(const Vec3& center, const Vec3& normal, double width);

  Vec3 midpoint() const { return 0.5 * (center_left + center_right); }
  Vec3 gate_center() const { return midpoint() + gate.offset; }

  /// Throws InvalidArgumentError when an invariant is violated.
  void validate() const;
};

/// (a^T b)^2 is clamped to at most 1 - kSupportEpsilon.
constexpr double kSupportEpsilon = 1e-9;

/// Intermediate quantities of the slit barrier at one pose.
struct SlitTerms {
  double psi_left = 0.0;
  double psi_right = 0.0;
  double support = 0.0;   // s(R)
  double alignment = 0.0; // a^T b
  double h_o = 0.0;       // smooth minimum of the two distances
  double gate = 0.0;      // chi(p)
  double h = 0.0;
};

SlitTerms slit_terms(const SlitSpec& spec, const Pose& g);

inline double slit_h(const SlitSpec& spec, const Pose& g) {
  return slit_terms(spec, g).h;
}

/// Lie derivative of slit_h along g_dot = g xi^. Throws
/// SupportSingularityError when (a^T b)^2 >= 1 - kSupportEpsilon.
double slit_h_rate(const SlitSpec& spec, const Pose& g, const Twist& xi);

/// h(g) = E_max / alpha_e; bounds the total kinetic energy by E_max.
struct ConstantBarrier {
  double e_max = 1.0;
};

double constant_h(double e_max, double alpha_e);

using KinematicBarrier = std::variant<SlitSpec, ConstantBarrier>;

/// H(g, xi) = alpha_e h(g) - E(xi).
struct EnergyAugmentedCbf {
  std::string label;
  KinematicBarrier barrier;
  double alpha_e = 1.0;
  ClassK class_k;

  double h(const Pose& g) const;
  double h_rate(const Pose& g, const Twist& xi) const;
  double H(const State& state, const InertiaTensor& inertia) const;
};

/// Emits xi^T u <= alpha_e L_f h + alpha(H).
BarrierConstraint energy_augmented_constraint(const EnergyAugmentedCbf& cbf,
                                              const State& state,
                                              const InertiaTensor& inertia);

/// Bounds the kinetic energy along the world-frame translational direction
/// n_v and/or the world-frame rotation axis n_w. A disengaged direction is
/// std::nullopt.
struct DirectionalEnergyCbf {
  std::string label;
  std::optional<Vec3> translational;
  std::optional<Vec3> rotational;
  double e_max = 1.0;
  ClassK class_k;

  void validate() const;
};

/// P(g) = diag(n_wB n_wB^T, n_vB n_vB^T) with n_B = R^T n.
Mat6 projection_matrix(const DirectionalEnergyCbf& cbf, const Pose& g);

/// E_dir = xi^T P II xi / 2 (only the symmetric part of P II contributes).
double directional_energy(const DirectionalEnergyCbf& cbf, const State& state,
                          const InertiaTensor& inertia);

/// Omega(xi) = diag(w^, w^); P_dot = P Omega - Omega P along the flow.
Mat6 rotation_generator(const Twist& xi);

/// Drift part of the directional-energy rate, L_f E_dir. When P II is
/// symmetric this is xi^T (2 P ad*_xi + [P, Omega]) II xi / 2.
double directional_virtual_power(const DirectionalEnergyCbf& cbf,
                                 const State& state,
                                 const InertiaTensor& inertia);

/// Emits a^T u <= alpha(E_max - E_dir) - L_f E_dir with
/// a = II^-1 sym(P II) xi (equal to P xi whenever P II is symmetric).
BarrierConstraint directional_constraint(const DirectionalEnergyCbf& cbf,
                                         const State& state,
                                         const InertiaTensor& inertia);

using Cbf = std::variant<EnergyAugmentedCbf, DirectionalEnergyCbf>;

const std::string& cbf_label(const Cbf& cbf);
BarrierConstraint make_constraint(const Cbf& cbf, const State& state,
                                  const InertiaTensor& inertia);

/// Barrier values only (a and b left zero). Never evaluates the slit rate,
/// so it is safe at the support singularity; used for unfiltered runs.
BarrierConstraint barrier_values(const Cbf& cbf, const State& state,
                                 const InertiaTensor& inertia);

}  // namespace liecbf

#endif  // LIECBF__BARRIERS_HPP_
