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

#ifndef LIECBF__SAFETY_FILTER_HPP_
#define LIECBF__SAFETY_FILTER_HPP_

#include <cstddef>
#include <vector>

#include "liecbf/barriers.hpp"
#include "liecbf/errors.hpp"
#include "liecbf/rigid_body.hpp"

namespace liecbf {

/// min |u - u_des|^2  s.t.  a_i^T u <= b_i.
struct QpProblem {
  Vec6 u_des = Vec6::Zero();
  std::vector<BarrierConstraint> constraints;
};

struct QpSolution {
  Vec6 u_star = Vec6::Zero();
  /// Constraints carrying a multiplier, ascending.
  std::vector<std::size_t> active_set;
  std::vector<double> multipliers;
  double correction_norm = 0.0;
  /// More constraints are tight at u_star than their gradients have rank
  /// (e.g. two slit constraints sharing a = xi). The returned point is still
  /// the unique projection; the multipliers sit on an independent subset.
  bool rank_deficient = false;
};

/// Gradients below this norm make a constraint vacuous (or infeasible when
/// its right-hand side is negative).
constexpr double kVacuousTolerance = 1e-10;
constexpr std::size_t kMaxConstraints = 12;

/// The feasible polyhedron is empty. Carries the input closest to u_des among
/// those minimising the largest violation, for log-and-continue policies.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, const Vec6& least_violating,
                  double max_violation)
      : Error(what), least_violating_(least_violating), max_violation_(max_violation) {}

  const Vec6& least_violating() const { return least_violating_; }
  double max_violation() const { return max_violation_; }

 private:
  Vec6 least_violating_;
  double max_violation_;
};

/// Exact active-set enumeration: subsets are tried by increasing size, then
/// in lexicographic index order, and the first KKT point (nonnegative
/// multipliers, primal feasible) is returned. Throws InfeasibleError.
QpSolution solve(const QpProblem& qp);

struct FilterResult {
  Wrench u;
  std::vector<BarrierConstraint> constraints;
  std::vector<bool> active;
  QpSolution qp;
  /// Sampled-data filter only: QP solves used and the final shortfall
  /// max_i(target_i - H_i(x+)), <= 0 when every condition holds.
  int iterations = 0;
  double residual = 0.0;
};

/// One constraint per CBF, then solve. An empty CBF list passes u_des
/// through untouched.
FilterResult filter(const State& state, const Wrench& u_des,
                    const std::vector<Cbf>& cbfs, const InertiaTensor& inertia);

/// Sampled-data variant for a zero-order hold of length dt. Enforces the
/// one-step condition H_i(x+) >= H_i(x) - dt alpha_i(H_i(x)), with x+ =
/// step(x, u, dt), by sequential quadratic programming: each pass linearises
/// H_i(x+) in u by central differences, adds a curvature term estimated once
/// at u_des, calls solve() and backtracks on an l1 merit. u_des is returned as is
/// when it already satisfies every condition. `constraints` carries only the
/// barrier values at x; the slit rate is never evaluated.
FilterResult filter_sampled(const State& state, const Wrench& u_des,
                            const std::vector<Cbf>& cbfs, const InertiaTensor& inertia,
                            double dt);

}  // namespace liecbf

#endif  // LIECBF__SAFETY_FILTER_HPP_
