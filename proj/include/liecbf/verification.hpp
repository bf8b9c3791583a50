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

#ifndef LIECBF__VERIFICATION_HPP_
#define LIECBF__VERIFICATION_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "liecbf/barriers.hpp"
#include "liecbf/rigid_body.hpp"

namespace liecbf::verification {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  std::uint64_t seed = 20261018;
  /// Scratch directory for determinism runs; empty means the system temp dir.
  std::string work_dir;
  /// When set, determinism runs this executable (`run` subcommand) twice
  /// instead of calling the library in-process.
  std::string cli_path;
  std::vector<double> landing_alphas{0.5, 1.0, 2.0, 4.0};
};

/// Independent reference dynamics on (R, p, w, v) with R integrated as a
/// plain 3x3 matrix: J w' = J w x w + tau, m v' = m v x w + f,
/// R' = R w^, p' = R v. Classical RK4 with `substeps` steps over `duration`
/// (negative durations integrate backwards).
State oracle_flow(const State& start, const Wrench& u, const InertiaTensor& inertia,
                  double duration, int substeps);

/// H'(u) predicted by a constraint a^T u <= b: b - alpha(H) - a^T u.
double predicted_rate(const BarrierConstraint& c, const ClassK& class_k, const Vec6& u);

CheckResult check_slit_safety(const Options& options);
CheckResult check_landing_energy(const Options& options);
CheckResult check_set_inclusion(const Options& options);
CheckResult check_drift_algebra(const Options& options);
CheckResult check_qp_optimality(const Options& options);
CheckResult check_conservation(const Options& options);
CheckResult check_integrator_order(const Options& options);
CheckResult check_determinism(const Options& options);

struct NamedCheck {
  std::string name;
  std::function<CheckResult(const Options&)> run;
};

/// Every acceptance check in a fixed order.
std::vector<NamedCheck> acceptance_checks();

/// `PASS <name>: <detail>` or `FAIL ...`.
std::string format_result(const CheckResult& result);

}  // namespace liecbf::verification

#endif  // LIECBF__VERIFICATION_HPP_
