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

#ifndef LIECBF__SCENARIO_HPP_
#define LIECBF__SCENARIO_HPP_

#include <string>
#include <vector>

#include "liecbf/config.hpp"
#include "liecbf/log_io.hpp"

namespace liecbf {

/// Two slits, the second tilted 45 degrees about world y, traversed by a
/// disk of radius 3 m and mass 3 kg over 15 s. Gate ceiling K = alpha_e / 2.
ScenarioConfig build_scenario_slit(double alpha_e);

/// Disk starting at [15, 0, 10] with a 90 degree tilt about x, landing at
/// the origin under a translational directional bound of 1.5 J along e3.
ScenarioConfig build_scenario_landing(double alpha);

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
ScenarioConfig preset(const std::string& name);

/// Sets one sweepable parameter: alpha_e, alpha, emax, dt or duration.
/// `emax` rewrites every directional and constant energy bound.
void apply_override(ScenarioConfig& config, const std::string& param, double value);

/// Fixed-step closed loop over N = round(duration / dt) steps. Each step
/// samples the reference, computes the nominal wrench, filters it, logs the
/// pre-step state and inputs, then integrates. Records go to `sink` (may be
/// null). Throws InfeasibleError under the abort policy, and propagates
/// NonFiniteStateError and SupportSingularityError.
RunSummary run(const ScenarioConfig& config, LogSink* sink = nullptr);

}  // namespace liecbf

#endif  // LIECBF__SCENARIO_HPP_
