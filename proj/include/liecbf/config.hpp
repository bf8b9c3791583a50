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

#ifndef LIECBF__CONFIG_HPP_
#define LIECBF__CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "liecbf/barriers.hpp"
#include "liecbf/errors.hpp"
#include "liecbf/tracking_controller.hpp"

namespace liecbf {

/// Parse or validation failure. `line` is 0 when the problem is not tied to
/// a line of a config file (e.g. a command-line override).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, int line, const std::string& message);

  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

enum class ScenarioKind { kSlitTraversal, kDirectionalLanding, kCustom };
enum class InfeasiblePolicy { kAbort, kContinue };
/// kContinuous: the continuous-time constraint a^T u <= b held over the step.
/// kSampled: the one-step condition H(x+) >= H - dt alpha(H).
enum class FilterMode { kContinuous, kSampled };

struct SlitConfig {
  std::string label;
  Vec3 center = Vec3::Zero();
  Vec3 normal = Vec3::UnitX();
  double width = 0.3;
  Vec3 body_normal = Vec3::UnitZ();
  double margin = 0.02;
  double sharpness = 25.0;
  double sigma = 12.0;
  Vec3 offset = Vec3::Zero();
  /// Gate ceiling K; unset means alpha_e / 2.
  std::optional<double> ceiling;
};

struct DirectionalConfig {
  std::string label;
  std::optional<Vec3> translational;
  std::optional<Vec3> rotational;
  double e_max = 1.5;
};

/// Energy-augmented CBF over the constant barrier h = E_max / alpha_e.
struct EnergyBoundConfig {
  std::string label;
  double e_max = 1.0;
};

struct ReferenceConfig {
  EndpointVelocity endpoints = EndpointVelocity::kRest;
  /// Waypoint attitudes are stored as rotation vectors.
  struct Point {
    double time = 0.0;
    Vec3 position = Vec3::Zero();
    Vec3 rotation = Vec3::Zero();
  };
  std::vector<Point> waypoints;
};

struct InitialConfig {
  Vec3 position = Vec3::Zero();
  Vec3 rotation = Vec3::Zero();  // rotation vector
  Vec3 omega = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::kCustom;
  double duration = 15.0;
  double dt = kDefaultTimeStep;
  double radius = 3.0;
  double mass = 3.0;
  Gains gains;
  double alpha_e = 150.0;
  double alpha = 1.0;
  std::vector<SlitConfig> slits;
  std::vector<DirectionalConfig> directional;
  std::vector<EnergyBoundConfig> energy_bounds;
  ReferenceConfig reference;
  InitialConfig initial;
  bool filter_enabled = true;
  FilterMode filter_mode = FilterMode::kSampled;
  InfeasiblePolicy on_infeasible = InfeasiblePolicy::kAbort;
  /// Stop once p_z < 0.01 m and the directional energy is below 1e-3 J.
  bool stop_on_touchdown = false;
  std::string output_dir = "results";
  std::string output_name = "run";
};

/// Strict parser for the flat `section.key = value` format. Unknown or
/// duplicate keys and malformed values raise ConfigError with the line.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Canonical text form; parse_config(to_config_text(c)) reproduces c.
std::string to_config_text(const ScenarioConfig& config);

/// 64-bit FNV-1a of the canonical text with the output keys blanked, as 16
/// hex digits. Runs that differ only in where they write share a digest.
std::string config_digest(const ScenarioConfig& config);

/// Throws ConfigError naming the first offending key.
void validate(const ScenarioConfig& config);

const char* to_string(ScenarioKind kind);

/// Assembled run-time objects.
InertiaTensor make_inertia(const ScenarioConfig& config);
std::vector<Cbf> make_cbfs(const ScenarioConfig& config);
ReferenceTrajectory make_reference(const ScenarioConfig& config);
State make_initial_state(const ScenarioConfig& config);
SlitSpec make_slit_spec(const SlitConfig& slit, const ScenarioConfig& config);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

}  // namespace liecbf

#endif  // LIECBF__CONFIG_HPP_
