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

#include "liecbf/scenario.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "liecbf/safety_filter.hpp"

namespace liecbf {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg = kPi / 180.0;

// Disk normal tilted by `tilt` off the x-z plane after a rotation `pitch`
// about world y. The tilt keeps the support function away from its kink.
Vec3 slit_attitude(double pitch_deg, double tilt_deg) {
  const Rotation r = exp_so3(Vec3(0.0, pitch_deg * kDeg, 0.0)) *
                     exp_so3(Vec3(tilt_deg * kDeg, 0.0, 0.0));
  return log_so3(r);
}

constexpr double kTouchdownHeight = 0.01;
constexpr double kTouchdownEnergy = 1e-3;

double normal_energy(const std::vector<Cbf>& cbfs,
                     const State& state, const InertiaTensor& inertia) {
  for (const Cbf& cbf : cbfs) {
    if (const auto* d = std::get_if<DirectionalEnergyCbf>(&cbf)) {
      return directional_energy(*d, state, inertia);
    }
  }
  return kinetic_energy(state.twist, inertia);
}

}  // namespace

ScenarioConfig build_scenario_slit(double alpha_e) {
  if (!(alpha_e > 0.0)) throw ConfigError("cbf.alpha_e", 0, "must be positive");
  ScenarioConfig c;
  c.kind = ScenarioKind::kSlitTraversal;
  c.duration = 15.0;
  c.alpha_e = alpha_e;
  c.alpha = 1.0;
  c.output_name = "slit";

  SlitConfig s1;
  s1.label = "slit1";
  s1.center = {2.8, 1.0, 1.6};
  s1.normal = Vec3::UnitX();
  s1.offset = {0.0, 0.5, 0.0};
  SlitConfig s2 = s1;
  s2.label = "slit2";
  s2.center = {2.8, -2.0, 1.6};
  s2.normal = exp_so3(Vec3(0.0, 45.0 * kDeg, 0.0)) * Vec3::UnitX();
  c.slits = {s1, s2};

  // Through slit 1 edge-on, dip below both gates while turning the disk by
  // 45 degrees, then rise into slit 2 and leave along -y.
  const double tilt = 1.0;
  c.reference.endpoints = EndpointVelocity::kRest;
  c.reference.waypoints = {
      {0.0, {2.8, 6.5, 1.6}, slit_attitude(90.0, tilt)},
      {2.5, {2.8, 1.5, 1.6}, slit_attitude(90.0, tilt)},
      {4.5, {2.3, 1.5, -0.9}, slit_attitude(90.0, tilt)},
      {7.0, {2.3, 0.0, -0.9}, slit_attitude(120.0, tilt)},
      {9.0, {2.55, -2.5, -0.9}, slit_attitude(135.0, tilt)},
      {11.0, {2.8, -2.5, 1.6}, slit_attitude(135.0, tilt)},
      {15.0, {2.8, -7.0, 1.6}, slit_attitude(135.0, tilt)},
  };
  c.initial.position = c.reference.waypoints.front().position;
  c.initial.rotation = c.reference.waypoints.front().rotation;
  return c;
}

ScenarioConfig build_scenario_landing(double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("cbf.alpha", 0, "must be positive");
  ScenarioConfig c;
  c.kind = ScenarioKind::kDirectionalLanding;
  c.duration = 20.0;
  c.alpha = alpha;
  c.output_name = "landing";
  c.stop_on_touchdown = true;

  DirectionalConfig pad;
  pad.label = "pad";
  pad.translational = Vec3::UnitX().cross(Vec3::UnitY());
  pad.e_max = 1.5;
  c.directional = {pad};

  c.initial.position = {15.0, 0.0, 10.0};
  c.initial.rotation = {kPi / 2.0, 0.0, 0.0};
  c.reference.endpoints = EndpointVelocity::kRest;
  c.reference.waypoints = {
      {0.0, c.initial.position, Vec3::Zero()},
      {6.0, Vec3::Zero(), Vec3::Zero()},
  };
  return c;
}

std::vector<std::string> preset_names() { return {"slit", "landing"}; }

ScenarioConfig preset(const std::string& name) {
  if (name == "slit") return build_scenario_slit(150.0);
  if (name == "landing") return build_scenario_landing(1.0);
  throw ConfigError("preset", 0, "unknown preset '" + name + "' (expected slit or landing)");
}

void apply_override(ScenarioConfig& config, const std::string& param, double value) {
  if (param == "alpha_e") {
    config.alpha_e = value;
  } else if (param == "alpha") {
    config.alpha = value;
  } else if (param == "dt") {
    config.dt = value;
  } else if (param == "duration") {
    config.duration = value;
  } else if (param == "emax") {
    if (config.directional.empty() && config.energy_bounds.empty()) {
      throw ConfigError("emax", 0, "no energy bound is configured");
    }
    for (auto& d : config.directional) d.e_max = value;
    for (auto& e : config.energy_bounds) e.e_max = value;
  } else {
    throw ConfigError(param, 0, "unknown parameter (expected alpha_e, alpha, emax, dt or duration)");
  }
  validate(config);
}

RunSummary run(const ScenarioConfig& config, LogSink* sink) {
  const auto started = std::chrono::steady_clock::now();
  validate(config);
  const InertiaTensor inertia = make_inertia(config);
  const std::vector<Cbf> cbfs = make_cbfs(config);
  const ReferenceTrajectory reference = make_reference(config);
  State state = make_initial_state(config);

  LogSchema schema;
  for (const Cbf& cbf : cbfs) {
    schema.cbfs.push_back({cbf_label(cbf), std::holds_alternative<DirectionalEnergyCbf>(cbf)});
  }

  RunSummary summary;
  summary.scenario = to_string(config.kind);
  summary.config_digest = config_digest(config);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (const auto& e : schema.cbfs) {
    summary.cbfs.push_back({e.label, e.directional, kInf, kInf, -kInf});
  }
  if (sink) sink->begin(schema);

  const auto steps = static_cast<std::size_t>(std::llround(config.duration / config.dt));
  double squared_error = 0.0;
  LogRecord rec;
  for (std::size_t k = 0; k < steps; ++k) {
    rec.t = static_cast<double>(k) * config.dt;
    rec.state = state;
    const ReferencePoint ref = reference.sample(rec.t);
    const Wrench u_des = control(state, ref, config.gains, inertia);
    rec.u_des = u_des.vector();
    rec.u_star = rec.u_des;

    std::vector<BarrierConstraint> constraints;
    rec.cbfs.assign(cbfs.size(), CbfSample{});
    if (config.filter_enabled && !cbfs.empty()) {
      try {
        const FilterResult f = config.filter_mode == FilterMode::kSampled
                                   ? filter_sampled(state, u_des, cbfs, inertia, config.dt)
                                   : filter(state, u_des, cbfs, inertia);
        rec.u_star = f.u.vector();
        for (std::size_t i = 0; i < cbfs.size(); ++i) rec.cbfs[i].active = f.active[i];
        constraints = f.constraints;
      } catch (const InfeasibleError& e) {
        if (config.on_infeasible == InfeasiblePolicy::kAbort) throw;
        ++summary.infeasible_steps;
        rec.u_star = e.least_violating();
      }
    }
    if (constraints.empty()) {
      for (const Cbf& cbf : cbfs) constraints.push_back(barrier_values(cbf, state, inertia));
    }
    for (std::size_t i = 0; i < cbfs.size(); ++i) {
      rec.cbfs[i].h = constraints[i].h_value;
      rec.cbfs[i].H = constraints[i].H_value;
    }
    rec.energy = kinetic_energy(state.twist, inertia);

    // Summary over the logged record.
    for (std::size_t i = 0; i < cbfs.size(); ++i) {
      CbfSummary& s = summary.cbfs[i];
      s.min_h = std::min(s.min_h, rec.cbfs[i].h);
      s.max_h = std::max(s.max_h, rec.cbfs[i].h);
      s.min_H = std::min(s.min_H, rec.cbfs[i].H);
      if (s.directional) summary.max_edir = std::max(summary.max_edir, rec.cbfs[i].h);
    }
    summary.max_correction = std::max(summary.max_correction, (rec.u_star - rec.u_des).norm());
    squared_error += (state.pose.position - ref.pose.position).squaredNorm();
    ++summary.steps;
    summary.final_time = rec.t;
    if (sink) sink->record(rec);

    if (config.stop_on_touchdown && state.pose.position.z() < kTouchdownHeight &&
        normal_energy(cbfs, state, inertia) < kTouchdownEnergy) {
      summary.touchdown = true;
      break;
    }
    state = step(state, Wrench::from_vector(rec.u_star), inertia, config.dt);
  }
  if (sink) sink->end();

  if (summary.steps > 0) {
    summary.rms_pos_err = std::sqrt(squared_error / static_cast<double>(summary.steps));
  }
  summary.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - started).count();
  return summary;
}

}  // namespace liecbf
