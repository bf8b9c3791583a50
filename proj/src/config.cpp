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

#include "liecbf/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace liecbf {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

bool valid_label(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

// Line-tagged value reader.
class Reader {
 public:
  Reader(std::string key, std::string value, int line)
      : key_(std::move(key)), value_(std::move(value)), line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(key_, line_, msg);
  }

  double number() const { return parse_number(value_); }

  std::vector<double> numbers(std::size_t expected) const {
    std::vector<double> out;
    for (const std::string& item : split(value_, ',')) out.push_back(parse_number(item));
    if (expected != 0 && out.size() != expected) {
      std::ostringstream msg;
      msg << "expected " << expected << " comma-separated numbers, got " << out.size();
      fail(msg.str());
    }
    return out;
  }

  Vec3 vec3() const {
    const auto v = numbers(3);
    return {v[0], v[1], v[2]};
  }

  Vec3 direction() const {
    const Vec3 v = vec3();
    if (!(v.norm() > 0.0)) fail("direction must be nonzero");
    return v.normalized();
  }

  std::optional<Vec3> optional_direction() const {
    if (value_ == "none") return std::nullopt;
    return direction();
  }

  bool boolean() const {
    if (value_ == "true") return true;
    if (value_ == "false") return false;
    fail("expected true or false, got '" + value_ + "'");
  }

  const std::string& text() const { return value_; }

  Mat3 matrix3() const {
    const auto v = numbers(0);
    if (v.size() == 3) return Vec3(v[0], v[1], v[2]).asDiagonal();
    if (v.size() == 9) return Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(v.data());
    fail("expected 3 (diagonal) or 9 (row-major) numbers");
  }

  Mat6 matrix6() const {
    const auto v = numbers(0);
    if (v.size() == 6) return Vec6(Eigen::Map<const Vec6>(v.data())).asDiagonal();
    if (v.size() == 36) return Eigen::Map<const Eigen::Matrix<double, 6, 6, Eigen::RowMajor>>(v.data());
    fail("expected 6 (diagonal) or 36 (row-major) numbers");
  }

 private:
  double parse_number(const std::string& raw) const {
    const std::string s = trim(raw);
    double value = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (s.empty() || ec != std::errc() || ptr != last) {
      fail("expected a number, got '" + s + "'");
    }
    return value;
  }

  std::string key_;
  std::string value_;
  int line_;
};

template <typename T>
T& find_or_add(std::vector<T>& items, const std::string& label) {
  for (T& item : items) {
    if (item.label == label) return item;
  }
  items.push_back(T{});
  items.back().label = label;
  return items.back();
}

bool is_diagonal(const Eigen::MatrixXd& m) {
  return (m - Eigen::MatrixXd(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
}

std::string join(const double* data, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ", ";
    out += format_double(data[i]);
  }
  return out;
}

std::string vec_text(const Vec3& v) { return join(v.data(), 3); }

template <int N>
std::string matrix_text(const Eigen::Matrix<double, N, N>& m) {
  if (is_diagonal(m)) {
    const Eigen::Matrix<double, N, 1> d = m.diagonal();
    return join(d.data(), N);
  }
  const Eigen::Matrix<double, N, N, Eigen::RowMajor> rm = m;
  return join(rm.data(), N * N);
}

}  // namespace

ConfigError::ConfigError(const std::string& key, int line, const std::string& message)
    : Error([&] {
        std::ostringstream msg;
        msg << "config error";
        if (line > 0) msg << " at line " << line;
        if (!key.empty()) msg << " [" << key << "]";
        msg << ": " << message;
        return msg.str();
      }()),
      key_(key),
      line_(line) {}

std::string format_double(double value) {
  if (value == 0.0) return "0";  // folds -0
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kSlitTraversal: return "slit-traversal";
    case ScenarioKind::kDirectionalLanding: return "directional-landing";
    case ScenarioKind::kCustom: return "custom";
  }
  return "custom";
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::map<std::string, int> seen;  // key -> line
  std::map<int, ReferenceConfig::Point> waypoints;
  std::map<int, int> waypoint_lines;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string stripped = trim(raw);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", line, "expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const Reader r(key, trim(stripped.substr(eq + 1)), line);
    if (key.empty()) r.fail("empty key");
    if (!seen.emplace(key, line).second) {
      r.fail("duplicate key (first set at line " + std::to_string(seen[key]) + ")");
    }

    const std::vector<std::string> parts = split(key, '.');
    const auto unknown = [&] { r.fail("unknown key"); };

    if (key == "scenario") {
      if (r.text() == "slit-traversal") cfg.kind = ScenarioKind::kSlitTraversal;
      else if (r.text() == "directional-landing") cfg.kind = ScenarioKind::kDirectionalLanding;
      else if (r.text() == "custom") cfg.kind = ScenarioKind::kCustom;
      else r.fail("expected slit-traversal, directional-landing or custom");
    } else if (key == "duration") { cfg.duration = r.number();
    } else if (key == "dt") { cfg.dt = r.number();
    } else if (key == "body.radius") { cfg.radius = r.number();
    } else if (key == "body.mass") { cfg.mass = r.number();
    } else if (key == "gains.k1") { cfg.gains.k1 = r.matrix3();
    } else if (key == "gains.k2") { cfg.gains.k2 = r.matrix3();
    } else if (key == "gains.kd") { cfg.gains.kd = r.matrix6();
    } else if (key == "cbf.alpha") { cfg.alpha = r.number();
    } else if (key == "cbf.alpha_e") { cfg.alpha_e = r.number();
    } else if (key == "reference.endpoints") {
      if (r.text() == "rest") cfg.reference.endpoints = EndpointVelocity::kRest;
      else if (r.text() == "secant") cfg.reference.endpoints = EndpointVelocity::kSecant;
      else r.fail("expected rest or secant");
    } else if (parts.size() == 3 && parts[0] == "reference" && parts[1] == "waypoint") {
      int index = -1;
      const auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), index);
      if (ec != std::errc() || ptr != parts[2].data() + parts[2].size() || index < 0) {
        r.fail("waypoint index must be a nonnegative integer");
      }
      const auto v = r.numbers(7);
      waypoints[index] = {v[0], {v[1], v[2], v[3]}, {v[4], v[5], v[6]}};
      waypoint_lines[index] = line;
    } else if (key == "initial.position") { cfg.initial.position = r.vec3();
    } else if (key == "initial.rotation") { cfg.initial.rotation = r.vec3();
    } else if (key == "initial.omega") { cfg.initial.omega = r.vec3();
    } else if (key == "initial.velocity") { cfg.initial.velocity = r.vec3();
    } else if (key == "filter.enabled") { cfg.filter_enabled = r.boolean();
    } else if (key == "filter.mode") {
      if (r.text() == "sampled") cfg.filter_mode = FilterMode::kSampled;
      else if (r.text() == "continuous") cfg.filter_mode = FilterMode::kContinuous;
      else r.fail("expected sampled or continuous");
    } else if (key == "filter.on_infeasible") {
      if (r.text() == "abort") cfg.on_infeasible = InfeasiblePolicy::kAbort;
      else if (r.text() == "continue") cfg.on_infeasible = InfeasiblePolicy::kContinue;
      else r.fail("expected abort or continue");
    } else if (key == "filter.stop_on_touchdown") { cfg.stop_on_touchdown = r.boolean();
    } else if (key == "output.dir") { cfg.output_dir = r.text();
    } else if (key == "output.name") {
      if (!valid_label(r.text())) r.fail("name may only use letters, digits, '_' and '-'");
      cfg.output_name = r.text();
    } else if (parts.size() == 3 && parts[0] == "slit") {
      if (!valid_label(parts[1])) r.fail("invalid label '" + parts[1] + "'");
      SlitConfig& s = find_or_add(cfg.slits, parts[1]);
      const std::string& field = parts[2];
      if (field == "center") s.center = r.vec3();
      else if (field == "normal") s.normal = r.direction();
      else if (field == "width") s.width = r.number();
      else if (field == "body_normal") s.body_normal = r.direction();
      else if (field == "margin") s.margin = r.number();
      else if (field == "sharpness") s.sharpness = r.number();
      else if (field == "sigma") s.sigma = r.number();
      else if (field == "offset") s.offset = r.vec3();
      else if (field == "ceiling") {
        if (r.text() == "auto") s.ceiling.reset();
        else s.ceiling = r.number();
      } else unknown();
    } else if (parts.size() == 3 && parts[0] == "directional") {
      if (!valid_label(parts[1])) r.fail("invalid label '" + parts[1] + "'");
      DirectionalConfig& d = find_or_add(cfg.directional, parts[1]);
      const std::string& field = parts[2];
      if (field == "n_v") d.translational = r.optional_direction();
      else if (field == "n_w") d.rotational = r.optional_direction();
      else if (field == "e_max") d.e_max = r.number();
      else unknown();
    } else if (parts.size() == 3 && parts[0] == "energy") {
      if (!valid_label(parts[1])) r.fail("invalid label '" + parts[1] + "'");
      EnergyBoundConfig& e = find_or_add(cfg.energy_bounds, parts[1]);
      if (parts[2] == "e_max") e.e_max = r.number();
      else unknown();
    } else {
      unknown();
    }
  }

  int expected = 0;
  for (const auto& [index, point] : waypoints) {
    if (index != expected) {
      std::ostringstream key;
      key << "reference.waypoint." << expected;
      throw ConfigError(key.str(), waypoint_lines[index], "waypoint indices must be contiguous from 0");
    }
    cfg.reference.waypoints.push_back(point);
    ++expected;
  }
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    // Point at the offending line when the key was set in this text.
    const auto it = seen.find(e.key());
    if (e.line() != 0 || it == seen.end()) throw;
    const std::string what = e.what();
    throw ConfigError(e.key(), it->second, what.substr(what.find(": ") + 2));
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("", 0, "cannot open config file '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.key(), e.line(), std::string(e.what()) + " (in " + path + ")");
  }
}

std::string to_config_text(const ScenarioConfig& c) {
  std::ostringstream out;
  const auto kv = [&](const std::string& key, const std::string& value) {
    out << key << " = " << value << "\n";
  };
  kv("scenario", to_string(c.kind));
  kv("duration", format_double(c.duration));
  kv("dt", format_double(c.dt));
  kv("body.radius", format_double(c.radius));
  kv("body.mass", format_double(c.mass));
  kv("gains.k1", matrix_text<3>(c.gains.k1));
  kv("gains.k2", matrix_text<3>(c.gains.k2));
  kv("gains.kd", matrix_text<6>(c.gains.kd));
  kv("cbf.alpha", format_double(c.alpha));
  kv("cbf.alpha_e", format_double(c.alpha_e));
  for (const SlitConfig& s : c.slits) {
    const std::string p = "slit." + s.label + ".";
    kv(p + "center", vec_text(s.center));
    kv(p + "normal", vec_text(s.normal));
    kv(p + "width", format_double(s.width));
    kv(p + "body_normal", vec_text(s.body_normal));
    kv(p + "margin", format_double(s.margin));
    kv(p + "sharpness", format_double(s.sharpness));
    kv(p + "sigma", format_double(s.sigma));
    kv(p + "offset", vec_text(s.offset));
    kv(p + "ceiling", s.ceiling ? format_double(*s.ceiling) : "auto");
  }
  for (const EnergyBoundConfig& e : c.energy_bounds) {
    kv("energy." + e.label + ".e_max", format_double(e.e_max));
  }
  for (const DirectionalConfig& d : c.directional) {
    const std::string p = "directional." + d.label + ".";
    kv(p + "n_v", d.translational ? vec_text(*d.translational) : "none");
    kv(p + "n_w", d.rotational ? vec_text(*d.rotational) : "none");
    kv(p + "e_max", format_double(d.e_max));
  }
  kv("reference.endpoints",
     c.reference.endpoints == EndpointVelocity::kRest ? "rest" : "secant");
  for (std::size_t i = 0; i < c.reference.waypoints.size(); ++i) {
    const auto& w = c.reference.waypoints[i];
    const std::array<double, 7> v{w.time, w.position.x(), w.position.y(), w.position.z(),
                                  w.rotation.x(), w.rotation.y(), w.rotation.z()};
    kv("reference.waypoint." + std::to_string(i), join(v.data(), v.size()));
  }
  kv("initial.position", vec_text(c.initial.position));
  kv("initial.rotation", vec_text(c.initial.rotation));
  kv("initial.omega", vec_text(c.initial.omega));
  kv("initial.velocity", vec_text(c.initial.velocity));
  kv("filter.enabled", c.filter_enabled ? "true" : "false");
  kv("filter.mode", c.filter_mode == FilterMode::kSampled ? "sampled" : "continuous");
  kv("filter.on_infeasible", c.on_infeasible == InfeasiblePolicy::kAbort ? "abort" : "continue");
  kv("filter.stop_on_touchdown", c.stop_on_touchdown ? "true" : "false");
  kv("output.dir", c.output_dir);
  kv("output.name", c.output_name);
  return out.str();
}

std::string config_digest(const ScenarioConfig& config) {
  ScenarioConfig sim = config;
  sim.output_dir.clear();
  sim.output_name.clear();
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char ch : to_config_text(sim)) {
    hash ^= ch;
    hash *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << hash;
  return out.str();
}

void validate(const ScenarioConfig& c) {
  const auto need = [](bool ok, const std::string& key, const std::string& msg, double got) {
    if (!ok) {
      std::ostringstream m;
      m << msg << " (got " << format_double(got) << ")";
      throw ConfigError(key, 0, m.str());
    }
  };
  need(std::isfinite(c.duration) && c.duration >= 0.0, "duration", "must be nonnegative", c.duration);
  need(std::isfinite(c.dt) && c.dt > 0.0, "dt", "must be positive", c.dt);
  need(std::isfinite(c.radius) && c.radius > 0.0, "body.radius", "must be positive", c.radius);
  need(std::isfinite(c.mass) && c.mass > 0.0, "body.mass", "must be positive", c.mass);
  need(std::isfinite(c.alpha) && c.alpha > 0.0, "cbf.alpha", "must be positive", c.alpha);
  need(std::isfinite(c.alpha_e) && c.alpha_e > 0.0, "cbf.alpha_e", "must be positive", c.alpha_e);
  try {
    Gains{c.gains.k1, Mat3::Identity(), Mat6::Identity()}.validate();
  } catch (const Error&) {
    throw ConfigError("gains.k1", 0, "must be symmetric positive definite");
  }
  try {
    Gains{Mat3::Identity(), c.gains.k2, Mat6::Identity()}.validate();
  } catch (const Error&) {
    throw ConfigError("gains.k2", 0, "must be symmetric positive definite");
  }
  try {
    Gains{Mat3::Identity(), Mat3::Identity(), c.gains.kd}.validate();
  } catch (const Error&) {
    throw ConfigError("gains.kd", 0, "must be symmetric positive definite");
  }

  std::set<std::string> labels;
  const auto unique = [&](const std::string& label, const std::string& key) {
    if (!labels.insert(label).second) {
      throw ConfigError(key, 0, "CBF label '" + label + "' is used more than once");
    }
  };
  for (const SlitConfig& s : c.slits) {
    const std::string p = "slit." + s.label + ".";
    unique(s.label, p + "center");
    need(s.center.allFinite(), p + "center", "must be finite", s.center.norm());
    need(std::isfinite(s.width) && s.width > 0.0, p + "width", "must be positive", s.width);
    need(std::isfinite(s.margin) && s.margin >= 0.0, p + "margin", "must be nonnegative", s.margin);
    need(std::isfinite(s.sharpness) && s.sharpness > 0.0, p + "sharpness", "must be positive", s.sharpness);
    need(std::isfinite(s.sigma) && s.sigma > 0.0, p + "sigma", "must be positive", s.sigma);
    need(s.offset.allFinite(), p + "offset", "must be finite", s.offset.norm());
    if (s.ceiling) {
      need(std::isfinite(*s.ceiling) && *s.ceiling > 0.0, p + "ceiling", "must be positive", *s.ceiling);
    }
  }
  for (const EnergyBoundConfig& e : c.energy_bounds) {
    const std::string key = "energy." + e.label + ".e_max";
    unique(e.label, key);
    need(std::isfinite(e.e_max) && e.e_max > 0.0, key, "must be positive", e.e_max);
  }
  for (const DirectionalConfig& d : c.directional) {
    const std::string p = "directional." + d.label + ".";
    unique(d.label, p + "e_max");
    need(std::isfinite(d.e_max) && d.e_max > 0.0, p + "e_max", "must be positive", d.e_max);
    if (!d.translational && !d.rotational) {
      throw ConfigError(p + "n_v", 0, "at least one of n_v, n_w must be set");
    }
  }
  const auto& w = c.reference.waypoints;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::string key = "reference.waypoint." + std::to_string(i);
    need(std::isfinite(w[i].time) && w[i].position.allFinite() && w[i].rotation.allFinite(),
         key, "must be finite", w[i].time);
    if (i > 0) {
      need(w[i].time > w[i - 1].time, key, "waypoint times must increase", w[i].time);
    }
  }
  need(c.initial.position.allFinite() && c.initial.rotation.allFinite() &&
           c.initial.omega.allFinite() && c.initial.velocity.allFinite(),
       "initial.position", "initial state must be finite", 0.0);
}

InertiaTensor make_inertia(const ScenarioConfig& config) {
  return InertiaTensor::disk(config.radius, config.mass);
}

SlitSpec make_slit_spec(const SlitConfig& slit, const ScenarioConfig& config) {
  SlitSpec spec = SlitSpec::centered(slit.center, slit.normal, slit.width);
  spec.disk_radius = config.radius;
  spec.body_normal = slit.body_normal;
  spec.margin = slit.margin;
  spec.sharpness = slit.sharpness;
  spec.gate.sigma = slit.sigma;
  spec.gate.offset = slit.offset;
  spec.gate.ceiling = slit.ceiling.value_or(0.5 * config.alpha_e);
  spec.validate();
  return spec;
}

std::vector<Cbf> make_cbfs(const ScenarioConfig& config) {
  std::vector<Cbf> cbfs;
  const ClassK class_k{config.alpha};
  for (const SlitConfig& s : config.slits) {
    cbfs.emplace_back(EnergyAugmentedCbf{s.label, make_slit_spec(s, config),
                                         config.alpha_e, class_k});
  }
  for (const EnergyBoundConfig& e : config.energy_bounds) {
    cbfs.emplace_back(EnergyAugmentedCbf{e.label, ConstantBarrier{e.e_max},
                                         config.alpha_e, class_k});
  }
  for (const DirectionalConfig& d : config.directional) {
    DirectionalEnergyCbf cbf{d.label, d.translational, d.rotational, d.e_max, class_k};
    cbf.validate();
    cbfs.emplace_back(std::move(cbf));
  }
  return cbfs;
}

ReferenceTrajectory make_reference(const ScenarioConfig& config) {
  if (config.reference.waypoints.empty()) {
    return ReferenceTrajectory::constant(make_initial_state(config).pose);
  }
  std::vector<Waypoint> points;
  for (const auto& w : config.reference.waypoints) {
    points.push_back({w.time, w.position, exp_so3(w.rotation)});
  }
  return ReferenceTrajectory(std::move(points), config.reference.endpoints);
}

State make_initial_state(const ScenarioConfig& config) {
  State s;
  s.pose = {exp_so3(config.initial.rotation), config.initial.position};
  s.twist = {config.initial.omega, config.initial.velocity};
  return s;
}

}  // namespace liecbf
