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

#include "liecbf/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "liecbf/config.hpp"
#include "liecbf/log_io.hpp"
#include "liecbf/safety_filter.hpp"
#include "liecbf/scenario.hpp"

namespace liecbf::verification {
namespace {

namespace fs = std::filesystem;

using Rng = std::mt19937_64;

double normal(Rng& rng, double sigma = 1.0) {
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vec3 normal3(Rng& rng, double sigma = 1.0) {
  return {normal(rng, sigma), normal(rng, sigma), normal(rng, sigma)};
}

Vec6 normal6(Rng& rng, double sigma = 1.0) {
  Vec6 v;
  for (int i = 0; i < 6; ++i) v(i) = normal(rng, sigma);
  return v;
}

Rotation random_rotation(Rng& rng) {
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  q.normalize();
  return Rotation::from_matrix(q.toRotationMatrix());
}

Vec3 random_unit(Rng& rng) { return normal3(rng).normalized(); }

// A random state around a slit gate, with body rates of order `speed`.
State random_slit_state(Rng& rng, const SlitSpec& spec, double speed) {
  State s;
  s.pose.rotation = random_rotation(rng);
  s.pose.position = spec.gate_center() + normal3(rng, 2.0);
  s.twist = {normal3(rng, speed), normal3(rng, speed)};
  return s;
}

std::vector<Cbf> slit_cbfs(double alpha_e) { return make_cbfs(build_scenario_slit(alpha_e)); }

bool near_support_kink(const SlitSpec& spec, const Pose& g) {
  const double c = slit_terms(spec, g).alignment;
  return c * c > 1.0 - 1e-6;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

template <typename F>
CheckResult timed(const std::string& name, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r;
  r.name = name;
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

struct Derivative {
  Mat3 r_dot;
  Vec3 p_dot;
  Vec3 w_dot;
  Vec3 v_dot;
};

struct Embedded {
  Mat3 r;
  Vec3 p;
  Vec3 w;
  Vec3 v;
};

Derivative oracle_rhs(const Embedded& x, const Wrench& u, const InertiaTensor& inertia) {
  const Vec3& j = inertia.principal_moments();
  const double m = inertia.mass();
  Mat3 w_hat;
  w_hat << 0.0, -x.w(2), x.w(1), x.w(2), 0.0, -x.w(0), -x.w(1), x.w(0), 0.0;
  Derivative d;
  d.r_dot = x.r * w_hat;
  d.p_dot = x.r * x.v;
  const Vec3 jw = j.cwiseProduct(x.w);
  d.w_dot = (jw.cross(x.w) + u.torque).cwiseQuotient(j);
  d.v_dot = x.v.cross(x.w) + u.force / m;
  return d;
}

Embedded advance(const Embedded& x, const Derivative& d, double h) {
  return {x.r + h * d.r_dot, x.p + h * d.p_dot, x.w + h * d.w_dot, x.v + h * d.v_dot};
}

double pose_distance(const Pose& a, const Pose& b) {
  return (a.rotation.matrix() - b.rotation.matrix()).norm() + (a.position - b.position).norm();
}

}  // namespace

State oracle_flow(const State& start, const Wrench& u, const InertiaTensor& inertia,
                  double duration, int substeps) {
  Embedded x{start.pose.rotation.matrix(), start.pose.position, start.twist.omega,
             start.twist.linear};
  const double h = duration / substeps;
  for (int i = 0; i < substeps; ++i) {
    const Derivative k1 = oracle_rhs(x, u, inertia);
    const Derivative k2 = oracle_rhs(advance(x, k1, h / 2), u, inertia);
    const Derivative k3 = oracle_rhs(advance(x, k2, h / 2), u, inertia);
    const Derivative k4 = oracle_rhs(advance(x, k3, h), u, inertia);
    x.r += h / 6 * (k1.r_dot + 2 * k2.r_dot + 2 * k3.r_dot + k4.r_dot);
    x.p += h / 6 * (k1.p_dot + 2 * k2.p_dot + 2 * k3.p_dot + k4.p_dot);
    x.w += h / 6 * (k1.w_dot + 2 * k2.w_dot + 2 * k3.w_dot + k4.w_dot);
    x.v += h / 6 * (k1.v_dot + 2 * k2.v_dot + 2 * k3.v_dot + k4.v_dot);
  }
  State out;
  out.pose = {Rotation::from_matrix(x.r, 1e-8), x.p};
  out.twist = {x.w, x.v};
  return out;
}

double predicted_rate(const BarrierConstraint& c, const ClassK& class_k, const Vec6& u) {
  return c.b - class_k(c.H_value) - c.a.dot(u);
}

CheckResult check_slit_safety(const Options&) {
  return timed("slit-safety", [](CheckResult& r) {
    r.passed = true;
    std::ostringstream detail;
    for (double alpha_e : {50.0, 150.0}) {
      const ScenarioConfig cfg = build_scenario_slit(alpha_e);
      const RunSummary s = run(cfg);
      double min_h = INFINITY;
      double min_H = INFINITY;
      for (const CbfSummary& c : s.cbfs) {
        min_h = std::min(min_h, c.min_h);
        min_H = std::min(min_H, c.min_H);
      }
      const bool ok = s.cbfs.size() == 2 && s.steps == 15000 && cfg.dt == 1e-3 &&
                      min_h >= -1e-6 && min_H >= -1e-6 && s.wall_ms < 10000.0;
      r.passed = r.passed && ok;
      detail << "alpha_e=" << alpha_e << " min h=" << fmt(min_h) << " min H=" << fmt(min_H)
             << " steps=" << s.steps << " " << fmt(s.wall_ms / 1000.0) << "s; ";
    }
    r.detail = detail.str();
  });
}

CheckResult check_landing_energy(const Options& options) {
  return timed("landing-energy-bound", [&](CheckResult& r) {
    r.passed = true;
    std::ostringstream detail;
    for (double alpha : options.landing_alphas) {
      const RunSummary s = run(build_scenario_landing(alpha));
      const bool ok = s.max_edir <= 1.5 + 1e-3 && s.wall_ms < 10000.0;
      r.passed = r.passed && ok;
      detail << "alpha=" << alpha << " max E_n=" << fmt(s.max_edir) << "; ";
    }
    ScenarioConfig nominal = build_scenario_landing(1.0);
    nominal.filter_enabled = false;
    const RunSummary s = run(nominal);
    r.passed = r.passed && s.max_edir > 1.5;
    detail << "unfiltered max E_n=" << fmt(s.max_edir);
    r.detail = detail.str();
  });
}

CheckResult check_set_inclusion(const Options& options) {
  return timed("set-inclusion", [&](CheckResult& r) {
    Rng rng(options.seed + 3);
    const std::vector<Cbf> cbfs[2] = {slit_cbfs(50.0), slit_cbfs(150.0)};
    const InertiaTensor inertia = InertiaTensor::disk(3.0, 3.0);
    int safe = 0;
    int counterexamples = 0;
    for (int i = 0; i < 10000; ++i) {
      const auto& family = cbfs[i % 2];
      const auto& cbf = std::get<EnergyAugmentedCbf>(family[(i / 2) % 2]);
      const SlitSpec& spec = std::get<SlitSpec>(cbf.barrier);
      const State s = random_slit_state(rng, spec, uniform(rng, 0.0, 3.0));
      const double h = cbf.h(s.pose);
      const double H = cbf.H(s, inertia);
      if (H >= 0.0) {
        ++safe;
        if (h < 0.0) ++counterexamples;
      }
    }
    r.passed = counterexamples == 0 && safe >= 100;
    r.detail = "10000 states, " + std::to_string(safe) + " with H >= 0, " +
               std::to_string(counterexamples) + " counterexamples";
  });
}

CheckResult check_drift_algebra(const Options& options) {
  return timed("drift-algebra", [&](CheckResult& r) {
    Rng rng(options.seed + 4);
    const InertiaTensor inertia = InertiaTensor::disk(3.0, 3.0);
    const double eps = 1e-4;
    const int substeps = 4;
    double worst_ratio = 0.0;
    double worst_p_dot = 0.0;
    int failures = 0;
    int directional = 0;
    for (int i = 0; i < 1000; ++i) {
      Cbf cbf;
      State s;
      if (i % 2 == 0) {
        auto family = slit_cbfs(i % 4 == 0 ? 50.0 : 150.0);
        cbf = family[(i / 4) % 2];
        const auto& spec = std::get<SlitSpec>(std::get<EnergyAugmentedCbf>(cbf).barrier);
        do {
          s = random_slit_state(rng, spec, 1.0);
        } while (near_support_kink(spec, s.pose));
      } else {
        DirectionalEnergyCbf d;
        d.label = "dir";
        d.e_max = 1.5;
        d.class_k = ClassK{uniform(rng, 0.5, 4.0)};
        const int mode = (i / 2) % 3;
        if (mode != 1) d.translational = random_unit(rng);
        if (mode != 0) d.rotational = random_unit(rng);
        cbf = d;
        s.pose = {random_rotation(rng), normal3(rng, 5.0)};
        s.twist = {normal3(rng), normal3(rng)};
        ++directional;
      }
      const Vec6 u = normal6(rng, 3.0);
      const Wrench w = Wrench::from_vector(u);
      const BarrierConstraint c = make_constraint(cbf, s, inertia);
      const ClassK k = std::visit([](const auto& x) { return x.class_k; }, cbf);
      const double analytic = predicted_rate(c, k, u);

      const State fwd = oracle_flow(s, w, inertia, eps, substeps);
      const State bwd = oracle_flow(s, w, inertia, -eps, substeps);
      const double fd = (barrier_values(cbf, fwd, inertia).H_value -
                         barrier_values(cbf, bwd, inertia).H_value) / (2.0 * eps);
      const double tol = std::max(1e-5, 1e-3 * std::abs(analytic));
      worst_ratio = std::max(worst_ratio, std::abs(fd - analytic) / tol);
      if (std::abs(fd - analytic) > tol) ++failures;

      if (const auto* d = std::get_if<DirectionalEnergyCbf>(&cbf)) {
        const Mat6 p = projection_matrix(*d, s.pose);
        const Mat6 omega = rotation_generator(s.twist);
        const Mat6 p_dot = p * omega - omega * p;
        // P is cheap and exact to rounding, so a shorter step keeps the
        // eps^2 truncation well under the tolerance.
        const double eps_p = 2e-5;
        const State fwd_p = oracle_flow(s, w, inertia, eps_p, 1);
        const State bwd_p = oracle_flow(s, w, inertia, -eps_p, 1);
        const Mat6 fd_p = (projection_matrix(*d, fwd_p.pose) - projection_matrix(*d, bwd_p.pose)) /
                          (2.0 * eps_p);
        const double err = (fd_p - p_dot).cwiseAbs().maxCoeff();
        worst_p_dot = std::max(worst_p_dot, err);
        if (err > 1e-6) ++failures;
      }
    }
    r.passed = failures == 0;
    r.detail = "1000 states (" + std::to_string(directional) + " directional), " +
               std::to_string(failures) + " failures, worst |err|/tol=" + fmt(worst_ratio) +
               ", worst P_dot err=" + fmt(worst_p_dot);
  });
}

CheckResult check_qp_optimality(const Options& options) {
  return timed("qp-optimality", [&](CheckResult& r) {
    Rng rng(options.seed + 5);
    int failures = 0;
    int constrained = 0;
    double worst_kkt = 0.0;
    for (int i = 0; i < 1000; ++i) {
      QpProblem qp;
      qp.u_des = normal6(rng, 2.0);
      const int m = 1 + i % 3;
      for (int j = 0; j < m; ++j) {
        BarrierConstraint c;
        c.a = normal6(rng);
        c.b = normal(rng);
        c.label = "c" + std::to_string(j);
        qp.constraints.push_back(c);
      }
      if (i % 10 == 9 && m >= 2) {
        // Parallel pair: same direction, different offsets.
        qp.constraints[1].a = 2.0 * qp.constraints[0].a;
      }
      const QpSolution sol = solve(qp);
      if (!sol.active_set.empty()) ++constrained;

      Vec6 stationarity = sol.u_star - qp.u_des;
      double kkt = 0.0;
      for (std::size_t k = 0; k < sol.active_set.size(); ++k) {
        const BarrierConstraint& c = qp.constraints[sol.active_set[k]];
        const double lambda = sol.multipliers[k];
        stationarity += lambda * c.a;
        kkt = std::max(kkt, -lambda);
        kkt = std::max(kkt, std::abs(lambda * (c.a.dot(sol.u_star) - c.b)));
      }
      kkt = std::max(kkt, stationarity.cwiseAbs().maxCoeff());
      for (const BarrierConstraint& c : qp.constraints) {
        kkt = std::max(kkt, c.a.dot(sol.u_star) - c.b);
      }
      worst_kkt = std::max(worst_kkt, kkt);
      if (kkt >= 1e-10) ++failures;

      const double best = (sol.u_star - qp.u_des).squaredNorm();
      for (int k = 0; k < 200; ++k) {
        const double scale = k % 3 == 0 ? 1e-3 : (k % 3 == 1 ? 0.1 : 1.0);
        const Vec6 base = k % 2 == 0 ? sol.u_star : qp.u_des;
        const Vec6 u = base + normal6(rng, scale);
        const bool feasible = std::all_of(qp.constraints.begin(), qp.constraints.end(),
                                          [&](const BarrierConstraint& c) {
                                            return c.a.dot(u) <= c.b;
                                          });
        if (feasible && best > (u - qp.u_des).squaredNorm() + 1e-9) ++failures;
      }
    }
    r.passed = failures == 0;
    r.detail = "1000 instances (" + std::to_string(constrained) + " with active constraints), " +
               std::to_string(failures) + " failures, worst KKT residual=" + fmt(worst_kkt);
  });
}

CheckResult check_conservation(const Options& options) {
  return timed("conservation-passivity", [&](CheckResult& r) {
    Rng rng(options.seed + 6);
    double worst_drift = 0.0;
    double worst_step = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const InertiaTensor inertia =
          trial == 0 ? InertiaTensor::disk(3.0, 3.0)
                     : InertiaTensor(Vec3(uniform(rng, 1.0, 10.0), uniform(rng, 1.0, 10.0),
                                          uniform(rng, 1.0, 10.0)),
                                     uniform(rng, 0.5, 5.0));
      State s;
      s.pose = {random_rotation(rng), normal3(rng)};
      s.twist = {normal3(rng), normal3(rng)};
      const double e0 = kinetic_energy(s.twist, inertia);
      double prev = e0;
      for (int k = 0; k < 10000; ++k) {
        s = step(s, Wrench{}, inertia, 1e-3);
        const double e = kinetic_energy(s.twist, inertia);
        worst_step = std::max(worst_step, std::abs(e - prev) / e0);
        prev = e;
      }
      worst_drift = std::max(worst_drift, std::abs(prev - e0) / e0);
    }
    double worst_power = 0.0;
    const InertiaTensor disk = InertiaTensor::disk(3.0, 3.0);
    for (int k = 0; k < 10000; ++k) {
      const Twist xi{normal3(rng), normal3(rng)};
      const Vec6 v = xi.vector();
      worst_power = std::max(worst_power, std::abs(v.dot(coadjoint(xi) * disk.apply(v))));
    }
    r.passed = worst_drift <= 1e-9 && worst_step < 1e-10 && worst_power <= 1e-12;
    r.detail = "relative E drift over 1e4 steps=" + fmt(worst_drift) +
               ", worst per-step=" + fmt(worst_step) + ", max |xi^T ad* II xi|=" +
               fmt(worst_power);
  });
}

CheckResult check_integrator_order(const Options&) {
  return timed("integrator-order", [](CheckResult& r) {
    const InertiaTensor inertia(Vec3(2.0, 3.0, 4.0), 1.5);
    State s0;
    s0.pose = {exp_so3(Vec3(0.3, -0.4, 0.2)), Vec3(1.0, 2.0, -1.0)};
    s0.twist = {Vec3(0.8, -0.5, 1.1), Vec3(0.4, 0.1, -0.3)};
    const Wrench u{Vec3(0.5, -0.3, 0.2), Vec3(1.0, 0.5, -0.7)};
    const double t_end = 2.0;
    std::vector<State> finals;
    for (int n : {50, 100, 200}) {
      State s = s0;
      for (int k = 0; k < n; ++k) s = step(s, u, inertia, t_end / n);
      finals.push_back(s);
    }
    const double e1 = (finals[0].twist.vector() - finals[1].twist.vector()).norm();
    const double e2 = (finals[1].twist.vector() - finals[2].twist.vector()).norm();
    const double order = std::log2(e1 / e2);
    const double pose_order = std::log2(pose_distance(finals[0].pose, finals[1].pose) /
                                        pose_distance(finals[1].pose, finals[2].pose));
    r.passed = order >= 3.5;
    r.detail = "twist order=" + fmt(order) + " (pose order " + fmt(pose_order) + ")";
  });
}

CheckResult check_determinism(const Options& options) {
  return timed("determinism", [&](CheckResult& r) {
    const fs::path dir = options.work_dir.empty()
                             ? fs::temp_directory_path() / "liecbf-determinism"
                             : fs::path(options.work_dir);
    std::string outputs[2];
    for (int i = 0; i < 2; ++i) {
      const fs::path out = dir / ("run" + std::to_string(i));
      fs::create_directories(out);
      if (!options.cli_path.empty()) {
        const std::string cmd = "\"" + options.cli_path + "\" run --preset slit --out \"" +
                                out.string() + "\" > \"" + (out / "stdout.txt").string() + "\" 2> \"" +
                                (out / "stderr.txt").string() + "\"";
        if (std::system(cmd.c_str()) != 0) {
          throw Error("command failed: " + cmd);
        }
      } else {
        ScenarioConfig cfg = preset("slit");
        CsvSink sink((out / "slit.csv").string());
        const RunSummary s = run(cfg, &sink);
        write_summary(s, (out / "slit.summary.txt").string());
      }
      outputs[i] = read_file((out / "slit.csv").string());
      outputs[i] += read_file((out / "slit.summary.txt").string());
    }
    r.passed = !outputs[0].empty() && outputs[0] == outputs[1];
    r.detail = std::string(options.cli_path.empty() ? "in-process" : "cli") +
               " runs, " + std::to_string(outputs[0].size()) + " bytes, " +
               (r.passed ? "identical" : "different");
  });
}

std::vector<NamedCheck> acceptance_checks() {
  return {
      {"slit-safety", check_slit_safety},
      {"landing-energy-bound", check_landing_energy},
      {"set-inclusion", check_set_inclusion},
      {"drift-algebra", check_drift_algebra},
      {"qp-optimality", check_qp_optimality},
      {"conservation-passivity", check_conservation},
      {"integrator-order", check_integrator_order},
      {"determinism", check_determinism},
  };
}

std::string format_result(const CheckResult& result) {
  std::ostringstream out;
  out << (result.passed ? "PASS " : "FAIL ") << result.name << " (" << fmt(result.seconds)
      << " s): " << result.detail;
  return out.str();
}

}  // namespace liecbf::verification
