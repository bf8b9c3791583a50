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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>

#include <gtest/gtest.h>

#include "liecbf/errors.hpp"
#include "liecbf/log_io.hpp"
#include "liecbf/scenario.hpp"

namespace liecbf {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("liecbf_test_scenario_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

double column_min(const CsvTable& t, const std::string& name) {
  const std::size_t c = t.column(name);
  double m = std::numeric_limits<double>::infinity();
  for (const auto& row : t.rows) m = std::min(m, row[c]);
  return m;
}

double column_max(const CsvTable& t, const std::string& name) {
  const std::size_t c = t.column(name);
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& row : t.rows) m = std::max(m, row[c]);
  return m;
}

TEST(Csv, HeaderColumns) {
  LogSchema schema;
  schema.cbfs = {{"slit1", false}, {"pad", true}};
  EXPECT_EQ(csv_header(schema),
            "t,px,py,pz,r11,r12,r13,r21,r22,r23,r31,r32,r33,wx,wy,wz,vx,vy,vz,"
            "ud1,ud2,ud3,ud4,ud5,ud6,u1,u2,u3,u4,u5,u6,"
            "h_slit1,H_slit1,active_slit1,Edir_pad,H_pad,active_pad,E");
  EXPECT_EQ(csv_columns(LogSchema{}).size(), 32u);
}

TEST(Csv, RowRoundTrips) {
  LogSchema schema;
  schema.cbfs = {{"a", false}};
  LogRecord r;
  r.t = 0.125;
  r.state.pose.position = Vec3(1.0 / 3.0, -2.0, 1e-17);
  r.state.twist.omega = Vec3(0.1, 0.2, 0.3);
  r.u_des << 1, 2, 3, 4, 5, 6;
  r.u_star = -r.u_des;
  r.cbfs = {{0.7, -1e-9, true}};
  r.energy = 2.5;
  const CsvTable t = parse_csv(csv_header(schema) + "\n" + csv_row(r) + "\n");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][t.column("px")], 1.0 / 3.0);
  EXPECT_EQ(t.rows[0][t.column("pz")], 1e-17);
  EXPECT_EQ(t.rows[0][t.column("r11")], 1.0);
  EXPECT_EQ(t.rows[0][t.column("wy")], 0.2);
  EXPECT_EQ(t.rows[0][t.column("ud6")], 6.0);
  EXPECT_EQ(t.rows[0][t.column("u4")], -4.0);
  EXPECT_EQ(t.rows[0][t.column("H_a")], -1e-9);
  EXPECT_EQ(t.rows[0][t.column("E")], 2.5);
  EXPECT_THROW(t.column("nope"), InvalidArgumentError);
}

TEST(Csv, SinkReportsBadPath) {
  try {
    CsvSink sink("/nonexistent-dir/for/sure/log.csv");
    sink.begin(LogSchema{});
    FAIL() << "no error";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/for/sure/log.csv"), std::string::npos);
  }
}

TEST(Run, ZeroDurationWritesHeaderOnly) {
  ScenarioConfig c = preset("slit");
  c.duration = 0.0;
  const fs::path dir = scratch_dir("zero");
  const std::string path = (dir / "zero.csv").string();
  RunSummary s;
  {
    CsvSink sink(path);
    s = run(c, &sink);
  }
  EXPECT_EQ(s.steps, 0u);
  EXPECT_EQ(s.final_time, 0.0);
  const CsvTable t = read_csv(path);
  EXPECT_TRUE(t.rows.empty());
  EXPECT_EQ(t.columns.size(), 38u);
  EXPECT_TRUE(std::isinf(s.cbfs.at(0).min_h));
}

TEST(Run, SummaryAgreesWithLoggedColumns) {
  ScenarioConfig c = preset("slit");
  c.duration = 6.0;
  const fs::path dir = scratch_dir("summary");
  const std::string path = (dir / "run.csv").string();
  RunSummary s;
  {
    CsvSink sink(path);
    s = run(c, &sink);
  }
  const CsvTable t = read_csv(path);
  ASSERT_EQ(t.rows.size(), s.steps);
  EXPECT_EQ(s.steps, 6000u);
  ASSERT_EQ(s.cbfs.size(), 2u);
  for (const CbfSummary& cbf : s.cbfs) {
    EXPECT_LE(std::abs(column_min(t, "h_" + cbf.label) - cbf.min_h), 1e-12);
    EXPECT_LE(std::abs(column_min(t, "H_" + cbf.label) - cbf.min_H), 1e-12);
    EXPECT_LE(std::abs(column_max(t, "h_" + cbf.label) - cbf.max_h), 1e-12);
  }
  // Energy column is the kinetic energy of the logged twist.
  const InertiaTensor inertia = make_inertia(c);
  for (std::size_t i = 0; i < t.rows.size(); i += 500) {
    const auto& row = t.rows[i];
    const Twist xi{Vec3(row[t.column("wx")], row[t.column("wy")], row[t.column("wz")]),
                   Vec3(row[t.column("vx")], row[t.column("vy")], row[t.column("vz")])};
    EXPECT_NEAR(row[t.column("E")], kinetic_energy(xi, inertia), 1e-12 * (1.0 + row[t.column("E")]));
  }
  EXPECT_EQ(t.rows[1][0], c.dt);
}

TEST(Run, SummaryFileParses) {
  ScenarioConfig c = preset("landing");
  c.duration = 0.5;
  const RunSummary s = run(c);
  const auto kv = parse_summary(summary_text(s, false));
  bool has_digest = false;
  bool has_wall = false;
  for (const auto& [k, v] : kv) {
    if (k == "config_digest") has_digest = (v == config_digest(c));
    if (k == "wall_ms") has_wall = true;
  }
  EXPECT_TRUE(has_digest);
  EXPECT_FALSE(has_wall);
  EXPECT_NE(summary_text(s, true).find("wall_ms"), std::string::npos);
}

TEST(Run, InProcessDeterminism) {
  ScenarioConfig c = preset("slit");
  c.duration = 3.0;
  MemorySink a;
  MemorySink b;
  run(c, &a);
  run(c, &b);
  ASSERT_EQ(a.records().size(), b.records().size());
  for (std::size_t i = 0; i < a.records().size(); ++i) {
    ASSERT_EQ(csv_row(a.records()[i]), csv_row(b.records()[i])) << i;
  }
}

TEST(Run, FilterIsPassthroughWithoutBarriers) {
  ScenarioConfig c = preset("slit");
  c.slits.clear();
  c.duration = 4.0;
  MemorySink on;
  MemorySink off;
  run(c, &on);
  c.filter_enabled = false;
  run(c, &off);
  ASSERT_EQ(on.records().size(), off.records().size());
  for (std::size_t i = 0; i < on.records().size(); ++i) {
    ASSERT_EQ(csv_row(on.records()[i]), csv_row(off.records()[i])) << i;
    ASSERT_EQ(on.records()[i].u_star, on.records()[i].u_des);
  }
}

TEST(Run, EnergyBalanceOverTheRun) {
  // Kinetic energy change matches the work of the applied wrench.
  ScenarioConfig c = preset("landing");
  c.duration = 3.0;
  MemorySink sink;
  run(c, &sink);
  const auto& r = sink.records();
  double work = 0.0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const Vec6 mean_twist = 0.5 * (r[i].state.twist.vector() + r[i + 1].state.twist.vector());
    work += c.dt * mean_twist.dot(r[i].u_star);
  }
  const double change = r.back().energy - r.front().energy;
  EXPECT_LE(std::abs(change - work), 1e-3 * (1.0 + std::abs(work)));
}

TEST(Run, LandingRespectsDirectionalBound) {
  ScenarioConfig c = preset("landing");
  const RunSummary filtered = run(c);
  EXPECT_LE(filtered.max_edir, 1.5 * (1.0 + 1e-6));
  c.filter_enabled = false;
  const RunSummary open = run(c);
  EXPECT_GT(open.max_edir, 1.5);
}

TEST(Run, LargerEnergyGainIsNotLessSafe) {
  const RunSummary low = run(build_scenario_slit(50.0));
  const RunSummary high = run(build_scenario_slit(150.0));
  ASSERT_EQ(low.cbfs.size(), high.cbfs.size());
  double low_min = std::numeric_limits<double>::infinity();
  double high_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < low.cbfs.size(); ++i) {
    low_min = std::min(low_min, low.cbfs[i].min_h);
    high_min = std::min(high_min, high.cbfs[i].min_h);
  }
  EXPECT_GE(low_min, 0.0);
  EXPECT_GE(high_min, low_min);
  EXPECT_EQ(low.infeasible_steps, 0u);
  EXPECT_EQ(high.infeasible_steps, 0u);
}

TEST(Run, RejectsInvalidConfig) {
  ScenarioConfig c = preset("slit");
  c.dt = -1.0;
  EXPECT_THROW(run(c), ConfigError);
}

}  // namespace
}  // namespace liecbf
