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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "liecbf/log_io.hpp"

namespace liecbf {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("liecbf_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Result cli(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string("'") + LIECBF_CLI_PATH + "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out.string());
  r.err = read_file(err.string());
  return r;
}

double summary_value(const std::string& text, const std::string& key) {
  for (const auto& [k, v] : parse_summary(text)) {
    if (k == key) return std::stod(v);
  }
  ADD_FAILURE() << "no " << key << " in\n" << text;
  return 0.0;
}

TEST(Cli, ListSucceeds) {
  const fs::path dir = scratch_dir("list");
  const Result r = cli("list", dir);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("slit"), std::string::npos);
  EXPECT_NE(r.out.find("landing"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  const fs::path dir = scratch_dir("usage");
  EXPECT_EQ(cli("run --preset slit --bogus", dir).code, 2);
  EXPECT_EQ(cli("", dir).code, 2);
  EXPECT_EQ(cli("run", dir).code, 2);
  EXPECT_EQ(cli("run --preset nowhere", dir).code, 2);
}

TEST(Cli, NegativeTimeStepNamesTheKey) {
  const fs::path dir = scratch_dir("dt");
  const Result r = cli("run --preset slit --dt -1 --out '" + dir.string() + "'", dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("dt"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir / "slit.csv"));
}

TEST(Cli, BadConfigFileReportsLine) {
  const fs::path dir = scratch_dir("badcfg");
  const fs::path cfg = dir / "bad.cfg";
  std::ofstream(cfg) << "# comment\nduration = 1\ncbf.alpha = fast\n";
  const Result r = cli("run --config '" + cfg.string() + "' --out '" + dir.string() + "'", dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("cbf.alpha"), std::string::npos) << r.err;
}

TEST(Cli, RunWritesLogAndSummary) {
  const fs::path dir = scratch_dir("run");
  const Result r =
      cli("run --preset landing --duration 1 --out '" + dir.string() + "' --name short", dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const CsvTable t = read_csv((dir / "short.csv").string());
  EXPECT_EQ(t.rows.size(), 1000u);
  EXPECT_EQ(t.columns.back(), "E");
  const std::string summary = read_file((dir / "short.summary.txt").string());
  EXPECT_EQ(summary_value(summary, "steps"), 1000.0);
  EXPECT_EQ(summary.find("wall_ms"), std::string::npos);
  EXPECT_NE(r.out.find("wall_ms"), std::string::npos);
}

TEST(Cli, UnfilteredLandingExceedsBound) {
  const fs::path dir = scratch_dir("nofilter");
  const Result open = cli("run --preset landing --no-filter --out '" + dir.string() + "'", dir);
  ASSERT_EQ(open.code, 0) << open.err;
  EXPECT_GT(summary_value(open.out, "max_Edir"), 1.5);
  const Result safe = cli("run --preset landing --out '" + dir.string() + "'", dir);
  ASSERT_EQ(safe.code, 0) << safe.err;
  EXPECT_LE(summary_value(safe.out, "max_Edir"), 1.5 * (1.0 + 1e-6));
}

TEST(Cli, SweepWritesOneLogPerValue) {
  const fs::path dir = scratch_dir("sweep");
  const Result r = cli("sweep --preset landing --duration 0.5 --param alpha --values 1,2 --jobs 2 "
                       "--out '" + dir.string() + "'",
                       dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "landing_alpha_1.csv"));
  EXPECT_TRUE(fs::exists(dir / "landing_alpha_2.csv"));
  EXPECT_TRUE(fs::exists(dir / "landing_alpha_1.summary.txt"));
  EXPECT_TRUE(fs::exists(dir / "landing_alpha_2.summary.txt"));
}

TEST(Cli, InfeasibleStartAborts) {
  // Disk at rest lying flat across a slit wall: H < 0 and the constraint
  // has no dependence on the input.
  const fs::path dir = scratch_dir("infeasible");
  const fs::path cfg = dir / "wall.cfg";
  std::ofstream(cfg) << "duration = 1\n"
                        "slit.wall.center = 0, 0, 0\n"
                        "slit.wall.normal = 1, 0, 0\n"
                        "filter.mode = continuous\n"
                        "output.name = wall\n";
  Result r = cli("run --config '" + cfg.string() + "' --out '" + dir.string() + "'", dir);
  EXPECT_EQ(r.code, 1) << r.err;
  EXPECT_NE(r.err.find("infeasible"), std::string::npos) << r.err;

  r = cli("run --config '" + cfg.string() + "' --on-infeasible continue --out '" + dir.string() +
              "'",
          dir);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_GT(summary_value(r.out, "infeasible_steps"), 0.0);
}

}  // namespace
}  // namespace liecbf
