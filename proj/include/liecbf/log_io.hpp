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

#ifndef LIECBF__LOG_IO_HPP_
#define LIECBF__LOG_IO_HPP_

#include <cstddef>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "liecbf/rigid_body.hpp"

namespace liecbf {

/// Per-CBF columns of a log. Energy-augmented barriers log h, H; directional
/// ones log E_dir and H = E_max - E_dir.
struct LogSchema {
  struct Entry {
    std::string label;
    bool directional = false;
  };
  std::vector<Entry> cbfs;
};

struct CbfSample {
  double h = 0.0;  // E_dir for directional barriers
  double H = 0.0;
  bool active = false;
};

struct LogRecord {
  double t = 0.0;
  State state;
  Vec6 u_des = Vec6::Zero();
  Vec6 u_star = Vec6::Zero();
  std::vector<CbfSample> cbfs;
  double energy = 0.0;
};

class LogSink {
 public:
  virtual ~LogSink() = default;
  virtual void begin(const LogSchema& schema) = 0;
  virtual void record(const LogRecord& record) = 0;
  virtual void end() {}
};

/// Keeps every record in memory.
class MemorySink : public LogSink {
 public:
  void begin(const LogSchema& schema) override { schema_ = schema; }
  void record(const LogRecord& record) override { records_.push_back(record); }

  const LogSchema& schema() const { return schema_; }
  const std::vector<LogRecord>& records() const { return records_; }

 private:
  LogSchema schema_;
  std::vector<LogRecord> records_;
};

/// Writes the CSV log as records arrive. Throws IoError naming the path.
class CsvSink : public LogSink {
 public:
  explicit CsvSink(std::string path);

  void begin(const LogSchema& schema) override;
  void record(const LogRecord& record) override;
  void end() override;

 private:
  void check() const;

  std::string path_;
  std::ofstream out_;
};

struct CbfSummary {
  std::string label;
  bool directional = false;
  double min_h = 0.0;
  double min_H = 0.0;
  double max_h = 0.0;
};

/// Aggregates over the logged records. Minima over an empty log are +inf.
struct RunSummary {
  std::string scenario;
  std::string config_digest;
  std::size_t steps = 0;
  double final_time = 0.0;
  bool touchdown = false;
  std::vector<CbfSummary> cbfs;
  double max_edir = 0.0;  // 0 when no directional barrier is configured
  double max_correction = 0.0;
  double rms_pos_err = 0.0;
  std::size_t infeasible_steps = 0;
  double wall_ms = 0.0;
};

/// t, px..pz, r11..r33, wx..wz, vx..vz, ud1..ud6, u1..u6, per-CBF, E.
std::vector<std::string> csv_columns(const LogSchema& schema);
std::string csv_header(const LogSchema& schema);
std::string csv_row(const LogRecord& record);

/// `key = value` lines. wall_ms is included only when `include_timing`, so
/// the written file is byte-stable across identical runs.
std::string summary_text(const RunSummary& summary, bool include_timing);
void write_summary(const RunSummary& summary, const std::string& path);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Throws InvalidArgumentError for an unknown column.
  std::size_t column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::string& path);

std::vector<std::pair<std::string, std::string>> parse_summary(const std::string& text);

std::string read_file(const std::string& path);

}  // namespace liecbf

#endif  // LIECBF__LOG_IO_HPP_
