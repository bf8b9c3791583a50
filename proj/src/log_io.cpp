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

#include "liecbf/log_io.hpp"

#include <charconv>
#include <sstream>

#include "liecbf/config.hpp"
#include "liecbf/errors.hpp"

namespace liecbf {
namespace {

void append(std::string& line, double value) {
  line += ',';
  line += format_double(value);
}

}  // namespace

CsvSink::CsvSink(std::string path) : path_(std::move(path)) {
  out_.open(path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot open '" + path_ + "' for writing");
}

void CsvSink::check() const {
  if (!out_) throw IoError("write to '" + path_ + "' failed");
}

void CsvSink::begin(const LogSchema& schema) {
  out_ << csv_header(schema) << '\n';
  check();
}

void CsvSink::record(const LogRecord& record) {
  out_ << csv_row(record) << '\n';
  check();
}

void CsvSink::end() {
  out_.flush();
  check();
}

std::vector<std::string> csv_columns(const LogSchema& schema) {
  std::vector<std::string> cols{"t", "px", "py", "pz"};
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) cols.push_back("r" + std::to_string(i) + std::to_string(j));
  }
  for (const char* c : {"wx", "wy", "wz", "vx", "vy", "vz"}) cols.emplace_back(c);
  for (int i = 1; i <= 6; ++i) cols.push_back("ud" + std::to_string(i));
  for (int i = 1; i <= 6; ++i) cols.push_back("u" + std::to_string(i));
  for (const auto& e : schema.cbfs) {
    cols.push_back((e.directional ? "Edir_" : "h_") + e.label);
    cols.push_back("H_" + e.label);
    cols.push_back("active_" + e.label);
  }
  cols.emplace_back("E");
  return cols;
}

std::string csv_header(const LogSchema& schema) {
  std::string line;
  for (const std::string& c : csv_columns(schema)) {
    if (!line.empty()) line += ',';
    line += c;
  }
  return line;
}

std::string csv_row(const LogRecord& r) {
  std::string line = format_double(r.t);
  const Vec3& p = r.state.pose.position;
  const Mat3& m = r.state.pose.rotation.matrix();
  for (int i = 0; i < 3; ++i) append(line, p(i));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) append(line, m(i, j));
  }
  const Vec6 xi = r.state.twist.vector();
  for (int i = 0; i < 6; ++i) append(line, xi(i));
  for (int i = 0; i < 6; ++i) append(line, r.u_des(i));
  for (int i = 0; i < 6; ++i) append(line, r.u_star(i));
  for (const CbfSample& s : r.cbfs) {
    append(line, s.h);
    append(line, s.H);
    line += s.active ? ",1" : ",0";
  }
  append(line, r.energy);
  return line;
}

std::string summary_text(const RunSummary& s, bool include_timing) {
  std::ostringstream out;
  out << "scenario = " << s.scenario << "\n";
  out << "config_digest = " << s.config_digest << "\n";
  out << "steps = " << s.steps << "\n";
  out << "final_time = " << format_double(s.final_time) << "\n";
  out << "touchdown = " << (s.touchdown ? "true" : "false") << "\n";
  for (const CbfSummary& c : s.cbfs) {
    if (c.directional) {
      out << "max_Edir_" << c.label << " = " << format_double(c.max_h) << "\n";
    } else {
      out << "min_h_" << c.label << " = " << format_double(c.min_h) << "\n";
    }
    out << "min_H_" << c.label << " = " << format_double(c.min_H) << "\n";
  }
  out << "max_Edir = " << format_double(s.max_edir) << "\n";
  out << "max_correction = " << format_double(s.max_correction) << "\n";
  out << "rms_pos_err = " << format_double(s.rms_pos_err) << "\n";
  out << "infeasible_steps = " << s.infeasible_steps << "\n";
  if (include_timing) {
    out << "wall_ms = " << format_double(s.wall_ms) << "\n";
  }
  return out.str();
}

void write_summary(const RunSummary& summary, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << summary_text(summary, false);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw InvalidArgumentError("no column '" + name + "' in CSV");
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgumentError("CSV is empty");
  std::istringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) table.columns.push_back(cell);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    while (std::getline(fields, cell, ',')) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw InvalidArgumentError("bad number '" + cell + "' on CSV line " +
                                   std::to_string(line_no));
      }
      row.push_back(v);
    }
    if (row.size() != table.columns.size()) {
      throw InvalidArgumentError("CSV line " + std::to_string(line_no) +
                                 " has the wrong number of fields");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path)); }

std::vector<std::pair<std::string, std::string>> parse_summary(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    out.emplace_back(line.substr(0, eq), line.substr(eq + 3));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace liecbf
