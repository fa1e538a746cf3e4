// Copyright 2026 The rawbench Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAWBENCH_HARNESS_REPORT_HPP_
#define RAWBENCH_HARNESS_REPORT_HPP_

// CSV and Markdown renderings of the report tables. CSV keeps three
// decimals so near-perfect scores stay distinguishable from 1; Markdown
// rounds to two and shows accuracies >= 0.99 as a check mark. Empty groups
// are blank in CSV and an em dash in Markdown, never zero.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rawbench/error.hpp"
#include "rawbench/harness/aggregate.hpp"
#include "rawbench/harness/record.hpp"

namespace rawbench {

inline constexpr const char* kGridCsv = "attack_grid.csv";
inline constexpr const char* kDomainCsv = "domain.csv";
inline constexpr const char* kCleanCsv = "clean.csv";
inline constexpr const char* kReportMd = "report.md";

inline constexpr const char* kCheckMark = "✓";
inline constexpr const char* kMissing = "—";
inline constexpr double kCheckThreshold = 0.99;

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  // "-0.00" reads like a real negative value.
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

inline std::string csv_value(const std::optional<double>& v) {
  return v ? format_fixed(*v, 3) : std::string();
}

inline std::string md_value(const std::optional<double>& v) {
  return v ? format_fixed(*v, 2) : std::string(kMissing);
}

inline std::string md_accuracy(const std::optional<double>& v) {
  if (v && *v >= kCheckThreshold) return kCheckMark;
  return md_value(v);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> grid_columns() {
  std::vector<std::string> cols;
  for (AttackId id : kAllAttacks) cols.emplace_back(attack_code(id));
  return cols;
}

inline std::vector<std::string> domain_columns() {
  std::vector<std::string> cols;
  for (Domain d : kAllDomains) cols.emplace_back(domain_name(d));
  return cols;
}

namespace detail {

inline std::string join_row(const std::vector<std::string>& cells, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += sep;
    out += cells[i];
  }
  return out;
}

inline std::string md_row(const std::vector<std::string>& cells) {
  return "| " + join_row(cells, " | ") + " |\n";
}

inline std::string md_rule(std::size_t n) {
  std::string out = "|";
  for (std::size_t i = 0; i < n; ++i) out += "---|";
  return out + "\n";
}

inline std::string count_cell(const GroupStats& g, bool markdown) {
  if (g.empty()) return markdown ? kMissing : "";
  return std::to_string(g.failed);
}

template <std::size_t N>
std::vector<std::string> metric_cells(const std::array<GroupStats, N>& cells, const char* metric,
                                      bool markdown) {
  std::vector<std::string> out;
  for (const auto& g : cells) {
    const std::string m = metric;
    if (m == "failed") {
      out.push_back(count_cell(g, markdown));
    } else {
      const auto v = m == "bitwise" ? g.bitwise() : g.message();
      out.push_back(markdown ? md_accuracy(v) : csv_value(v));
    }
  }
  return out;
}

inline constexpr const char* kMetrics[] = {"bitwise", "message", "failed"};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("unwritable directory: cannot create " + path.string());
  out << text;
  if (!out) throw IoError("unwritable directory: failed writing " + path.string());
}

}  // namespace detail

inline std::string grid_csv(const ReportTables& t) {
  std::vector<std::string> header = {"watermarker", "regime", "metric"};
  for (const auto& c : grid_columns()) header.push_back(c);
  std::string out = detail::join_row(header, ",") + "\n";
  for (const auto& row : t.grid) {
    for (const char* metric : detail::kMetrics) {
      std::vector<std::string> cells = {csv_field(row.watermarker), row.regime, metric};
      for (auto& c : detail::metric_cells(row.cells, metric, false)) cells.push_back(c);
      out += detail::join_row(cells, ",") + "\n";
    }
  }
  return out;
}

inline std::string domain_csv(const ReportTables& t) {
  std::vector<std::string> header = {"watermarker", "metric"};
  for (const auto& c : domain_columns()) header.push_back(c);
  std::string out = detail::join_row(header, ",") + "\n";
  for (const auto& row : t.domain) {
    for (const char* metric : detail::kMetrics) {
      std::vector<std::string> cells = {csv_field(row.watermarker), metric};
      for (auto& c : detail::metric_cells(row.cells, metric, false)) cells.push_back(c);
      out += detail::join_row(cells, ",") + "\n";
    }
  }
  return out;
}

inline const std::vector<std::string>& clean_columns() {
  static const std::vector<std::string> cols = {"watermarker", "si_snr",  "mcd",
                                                "mos_lqo",     "bitwise", "message",
                                                "tpr_at_zero_fpr", "n", "failed"};
  return cols;
}

inline std::string clean_csv(const ReportTables& t) {
  std::string out = detail::join_row(clean_columns(), ",") + "\n";
  for (const auto& r : t.clean) {
    out += detail::join_row({csv_field(r.watermarker), csv_value(r.si_snr), csv_value(r.mcd),
                             csv_value(r.mos_lqo), csv_value(r.bitwise), csv_value(r.message),
                             csv_value(r.tpr_at_zero_fpr), std::to_string(r.n),
                             std::to_string(r.failed)},
                            ",") +
           "\n";
  }
  return out;
}

inline std::string report_markdown(const ReportTables& t) {
  std::ostringstream md;
  md << "# rawbench report\n\n## Clean\n\n";
  md << detail::md_row({"watermarker", "SI-SNR", "MCD", "MOS-LQO", "bitwise", "message",
                        "TPR@0FPR", "n", "failed"});
  md << detail::md_rule(9);
  for (const auto& r : t.clean) {
    md << detail::md_row({r.watermarker, md_value(r.si_snr), md_value(r.mcd), md_value(r.mos_lqo),
                          md_accuracy(r.bitwise), md_accuracy(r.message),
                          md_accuracy(r.tpr_at_zero_fpr), std::to_string(r.n),
                          std::to_string(r.failed)});
  }

  md << "\n## Strict attacks by domain\n\n";
  std::vector<std::string> dh = {"watermarker", "metric"};
  for (const auto& c : domain_columns()) dh.push_back(c);
  md << detail::md_row(dh) << detail::md_rule(dh.size());
  for (const auto& row : t.domain) {
    for (const char* metric : detail::kMetrics) {
      std::vector<std::string> cells = {row.watermarker, metric};
      for (auto& c : detail::metric_cells(row.cells, metric, true)) cells.push_back(c);
      md << detail::md_row(cells);
    }
  }

  md << "\n## Attack grid\n\n";
  std::vector<std::string> gh = {"watermarker", "regime", "metric"};
  for (const auto& c : grid_columns()) gh.push_back(c);
  md << detail::md_row(gh) << detail::md_rule(gh.size());
  for (const auto& row : t.grid) {
    for (const char* metric : detail::kMetrics) {
      std::vector<std::string> cells = {row.watermarker, row.regime, metric};
      for (auto& c : detail::metric_cells(row.cells, metric, true)) cells.push_back(c);
      md << detail::md_row(cells);
    }
  }
  return md.str();
}

inline void emit_report(const ReportTables& t, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("unwritable directory: " + dir.string() + ": " + ec.message());
  detail::write_text(dir / kGridCsv, grid_csv(t));
  detail::write_text(dir / kDomainCsv, domain_csv(t));
  detail::write_text(dir / kCleanCsv, clean_csv(t));
  detail::write_text(dir / kReportMd, report_markdown(t));
}

// Reads `records.jsonl` in `run_dir` and writes the report next to it.
inline ReportTables report_run(const std::filesystem::path& run_dir,
                               const std::filesystem::path& report_dir) {
  const auto path = run_dir / "records.jsonl";
  if (!std::filesystem::exists(path)) throw IoError("no record file: " + path.string());
  const RecordFile file = read_records(path);
  if (file.truncated_tail) {
    throw IoError(path.string() + " ends in a partial record; resume the run first");
  }
  ReportTables t = aggregate(file.records);
  emit_report(t, report_dir);
  return t;
}

}  // namespace rawbench

#endif  // RAWBENCH_HARNESS_REPORT_HPP_
