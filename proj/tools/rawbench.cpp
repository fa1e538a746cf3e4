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

// rawbench command line: plan | run | report | selftest.
//
// Exit codes: 0 when every cell is ok, 2 when any cell failed (or a
// self-test verdict failed), 1 on setup errors.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rawbench.hpp"

namespace {

using namespace rawbench;

constexpr int kExitOk = 0;
constexpr int kExitSetup = 1;
constexpr int kExitCellsFailed = 2;

struct Options {
  std::string manifest;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::vector<std::string> watermarkers;
  std::vector<std::string> attacks;
  std::size_t stop_after = 0;
};

RunConfig resolve_config(const Options& o) {
  RunConfig c = o.config.empty() ? default_config() : load_config(o.config);
  if (o.seed) c.master_seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (!o.watermarkers.empty()) {
    c.watermarkers.clear();
    for (const auto& w : o.watermarkers) c.watermarkers.push_back(parse_watermarker(w));
  }
  if (!o.attacks.empty()) {
    c.attacks.clear();
    for (const auto& a : o.attacks) {
      for (const auto& s : parse_attack_selection(a)) c.attacks.push_back(s);
    }
  }
  return c;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw ConfigError(std::string(flag) + " is required");
}

int cmd_plan(const Options& o) {
  require(o.manifest, "--manifest");
  const RunPlan plan = plan_run(load_manifest(o.manifest), resolve_config(o));
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!o.out.empty()) {
    std::filesystem::create_directories(o.out);
    file.open(std::filesystem::path(o.out) / "plan.jsonl");
    if (!file) throw IoError("cannot write plan to " + o.out);
    out = &file;
  }
  for (const auto& cell : plan.cells) *out << cell_to_json(plan, cell).dump() << '\n';
  std::cerr << plan.cells.size() << " cells (" << plan.manifest.entries.size() << " clips x "
            << plan.config.watermarkers.size() << " watermarkers x (" << plan.config.attacks.size()
            << " attack settings + clean))\n";
  return kExitOk;
}

int finish_run(const RunPlan& plan, const std::filesystem::path& out, std::size_t stop_after,
               bool quiet = false) {
  std::size_t shown = 0;
  RunOptions options;
  options.out_dir = out;
  options.stop_after = stop_after;
  options.on_record = [&](const EvalRecord& r) {
    ++shown;
    if (!quiet && (shown % 100 == 0 || !r.ok())) {
      std::cerr << "[" << r.index + 1 << "/" << plan.cells.size() << "] " << r.cell << " "
                << status_name(r.status) << (r.error.empty() ? "" : ": " + r.error) << "\n";
    }
  };
  const RunSummary s = execute_run(plan, options);
  std::cerr << "cells: " << s.planned << " planned, " << s.resumed << " resumed, " << s.executed
            << " executed, " << s.failed << " failed\n";
  if (s.resumed + s.executed < s.planned) {
    std::cerr << "run stopped early; rerun with the same --out to resume\n";
    return s.all_ok() ? kExitOk : kExitCellsFailed;
  }
  report_run(out, out);
  std::cerr << "report written to " << out.string() << "\n";
  return s.all_ok() ? kExitOk : kExitCellsFailed;
}

int cmd_run(const Options& o) {
  require(o.manifest, "--manifest");
  require(o.out, "--out");
  const RunPlan plan = plan_run(load_manifest(o.manifest), resolve_config(o));
  return finish_run(plan, o.out, o.stop_after);
}

int cmd_report(const Options& o) {
  require(o.out, "--out");
  const ReportTables t = report_run(o.out, o.out);
  std::size_t failed = 0;
  for (const auto& r : read_records(std::filesystem::path(o.out) / kRecordsFile).records) {
    if (!r.ok()) ++failed;
  }
  std::cout << report_markdown(t);
  return failed == 0 ? kExitOk : kExitCellsFailed;
}

int cmd_selftest(const Options& o) {
  const std::filesystem::path out = o.out.empty() ? "rawbench-selftest" : o.out;
  RunConfig config = o.config.empty() ? default_config() : load_config(o.config);
  if (o.seed) config.master_seed = *o.seed;
  if (o.workers) config.workers = *o.workers;
  config = selftest_config(config);
  std::optional<DatasetManifest> real;
  if (!o.manifest.empty()) real = load_manifest(o.manifest);
  const RunPlan plan =
      plan_run(selftest_manifest(out / "corpus", config.master_seed, real), config);
  std::cerr << "self-test: " << plan.manifest.entries.size() << " clips, "
            << config.attacks.size() << " attack settings, " << plan.cells.size() << " cells\n";
  finish_run(plan, out / "run", o.stop_after, true);
  const auto file = read_records(out / "run" / kRecordsFile);
  if (file.records.size() < plan.cells.size()) return kExitCellsFailed;

  std::vector<Verdict> verdicts = selftest_verdicts(file.records);
  verdicts.push_back(report_shape_verdict(out / "run"));
  bool all = true;
  for (const auto& v : verdicts) {
    std::cout << verdict_line(v) << "\n";
    all = all && v.passed;
  }
  std::cout << (all ? "selftest: all verdicts pass" : "selftest: FAILED") << "\n";
  return all ? kExitOk : kExitCellsFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rawbench: audio watermark robustness benchmark"};
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--manifest", o.manifest, "Dataset manifest (JSON)");
    sub->add_option("--config", o.config, "Run configuration (JSON)");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--seed", o.seed, "Master seed (overrides the config)");
    sub->add_option("--workers", o.workers, "Worker threads (overrides the config)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--watermarker", o.watermarkers, "builtin or plugin:<command>; repeatable");
    sub->add_option("--attack", o.attacks, "Attack code, optionally :loose or :strict; repeatable");
    sub->add_option("--stop-after", o.stop_after, "Stop after this many new records")
        ->group("");
  };
  auto* plan = app.add_subcommand("plan", "Print the work cells of a run");
  auto* run = app.add_subcommand("run", "Execute (or resume) a run and write its report");
  auto* report = app.add_subcommand("report", "Rebuild the report from a run directory");
  auto* selftest = app.add_subcommand("selftest", "Builtin watermarker on synthetic clips");
  for (auto* sub : {plan, run, report, selftest}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSetup;
  }

  try {
    if (*plan) return cmd_plan(o);
    if (*run) return cmd_run(o);
    if (*report) return cmd_report(o);
    if (*selftest) return cmd_selftest(o);
  } catch (const std::exception& e) {
    std::cerr << "rawbench: error: " << e.what() << "\n";
    return kExitSetup;
  }
  return kExitSetup;
}
