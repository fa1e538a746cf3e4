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

#ifndef RAWBENCH_HARNESS_EXECUTE_HPP_
#define RAWBENCH_HARNESS_EXECUTE_HPP_

// Runs a plan. Each worker thread owns its watermarker instances, plugin
// processes and scratch directory; finished records are handed to a single
// writer that appends them to records.jsonl in plan order. Because the file
// is always a plan-order prefix, a killed run resumes by skipping the cells
// already on disk and produces the same file as an uninterrupted run.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "rawbench/attacks/apply.hpp"
#include "rawbench/harness/plan.hpp"
#include "rawbench/harness/record.hpp"
#include "rawbench/log.hpp"
#include "rawbench/message.hpp"
#include "rawbench/metrics.hpp"
#include "rawbench/temp_dir.hpp"
#include "rawbench/watermark.hpp"

namespace rawbench {

inline constexpr const char* kRecordsFile = "records.jsonl";
inline constexpr const char* kRunMetaFile = "run_meta.json";

struct RunSummary {
  std::size_t planned = 0;
  std::size_t resumed = 0;  // already on disk when the run started
  std::size_t executed = 0;
  std::size_t ok = 0;
  std::size_t failed = 0;  // over the whole record file

  bool all_ok() const { return failed == 0; }
};

struct RunOptions {
  std::filesystem::path out_dir;
  std::function<void(const EvalRecord&)> on_record;  // called by the writer
  std::size_t stop_after = 0;  // testing aid: stop after this many new records (0: never)
};

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

// Executes cells for one worker.
class CellRunner {
 public:
  CellRunner(const RunPlan& plan, ResourceCache& resources)
      : plan_(plan), resources_(resources), scratch_("rawbench-worker") {
    env_.codecs = plan.config.codecs;
    env_.codec_timeout = std::chrono::seconds(plan.config.codec_timeout_seconds);
    env_.wire_depth = plan.config.wire_depth;
    env_.work_dir = scratch_.path();
    env_.resources = &resources_;
  }

  EvalRecord run(const WorkCell& cell) {
    const ManifestEntry& entry = plan_.clip(cell);
    EvalRecord r;
    r.cell = cell.id;
    r.index = cell.index;
    r.clip = entry.id;
    r.domain = entry.domain;
    r.collection = entry.collection;
    r.watermarker = plan_.watermarker(cell).name;
    r.seed = cell.seed;
    if (cell.clean()) {
      r.attack = "clean";
      r.regime = "-";
    } else {
      r.attack = std::string(attack_code(cell.attack->id));
      r.regime = cell.attack->regime.name();
      r.parameter = cell.attack->parameter;
    }

    const auto fail = [&](RecordStatus status, const std::string& stage, const std::exception& e) {
      r.status = status;
      r.error = stage + ": " + e.what();
      r.bitwise_acc.reset();
      r.message_acc.reset();
      r.presence.reset();
      r.presence_unmarked.reset();
      return r;
    };

    const AudioClip* segment = nullptr;
    try {
      segment = &load_segment(cell.clip_index);
    } catch (const std::exception& e) {
      return fail(RecordStatus::kAttackFailed, "input", e);
    }

    Watermarker* wm = nullptr;
    try {
      wm = &watermarker(cell.watermarker_index);
    } catch (const std::exception& e) {
      return fail(RecordStatus::kPluginFailed, "watermarker", e);
    }

    const Message message =
        Message::random(static_cast<std::size_t>(wm->handle().message_length), cell.message_seed());
    AudioClip marked;
    try {
      marked = wm->embed(*segment, message);
    } catch (const std::exception& e) {
      return fail(RecordStatus::kPluginFailed, "embed", e);
    }
    r.si_snr = optional_metric([&] { return si_snr(*segment, marked); });
    r.mcd = optional_metric([&] { return mel_cepstral_distance(*segment, marked); });

    AudioClip attacked = marked;
    if (cell.clean()) {
      if (PluginClient* adapter = mos_adapter()) {
        try {
          r.mos_lqo = mos_lqo(*segment, marked, adapter, scratch_.path(), plan_.config.wire_depth);
        } catch (const std::exception& e) {
          log_warning("MOS-LQO failed for " + cell.id + ": " + e.what());
        }
      }
    } else {
      try {
        env_.neural_codec = attack_needs_neural(cell.attack->id) ? neural_plugin() : nullptr;
        attacked = apply_attack(marked, *cell.attack, env_);
      } catch (const PluginError& e) {
        return fail(RecordStatus::kPluginFailed, "attack", e);
      } catch (const std::exception& e) {
        return fail(RecordStatus::kAttackFailed, "attack", e);
      }
    }

    try {
      const DetectionResult detected = wm->detect(attacked);
      const RobustnessReport rob = robustness(message, detected.bits);
      r.bitwise_acc = rob.bitwise_acc;
      r.message_acc = rob.message_acc;
      r.presence = detected.presence_score;
      if (cell.clean()) r.presence_unmarked = wm->detect(*segment).presence_score;
    } catch (const std::exception& e) {
      return fail(RecordStatus::kPluginFailed, "detect", e);
    }
    return r;
  }

 private:
  static bool attack_needs_neural(AttackId id) {
    return attack_info(id).category == AttackCategory::kNeuralCompression;
  }

  template <typename F>
  static std::optional<double> optional_metric(F&& f) {
    try {
      return f();
    } catch (const InvalidArgument&) {
      return std::nullopt;  // e.g. silent reference or clip shorter than a frame
    }
  }

  const AudioClip& load_segment(std::size_t clip_index) {
    if (cached_index_ == clip_index && cached_) return *cached_;
    cached_.reset();
    const ManifestEntry& entry = plan_.manifest.entries[clip_index];
    AudioClip clip = load_wav(entry.path);
    const auto limit =
        static_cast<std::size_t>(std::llround(plan_.config.segment_seconds * clip.sample_rate()));
    if (clip.size() > limit) {
      clip = clip.with_samples(std::vector<double>(clip.samples().begin(),
                                                   clip.samples().begin() + static_cast<std::ptrdiff_t>(limit)));
    }
    cached_ = std::make_unique<AudioClip>(std::move(clip));
    cached_index_ = clip_index;
    return *cached_;
  }

  Watermarker& watermarker(std::size_t index) {
    if (watermarkers_.size() <= index) watermarkers_.resize(plan_.config.watermarkers.size());
    auto& slot = watermarkers_[index];
    if (!slot) {
      const WatermarkerSpec& spec = plan_.config.watermarkers[index];
      if (spec.builtin()) {
        slot = std::make_unique<ReferenceWatermarker>(plan_.config.reference_config());
      } else {
        slot = spawn_plugin(spec.argv, plan_.config.plugin_timeouts(), plan_.config.wire_depth);
      }
    }
    return *slot;
  }

  PluginClient* neural_plugin() {
    if (plan_.config.neural_codec_plugin.empty()) return nullptr;
    if (!neural_) {
      neural_ = std::make_unique<PluginClient>(plan_.config.neural_codec_plugin,
                                               plan_.config.plugin_timeouts());
    }
    return neural_.get();
  }

  PluginClient* mos_adapter() {
    if (plan_.config.mos_lqo_plugin.empty()) return nullptr;
    if (!mos_) {
      mos_ = std::make_unique<PluginClient>(plan_.config.mos_lqo_plugin,
                                            plan_.config.plugin_timeouts());
    }
    return mos_.get();
  }

  const RunPlan& plan_;
  ResourceCache& resources_;
  TempDir scratch_;
  AttackEnvironment env_;
  std::vector<std::unique_ptr<Watermarker>> watermarkers_;
  std::unique_ptr<PluginClient> neural_;
  std::unique_ptr<PluginClient> mos_;
  std::size_t cached_index_ = 0;
  std::unique_ptr<AudioClip> cached_;
};

namespace detail {

inline nlohmann::ordered_json codec_metadata(const RunConfig& config) {
  nlohmann::ordered_json codecs = nlohmann::ordered_json::object();
  for (const auto& [id, cmd] : config.codecs) {
    codecs[std::string(attack_code(id))] = {
        {"encode", cmd.encode},
        {"decode", cmd.decode},
        {"encoder_available", !cmd.encode.empty() && executable_on_path(cmd.encode.front())},
        {"decoder_available", !cmd.decode.empty() && executable_on_path(cmd.decode.front())}};
  }
  return codecs;
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp);
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

// Validates plugin watermarkers once up front so a bad command line is a
// setup error rather than a column of failed cells.
inline nlohmann::ordered_json preflight_watermarkers(const RunConfig& config) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& spec : config.watermarkers) {
    if (spec.builtin()) {
      const ReferenceConfig ref = config.reference_config();
      out.push_back({{"name", spec.name},
                     {"mode", "builtin"},
                     {"message_length", ref.message_length},
                     {"native_rate", ref.native_rate},
                     {"strength_db", ref.strength_db},
                     {"key_seed", ref.key_seed}});
      continue;
    }
    try {
      auto wm = spawn_plugin(spec.argv, config.plugin_timeouts(), config.wire_depth);
      out.push_back({{"name", spec.name},
                     {"mode", "plugin"},
                     {"command", spec.argv},
                     {"plugin_name", wm->handle().name},
                     {"message_length", wm->handle().message_length},
                     {"native_rate", wm->handle().native_rate}});
    } catch (const PluginError& e) {
      throw ConfigError("watermarker \"" + spec.name + "\" failed to start: " + e.what());
    }
  }
  return out;
}

}  // namespace detail

inline RunSummary execute_run(const RunPlan& plan, const RunOptions& options) {
  std::filesystem::create_directories(options.out_dir);
  const auto records_path = options.out_dir / kRecordsFile;

  // Resume: keep the well-formed prefix, drop a torn last line.
  RecordFile existing = read_records(records_path);
  if (existing.truncated_tail) {
    std::filesystem::resize_file(records_path, existing.valid_bytes);
    log_warning("dropped a partial record at the end of " + records_path.string());
  }
  std::set<std::string> planned_ids;
  for (const auto& cell : plan.cells) planned_ids.insert(cell.id);
  std::set<std::string> done;
  for (const auto& r : existing.records) {
    if (!planned_ids.count(r.cell)) {
      throw ConfigError("existing " + records_path.string() + " holds cell \"" + r.cell +
                        "\" that is not in this plan; use a fresh output directory");
    }
    done.insert(r.cell);
  }

  RunSummary summary;
  summary.planned = plan.cells.size();
  summary.resumed = done.size();
  for (const auto& r : existing.records) (r.ok() ? summary.ok : summary.failed)++;

  std::vector<const WorkCell*> pending;
  for (const auto& cell : plan.cells) {
    if (!done.count(cell.id)) pending.push_back(&cell);
  }
  if (options.stop_after > 0 && pending.size() > options.stop_after) {
    pending.resize(options.stop_after);
  }

  nlohmann::ordered_json meta;
  meta["tool"] = "rawbench";
  meta["started_at"] = utc_timestamp();
  meta["planned_cells"] = plan.cells.size();
  meta["resumed_cells"] = summary.resumed;
  meta["watermarkers"] = detail::preflight_watermarkers(plan.config);
  meta["codecs"] = detail::codec_metadata(plan.config);
  meta["config"] = config_to_json(plan.config);
  meta["manifest"] = manifest_to_json(plan.manifest);
  detail::write_json_file(options.out_dir / kRunMetaFile, meta);
  if (plan.config.mos_lqo_plugin.empty()) {
    log_warning("MOS-LQO adapter not configured; metric omitted");
  }

  std::ofstream out(records_path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot open " + records_path.string() + " for appending");

  ResourceCache resources;
  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(plan.config.workers), std::max<std::size_t>(pending.size(), 1));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex mutex;
  std::condition_variable ready_cv;
  std::map<std::size_t, EvalRecord> ready;
  std::exception_ptr worker_error;

  const auto work = [&] {
    try {
      CellRunner runner(plan, resources);
      while (!abort) {
        const std::size_t j = next++;
        if (j >= pending.size()) break;
        EvalRecord record = runner.run(*pending[j]);
        std::lock_guard lock(mutex);
        ready.emplace(j, std::move(record));
        ready_cv.notify_all();
      }
    } catch (...) {
      std::lock_guard lock(mutex);
      if (!worker_error) worker_error = std::current_exception();
      abort = true;
      ready_cv.notify_all();
    }
  };

  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < n_workers; ++w) threads.emplace_back(work);

  for (std::size_t written = 0; written < pending.size(); ++written) {
    EvalRecord record;
    {
      std::unique_lock lock(mutex);
      ready_cv.wait(lock, [&] { return ready.count(written) > 0 || abort; });
      if (!ready.count(written)) break;
      record = std::move(ready.at(written));
      ready.erase(written);
    }
    out << record_to_line(record) << '\n';
    out.flush();
    if (!out) {
      abort = true;
      break;
    }
    ++summary.executed;
    (record.ok() ? summary.ok : summary.failed)++;
    if (options.on_record) options.on_record(record);
  }
  abort = true;
  for (auto& t : threads) t.join();
  if (worker_error) std::rethrow_exception(worker_error);
  if (!out) throw IoError("failed writing " + records_path.string());

  meta["finished_at"] = utc_timestamp();
  meta["summary"] = {{"planned", summary.planned},
                     {"resumed", summary.resumed},
                     {"executed", summary.executed},
                     {"ok", summary.ok},
                     {"failed", summary.failed}};
  detail::write_json_file(options.out_dir / kRunMetaFile, meta);
  return summary;
}

}  // namespace rawbench

#endif  // RAWBENCH_HARNESS_EXECUTE_HPP_
