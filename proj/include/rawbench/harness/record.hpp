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

#ifndef RAWBENCH_HARNESS_RECORD_HPP_
#define RAWBENCH_HARNESS_RECORD_HPP_

// One evaluation record per work cell, stored as one JSON object per line.
// Records hold no timestamps, so identical runs give identical files.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rawbench/error.hpp"
#include "rawbench/harness/manifest.hpp"

namespace rawbench {

enum class RecordStatus { kOk, kAttackFailed, kPluginFailed };

inline std::string_view status_name(RecordStatus s) {
  switch (s) {
    case RecordStatus::kOk: return "ok";
    case RecordStatus::kAttackFailed: return "attack_failed";
    case RecordStatus::kPluginFailed: return "plugin_failed";
  }
  return "";
}

inline std::optional<RecordStatus> parse_status(std::string_view text) {
  for (auto s : {RecordStatus::kOk, RecordStatus::kAttackFailed, RecordStatus::kPluginFailed}) {
    if (status_name(s) == text) return s;
  }
  return std::nullopt;
}

struct EvalRecord {
  std::string cell;
  std::size_t index = 0;
  std::string clip;
  Domain domain = Domain::kSpeech;
  std::string collection;
  std::string watermarker;
  std::string attack;  // attack code, or "clean"
  std::string regime;  // "loose" / "strict"; "-" for clean cells
  std::optional<double> parameter;
  std::uint64_t seed = 0;
  RecordStatus status = RecordStatus::kOk;
  std::string error;

  // Embedding quality (watermarked vs. original segment).
  std::optional<double> si_snr;
  std::optional<double> mcd;
  std::optional<double> mos_lqo;
  // Detection after the attack. Absent on failed records.
  std::optional<double> bitwise_acc;
  std::optional<int> message_acc;
  std::optional<double> presence;
  std::optional<double> presence_unmarked;  // clean cells: detector on the original

  bool clean() const { return attack == "clean"; }
  bool ok() const { return status == RecordStatus::kOk; }
};

namespace detail {

template <typename T>
void put_optional(nlohmann::ordered_json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json();
}

template <typename T>
std::optional<T> get_optional(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace detail

inline std::string record_to_line(const EvalRecord& r) {
  nlohmann::ordered_json j;
  j["cell"] = r.cell;
  j["index"] = r.index;
  j["clip"] = r.clip;
  j["domain"] = domain_name(r.domain);
  j["collection"] = r.collection;
  j["watermarker"] = r.watermarker;
  j["attack"] = r.attack;
  j["regime"] = r.regime;
  detail::put_optional(j, "parameter", r.parameter);
  j["seed"] = r.seed;
  j["status"] = status_name(r.status);
  if (!r.error.empty()) j["error"] = r.error;
  detail::put_optional(j, "si_snr", r.si_snr);
  detail::put_optional(j, "mcd", r.mcd);
  detail::put_optional(j, "mos_lqo", r.mos_lqo);
  detail::put_optional(j, "bitwise_acc", r.bitwise_acc);
  detail::put_optional(j, "message_acc", r.message_acc);
  detail::put_optional(j, "presence", r.presence);
  if (r.clean()) detail::put_optional(j, "presence_unmarked", r.presence_unmarked);
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

inline EvalRecord record_from_json(const nlohmann::json& j) {
  EvalRecord r;
  r.cell = j.at("cell").get<std::string>();
  r.index = j.at("index").get<std::size_t>();
  r.clip = j.at("clip").get<std::string>();
  const auto domain = parse_domain(j.at("domain").get<std::string>());
  if (!domain) throw IoError("record " + r.cell + ": unknown domain");
  r.domain = *domain;
  r.collection = j.value("collection", std::string());
  r.watermarker = j.at("watermarker").get<std::string>();
  r.attack = j.at("attack").get<std::string>();
  r.regime = j.at("regime").get<std::string>();
  r.parameter = detail::get_optional<double>(j, "parameter");
  r.seed = j.at("seed").get<std::uint64_t>();
  const auto status = parse_status(j.at("status").get<std::string>());
  if (!status) throw IoError("record " + r.cell + ": unknown status");
  r.status = *status;
  r.error = j.value("error", std::string());
  r.si_snr = detail::get_optional<double>(j, "si_snr");
  r.mcd = detail::get_optional<double>(j, "mcd");
  r.mos_lqo = detail::get_optional<double>(j, "mos_lqo");
  r.bitwise_acc = detail::get_optional<double>(j, "bitwise_acc");
  r.message_acc = detail::get_optional<int>(j, "message_acc");
  r.presence = detail::get_optional<double>(j, "presence");
  r.presence_unmarked = detail::get_optional<double>(j, "presence_unmarked");
  return r;
}

struct RecordFile {
  std::vector<EvalRecord> records;
  std::size_t valid_bytes = 0;  // length of the well-formed prefix
  bool truncated_tail = false;  // a partial or corrupt last line was seen
};

// Reads every complete, parseable line. Reading stops at the first line
// that is unterminated or malformed; that is what a killed writer leaves.
inline RecordFile read_records(const std::filesystem::path& path) {
  RecordFile out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::string line;
  while (true) {
    const auto start = in.tellg();
    if (!std::getline(in, line)) break;
    if (in.eof()) {  // no trailing newline
      out.truncated_tail = !line.empty();
      break;
    }
    try {
      out.records.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception&) {
      out.truncated_tail = true;
      break;
    }
    out.valid_bytes = static_cast<std::size_t>(start) + line.size() + 1;
  }
  return out;
}

}  // namespace rawbench

#endif  // RAWBENCH_HARNESS_RECORD_HPP_
