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

#ifndef RAWBENCH_HARNESS_MANIFEST_HPP_
#define RAWBENCH_HARNESS_MANIFEST_HPP_

// Dataset manifest: a JSON file listing the clips to evaluate and the noise
// and impulse-response resources used by the BN and RV attacks.
//
//   {
//     "entries": [
//       {"path": "speech/p225_001.wav", "domain": "speech", "collection": "VCTK"},
//       {"path": "music/track.wav", "domain": "music", "collection": "MUSDB", "id": "m1"}
//     ],
//     "resources": {"noise": ["demand/kitchen.wav"], "impulse_responses": ["air/hall.wav"]}
//   }
//
// Relative paths resolve against the manifest's directory.

#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rawbench/error.hpp"
#include "rawbench/wav.hpp"

namespace rawbench {

// Alphabetical, which is also the column order of the domain table.
enum class Domain { kEnvironmental, kMusic, kSpeech };

inline constexpr std::array<Domain, 3> kAllDomains = {Domain::kEnvironmental, Domain::kMusic,
                                                      Domain::kSpeech};

inline std::string_view domain_name(Domain d) {
  switch (d) {
    case Domain::kEnvironmental: return "environmental";
    case Domain::kMusic: return "music";
    case Domain::kSpeech: return "speech";
  }
  return "";
}

inline std::optional<Domain> parse_domain(std::string_view text) {
  for (Domain d : kAllDomains) {
    if (domain_name(d) == text) return d;
  }
  return std::nullopt;
}

struct ManifestEntry {
  std::string id;
  std::filesystem::path path;
  Domain domain = Domain::kSpeech;
  std::string collection;
  int sample_rate = 0;
  double duration_seconds = 0.0;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::vector<std::filesystem::path> noise;
  std::vector<std::filesystem::path> impulse_responses;
};

namespace detail {

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative()) path = base / path;
  return path.lexically_normal();
}

inline void require_audio(const std::filesystem::path& path, const std::string& where) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError(where + ": missing audio file: " + path.string());
  }
}

inline std::vector<std::filesystem::path> resource_list(const nlohmann::json& j, const char* key,
                                                        const std::filesystem::path& base) {
  std::vector<std::filesystem::path> out;
  if (!j.contains(key)) return out;
  for (const auto& item : j.at(key)) {
    const auto path = resolve(base, item.get<std::string>());
    require_audio(path, std::string("resources.") + key);
    out.push_back(path);
  }
  return out;
}

}  // namespace detail

// Validates every entry (domain label, file present and readable) and
// probes durations. `base_dir` anchors relative paths.
inline DatasetManifest manifest_from_json(const nlohmann::json& j,
                                          const std::filesystem::path& base_dir) {
  DatasetManifest manifest;
  try {
    if (!j.is_object() || !j.contains("entries")) {
      throw ConfigError("manifest: expected an object with an \"entries\" list");
    }
    std::set<std::string> ids;
    std::size_t index = 0;
    for (const auto& e : j.at("entries")) {
      const std::string where = "manifest entry " + std::to_string(index++);
      ManifestEntry entry;
      const std::string label = e.at("domain").get<std::string>();
      const auto domain = parse_domain(label);
      if (!domain) {
        throw ConfigError(where + ": unknown domain \"" + label +
                          "\" (expected speech, music or environmental)");
      }
      entry.domain = *domain;
      entry.path = detail::resolve(base_dir, e.at("path").get<std::string>());
      entry.collection = e.value("collection", std::string("unknown"));
      entry.id = e.contains("id") ? e.at("id").get<std::string>()
                                  : entry.collection + "/" + entry.path.stem().string();
      if (!ids.insert(entry.id).second) {
        throw ConfigError(where + ": duplicate clip id \"" + entry.id + "\"");
      }
      detail::require_audio(entry.path, where);
      WavInfo info;
      try {
        info = probe_wav(entry.path);
      } catch (const IoError& err) {
        throw ConfigError(where + ": " + err.what());
      }
      if (info.frames == 0) throw ConfigError(where + ": zero-length audio: " + entry.path.string());
      entry.sample_rate = info.sample_rate;
      entry.duration_seconds = info.duration_seconds();
      manifest.entries.push_back(std::move(entry));
    }
    if (j.contains("resources")) {
      const auto& r = j.at("resources");
      manifest.noise = detail::resource_list(r, "noise", base_dir);
      manifest.impulse_responses = detail::resource_list(r, "impulse_responses", base_dir);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  if (manifest.entries.empty()) throw ConfigError("manifest: no entries");
  return manifest;
}

inline DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read manifest: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("manifest " + path.string() + " is not valid JSON: " + e.what());
  }
  return manifest_from_json(j, path.parent_path());
}

inline nlohmann::json manifest_to_json(const DatasetManifest& manifest) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : manifest.entries) {
    entries.push_back({{"id", e.id},
                       {"path", e.path.string()},
                       {"domain", domain_name(e.domain)},
                       {"collection", e.collection}});
  }
  nlohmann::json noise = nlohmann::json::array();
  for (const auto& p : manifest.noise) noise.push_back(p.string());
  nlohmann::json irs = nlohmann::json::array();
  for (const auto& p : manifest.impulse_responses) irs.push_back(p.string());
  return {{"entries", entries}, {"resources", {{"noise", noise}, {"impulse_responses", irs}}}};
}

}  // namespace rawbench

#endif  // RAWBENCH_HARNESS_MANIFEST_HPP_
