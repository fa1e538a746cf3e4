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

#ifndef RAWBENCH_HARNESS_CONFIG_HPP_
#define RAWBENCH_HARNESS_CONFIG_HPP_

// Run configuration, read from JSON. Every key is optional:
//
//   {
//     "seed": 1234,
//     "segment_seconds": 10,
//     "message_length": 16,
//     "workers": 4,
//     "watermarkers": ["builtin", "plugin:python3 adapters/serve.py --model audioseal",
//                      {"name": "timbre", "plugin": ["python3", "serve.py", "--model", "timbre"]}],
//     "attacks": "all",                  // or ["GN", "TS:strict", "MP:loose", ...]
//     "codecs": {"MP": {"encode": [...], "decode": [...], "extension": ".mp3"}},
//     "neural_codec_plugin": "python3 adapters/serve.py --model encodec",
//     "mos_lqo_plugin": "python3 adapters/serve.py --model visqol",
//     "wire_bit_depth": 16,
//     "builtin": {"strength_db": -30, "key_seed": 24301},
//     "timeouts": {"codec_seconds": 300, "plugin_seconds": 600, "info_seconds": 30}
//   }

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rawbench/attacks/catalog.hpp"
#include "rawbench/attacks/compression.hpp"
#include "rawbench/error.hpp"
#include "rawbench/plugin.hpp"
#include "rawbench/subprocess.hpp"
#include "rawbench/watermark.hpp"
#include "rawbench/wav.hpp"

namespace rawbench {

struct WatermarkerSpec {
  std::string name;                // label used in records and reports
  std::vector<std::string> argv;  // empty for the builtin watermarker

  bool builtin() const { return argv.empty(); }
  friend bool operator==(const WatermarkerSpec&, const WatermarkerSpec&) = default;
};

struct AttackSelection {
  AttackId id;
  AttackRegime regime;
};

struct RunConfig {
  std::uint64_t master_seed = 0;
  double segment_seconds = 10.0;
  int message_length = 16;  // builtin watermarker; plugins declare their own
  int workers = 1;
  std::vector<WatermarkerSpec> watermarkers = {{"builtin", {}}};
  std::vector<AttackSelection> attacks;
  std::map<AttackId, CodecCommand> codecs = default_codec_commands();
  std::vector<std::string> neural_codec_plugin;
  std::vector<std::string> mos_lqo_plugin;
  WavDepth wire_depth = WavDepth::kPcm16;
  double builtin_strength_db = ReferenceConfig{}.strength_db;
  std::uint64_t builtin_key_seed = ReferenceConfig{}.key_seed;
  int codec_timeout_seconds = 300;
  int plugin_timeout_seconds = 600;
  int info_timeout_seconds = 30;

  ReferenceConfig reference_config() const {
    ReferenceConfig c;
    c.key_seed = builtin_key_seed;
    c.message_length = message_length;
    c.strength_db = builtin_strength_db;
    return c;
  }

  PluginTimeouts plugin_timeouts() const {
    return {std::chrono::seconds(info_timeout_seconds),
            std::chrono::seconds(plugin_timeout_seconds)};
  }
};

// Every attack in catalog order, loose then strict.
inline std::vector<AttackSelection> all_attack_selections() {
  std::vector<AttackSelection> out;
  for (AttackId id : kAllAttacks) {
    out.push_back({id, AttackRegime::loose()});
    out.push_back({id, AttackRegime::strict()});
  }
  return out;
}

namespace detail {

inline std::vector<std::string> argv_from_json(const nlohmann::json& j, const std::string& key) {
  std::vector<std::string> argv;
  if (j.is_string()) {
    argv = split_command_line(j.get<std::string>());
  } else if (j.is_array()) {
    for (const auto& a : j) argv.push_back(a.get<std::string>());
  } else {
    throw ConfigError(key + ": expected a command string or an argv list");
  }
  if (argv.empty()) throw ConfigError(key + ": empty command");
  return argv;
}

}  // namespace detail

// "builtin" or "plugin:<command line>". Plugins are named after their
// executable unless a name is given.
inline WatermarkerSpec parse_watermarker(const std::string& text) {
  if (text == "builtin") return {"builtin", {}};
  constexpr std::string_view kPrefix = "plugin:";
  if (text.rfind(kPrefix, 0) == 0) {
    auto argv = split_command_line(text.substr(kPrefix.size()));
    if (argv.empty()) throw ConfigError("watermarker \"" + text + "\": empty plugin command");
    return {std::filesystem::path(argv.front()).filename().string(), std::move(argv)};
  }
  throw ConfigError("watermarker \"" + text + "\": expected builtin or plugin:<command>");
}

// "GN" selects both regimes; "GN:loose" / "GN:S" one of them.
inline std::vector<AttackSelection> parse_attack_selection(const std::string& text) {
  const auto colon = text.find(':');
  const std::string code = text.substr(0, colon);
  const auto id = parse_attack_id(code);
  if (!id) throw ConfigError("unknown attack \"" + code + "\"");
  if (colon == std::string::npos) {
    return {{*id, AttackRegime::loose()}, {*id, AttackRegime::strict()}};
  }
  const auto regime = parse_regime(text.substr(colon + 1));
  if (!regime) throw ConfigError("attack \"" + text + "\": unknown regime");
  return {{*id, *regime}};
}

inline void validate_config(const RunConfig& c) {
  if (!(c.segment_seconds > 0.0)) throw ConfigError("segment_seconds must be positive");
  if (c.message_length < 1) throw ConfigError("message_length must be at least 1");
  if (c.workers < 1) throw ConfigError("workers must be at least 1");
  if (c.watermarkers.empty()) throw ConfigError("no watermarkers configured");
  if (c.attacks.empty()) throw ConfigError("no attacks selected");
  std::set<std::string> names;
  for (const auto& w : c.watermarkers) {
    if (!names.insert(w.name).second) {
      throw ConfigError("duplicate watermarker name \"" + w.name + "\"");
    }
  }
  const ReferenceConfig ref = c.reference_config();
  const double needed = static_cast<double>((ref.message_length + 1) * ref.min_segment_samples) /
                        ref.native_rate;
  for (const auto& w : c.watermarkers) {
    if (w.builtin() && c.segment_seconds < needed) {
      throw ConfigError("segment_seconds " + std::to_string(c.segment_seconds) +
                        " is too short for the builtin watermarker (needs " +
                        std::to_string(needed) + " s for " + std::to_string(c.message_length) +
                        " bits)");
    }
  }
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> kKeys = {
      "seed", "segment_seconds", "message_length", "workers", "watermarkers", "attacks",
      "codecs", "neural_codec_plugin", "mos_lqo_plugin", "wire_bit_depth", "builtin", "timeouts"};
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw ConfigError("config: unknown key \"" + key + "\"");
  }
  RunConfig c;
  c.attacks = all_attack_selections();
  try {
    c.master_seed = j.value("seed", std::uint64_t{0});
    c.segment_seconds = j.value("segment_seconds", c.segment_seconds);
    c.message_length = j.value("message_length", c.message_length);
    c.workers = j.value("workers", c.workers);
    if (j.contains("watermarkers")) {
      c.watermarkers.clear();
      for (const auto& w : j.at("watermarkers")) {
        if (w.is_string()) {
          c.watermarkers.push_back(parse_watermarker(w.get<std::string>()));
        } else {
          auto argv = detail::argv_from_json(w.at("plugin"), "watermarkers.plugin");
          const std::string name = w.value("name", std::filesystem::path(argv.front()).filename().string());
          c.watermarkers.push_back({name, std::move(argv)});
        }
      }
    }
    if (j.contains("attacks")) {
      const auto& a = j.at("attacks");
      if (!(a.is_string() && a.get<std::string>() == "all")) {
        c.attacks.clear();
        for (const auto& item : a) {
          for (const auto& s : parse_attack_selection(item.get<std::string>())) c.attacks.push_back(s);
        }
      }
    }
    if (j.contains("codecs")) {
      for (const auto& [code, cmd] : j.at("codecs").items()) {
        const auto id = parse_attack_id(code);
        if (!id || attack_info(*id).category != AttackCategory::kConventionalCompression) {
          throw ConfigError("codecs: \"" + code + "\" is not a codec attack (MP, OG, AA)");
        }
        CodecCommand command = c.codecs[*id];
        if (cmd.contains("encode")) command.encode = detail::argv_from_json(cmd.at("encode"), "codecs.encode");
        if (cmd.contains("decode")) command.decode = detail::argv_from_json(cmd.at("decode"), "codecs.decode");
        command.extension = cmd.value("extension", command.extension);
        c.codecs[*id] = std::move(command);
      }
    }
    if (j.contains("neural_codec_plugin")) {
      c.neural_codec_plugin = detail::argv_from_json(j.at("neural_codec_plugin"), "neural_codec_plugin");
    }
    if (j.contains("mos_lqo_plugin")) {
      c.mos_lqo_plugin = detail::argv_from_json(j.at("mos_lqo_plugin"), "mos_lqo_plugin");
    }
    if (j.contains("wire_bit_depth")) {
      const int depth = j.at("wire_bit_depth").get<int>();
      if (depth != 16 && depth != 24 && depth != 32) {
        throw ConfigError("wire_bit_depth must be 16, 24 or 32");
      }
      c.wire_depth = static_cast<WavDepth>(depth);
    }
    if (j.contains("builtin")) {
      const auto& b = j.at("builtin");
      c.builtin_strength_db = b.value("strength_db", c.builtin_strength_db);
      c.builtin_key_seed = b.value("key_seed", c.builtin_key_seed);
    }
    if (j.contains("timeouts")) {
      const auto& t = j.at("timeouts");
      c.codec_timeout_seconds = t.value("codec_seconds", c.codec_timeout_seconds);
      c.plugin_timeout_seconds = t.value("plugin_seconds", c.plugin_timeout_seconds);
      c.info_timeout_seconds = t.value("info_seconds", c.info_timeout_seconds);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config: " + path.string());
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
}

// Default configuration when no file is given.
inline RunConfig default_config() { return config_from_json(nlohmann::json::object()); }

inline nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json watermarkers = nlohmann::json::array();
  for (const auto& w : c.watermarkers) {
    if (w.builtin()) {
      watermarkers.push_back(w.name);
    } else {
      watermarkers.push_back({{"name", w.name}, {"plugin", w.argv}});
    }
  }
  nlohmann::json attacks = nlohmann::json::array();
  for (const auto& a : c.attacks) {
    attacks.push_back(std::string(attack_code(a.id)) + ":" + a.regime.name());
  }
  nlohmann::json codecs = nlohmann::json::object();
  for (const auto& [id, cmd] : c.codecs) {
    codecs[std::string(attack_code(id))] = {
        {"encode", cmd.encode}, {"decode", cmd.decode}, {"extension", cmd.extension}};
  }
  nlohmann::json j = {{"seed", c.master_seed},
                      {"segment_seconds", c.segment_seconds},
                      {"message_length", c.message_length},
                      {"workers", c.workers},
                      {"watermarkers", watermarkers},
                      {"attacks", attacks},
                      {"codecs", codecs},
                      {"wire_bit_depth", static_cast<int>(c.wire_depth)},
                      {"builtin", {{"strength_db", c.builtin_strength_db}, {"key_seed", c.builtin_key_seed}}},
                      {"timeouts",
                       {{"codec_seconds", c.codec_timeout_seconds},
                        {"plugin_seconds", c.plugin_timeout_seconds},
                        {"info_seconds", c.info_timeout_seconds}}}};
  if (!c.neural_codec_plugin.empty()) j["neural_codec_plugin"] = c.neural_codec_plugin;
  if (!c.mos_lqo_plugin.empty()) j["mos_lqo_plugin"] = c.mos_lqo_plugin;
  return j;
}

}  // namespace rawbench

#endif  // RAWBENCH_HARNESS_CONFIG_HPP_
