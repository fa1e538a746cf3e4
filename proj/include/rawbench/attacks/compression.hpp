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

#ifndef RAWBENCH_ATTACKS_COMPRESSION_HPP_
#define RAWBENCH_ATTACKS_COMPRESSION_HPP_

// Lossy round trips: conventional codecs through external encoder/decoder
// executables, neural codecs through an attack plugin. Decoded audio is
// brought back to the input rate, re-aligned by cross-correlation (codec
// priming delay) and trimmed or zero-padded to the input length.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "rawbench/attacks/catalog.hpp"
#include "rawbench/audio_clip.hpp"
#include "rawbench/error.hpp"
#include "rawbench/fft.hpp"
#include "rawbench/plugin.hpp"
#include "rawbench/resample.hpp"
#include "rawbench/subprocess.hpp"
#include "rawbench/temp_dir.hpp"
#include "rawbench/wav.hpp"

namespace rawbench {

// argv templates; "{in}", "{out}" and "{kbps}" are substituted per call.
struct CodecCommand {
  std::vector<std::string> encode;
  std::vector<std::string> decode;
  std::string extension;  // of the compressed file, e.g. ".mp3"
};

inline std::map<AttackId, CodecCommand> default_codec_commands() {
  return {
      {AttackId::MP,
       {{"lame", "--quiet", "-b", "{kbps}", "{in}", "{out}"},
        {"lame", "--quiet", "--decode", "{in}", "{out}"},
        ".mp3"}},
      {AttackId::OG,
       {{"oggenc", "--quiet", "-b", "{kbps}", "-o", "{out}", "{in}"},
        {"oggdec", "--quiet", "-o", "{out}", "{in}"},
        ".ogg"}},
      {AttackId::AA,
       {{"ffmpeg", "-nostdin", "-y", "-loglevel", "error", "-i", "{in}", "-c:a", "aac", "-b:a",
         "{kbps}k", "{out}"},
        {"ffmpeg", "-nostdin", "-y", "-loglevel", "error", "-i", "{in}", "-c:a", "pcm_s16le",
         "{out}"},
        ".m4a"}},
  };
}

inline std::vector<std::string> substitute(const std::vector<std::string>& argv,
                                           const std::map<std::string, std::string>& vars) {
  std::vector<std::string> out;
  for (std::string arg : argv) {
    for (const auto& [key, value] : vars) {
      for (auto pos = arg.find(key); pos != std::string::npos;
           pos = arg.find(key, pos + value.size())) {
        arg.replace(pos, key.size(), value);
      }
    }
    out.push_back(arg);
  }
  return out;
}

inline constexpr double kMaxAlignSeconds = 0.25;

// Shifts `decoded` by the lag that maximizes its cross-correlation with
// `reference` (searched within +-0.25 s) and fits it to the reference length.
inline std::vector<double> align_to_reference(std::span<const double> reference,
                                              std::span<const double> decoded, int sample_rate) {
  const auto max_lag = static_cast<std::size_t>(kMaxAlignSeconds * sample_rate);
  const auto r = fft::cross_correlate(reference, decoded, max_lag);
  std::size_t best = max_lag;  // zero lag wins ties
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] > r[best]) best = i;
  }
  const long lag = static_cast<long>(best) - static_cast<long>(max_lag);
  std::vector<double> out(reference.size(), 0.0);
  for (long n = 0; n < static_cast<long>(out.size()); ++n) {
    const long src = n + lag;
    if (src >= 0 && src < static_cast<long>(decoded.size())) {
      out[static_cast<std::size_t>(n)] = decoded[static_cast<std::size_t>(src)];
    }
  }
  return out;
}

namespace detail {

inline void run_codec_step(const std::vector<std::string>& argv, const char* step,
                           const std::filesystem::path& log_path,
                           std::chrono::milliseconds timeout) {
  if (argv.empty()) throw AttackError(std::string(step) + " command is empty");
  CommandResult result;
  try {
    result = run_command(argv, timeout, log_path);
  } catch (const SpawnError&) {
    throw AttackError(std::string(step) + " missing: " + argv.front());
  }
  if (result.timed_out) throw AttackError(std::string(step) + " timed out: " + join_argv(argv));
  if (result.exit_code != 0) {
    throw AttackError(std::string(step) + " failed (exit " + std::to_string(result.exit_code) +
                      "): " + join_argv(argv) + ": " + result.stderr_tail);
  }
}

inline void require_listed_value(AttackId id, double value) {
  const auto& values = attack_info(id).values;
  if (std::find(values.begin(), values.end(), value) == values.end()) {
    throw AttackError(std::string(attack_code(id)) + ": value " + std::to_string(value) +
                      " is not supported");
  }
}

}  // namespace detail

inline AudioClip transcode(const AudioClip& clip, AttackId codec, int bitrate_kbps,
                           const CodecCommand& command, const std::filesystem::path& work_dir,
                           std::chrono::milliseconds timeout = std::chrono::minutes(5)) {
  if (attack_info(codec).category != AttackCategory::kConventionalCompression) {
    throw AttackError("transcode: not a conventional codec attack");
  }
  detail::require_listed_value(codec, bitrate_kbps);
  const std::string stem = std::string(attack_code(codec)) + "-" + std::to_string(bitrate_kbps);
  const auto input = work_dir / (stem + "-in.wav");
  const auto compressed = work_dir / (stem + command.extension);
  const auto decoded = work_dir / (stem + "-out.wav");
  std::filesystem::remove(decoded);
  save_wav(clip, input, WavDepth::kPcm16);

  const std::string kbps = std::to_string(bitrate_kbps);
  detail::run_codec_step(
      substitute(command.encode, {{"{in}", input.string()}, {"{out}", compressed.string()}, {"{kbps}", kbps}}),
      "encoder", work_dir / (stem + "-enc.log"), timeout);
  detail::run_codec_step(
      substitute(command.decode, {{"{in}", compressed.string()}, {"{out}", decoded.string()}, {"{kbps}", kbps}}),
      "decoder", work_dir / (stem + "-dec.log"), timeout);

  AudioClip out;
  try {
    out = resample(load_wav(decoded), clip.sample_rate());
  } catch (const IoError& e) {
    throw AttackError(std::string("decoder produced unreadable audio: ") + e.what());
  }
  return clip.with_samples(align_to_reference(clip.samples(), out.samples(), clip.sample_rate()));
}

inline int neural_codec_rate(AttackId id) {
  switch (id) {
    case AttackId::EN: return 24000;
    case AttackId::DA: return 44100;
    default: throw AttackError("not a neural codec attack");
  }
}

inline std::string_view neural_codec_name(AttackId id) {
  return id == AttackId::EN ? "encodec" : "dac";
}

// Round trip through an attack plugin at the codec's native rate. Plugin
// failures surface as PluginError.
inline AudioClip neural_codec(const AudioClip& clip, AttackId id, int n_codebooks,
                              PluginClient& plugin, const std::filesystem::path& work_dir,
                              WavDepth wire_depth = WavDepth::kPcm16) {
  const int rate = neural_codec_rate(id);
  detail::require_listed_value(id, n_codebooks);
  const std::string stem = std::string(attack_code(id)) + "-" + std::to_string(n_codebooks);
  const auto input = work_dir / (stem + "-in.wav");
  const auto output = work_dir / (stem + "-out.wav");
  std::filesystem::remove(output);
  save_wav(resample(clip, rate), input, wire_depth);
  plugin.attack(input, output,
                {{"attack", std::string(attack_code(id))},
                 {"codec", std::string(neural_codec_name(id))},
                 {"n_codebooks", n_codebooks},
                 {"sample_rate", rate}});
  AudioClip decoded;
  try {
    decoded = resample(load_wav(output), clip.sample_rate());
  } catch (const IoError& e) {
    throw ProtocolError(std::string("plugin failure: unreadable attack output: ") + e.what());
  }
  return clip.with_samples(
      align_to_reference(clip.samples(), decoded.samples(), clip.sample_rate()));
}

}  // namespace rawbench

#endif  // RAWBENCH_ATTACKS_COMPRESSION_HPP_
