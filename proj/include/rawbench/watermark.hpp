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

#ifndef RAWBENCH_WATERMARK_HPP_
#define RAWBENCH_WATERMARK_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rawbench/audio_clip.hpp"
#include "rawbench/error.hpp"
#include "rawbench/fft.hpp"
#include "rawbench/message.hpp"
#include "rawbench/plugin.hpp"
#include "rawbench/random.hpp"
#include "rawbench/resample.hpp"
#include "rawbench/signal.hpp"
#include "rawbench/temp_dir.hpp"
#include "rawbench/wav.hpp"

namespace rawbench {

class CapacityError : public Error {
 public:
  using Error::Error;
};

struct DetectionResult {
  Message bits;
  std::vector<double> bit_scores;       // per-bit confidence in [0, 1], may be empty
  std::optional<double> presence_score;
};

enum class WatermarkerMode { kBuiltin, kPlugin };

struct WatermarkerHandle {
  std::string name;
  int message_length = 16;
  int native_rate = 16000;
  WatermarkerMode mode = WatermarkerMode::kBuiltin;
  std::vector<std::string> command;  // plugin argv; empty for builtin
};

namespace detail {

// Fits `x` to exactly `n` samples by truncating or zero-padding the tail.
inline std::vector<double> fit_length(std::vector<double> x, std::size_t n) {
  x.resize(n, 0.0);
  return x;
}

}  // namespace detail

// Common front end: validates the message, moves audio to the model's native
// rate and back. Embedding adds the model's residual (watermarked minus
// input, at the native rate) to the caller's clip after resampling it back,
// so content the model never sees is preserved untouched.
class Watermarker {
 public:
  virtual ~Watermarker() = default;

  virtual const WatermarkerHandle& handle() const = 0;

  AudioClip embed(const AudioClip& clip, const Message& message) {
    if (static_cast<int>(message.size()) != handle().message_length) {
      throw InvalidArgument("embed: message has " + std::to_string(message.size()) +
                            " bits, watermarker '" + handle().name + "' expects " +
                            std::to_string(handle().message_length));
    }
    if (clip.empty()) throw InvalidArgument("embed: empty clip");
    const int native = handle().native_rate;
    if (clip.sample_rate() == native) {
      return clip.with_samples(detail::fit_length(embed_native(clip, message).vector(), clip.size()));
    }
    const AudioClip down = resample(clip, native);
    const AudioClip marked = embed_native(down, message);
    std::vector<double> residual(down.size());
    for (std::size_t i = 0; i < down.size(); ++i) {
      residual[i] = (i < marked.size() ? marked[i] : 0.0) - down[i];
    }
    const auto up = detail::fit_length(resample_samples(residual, native, clip.sample_rate()),
                                       clip.size());
    std::vector<double> out(clip.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = clip[i] + up[i];
    return clip.with_samples(std::move(out));
  }

  // Low confidence is reported through the scores, never as an error.
  DetectionResult detect(const AudioClip& clip) {
    if (clip.empty()) throw InvalidArgument("detect: empty clip");
    DetectionResult result = detect_native(resample(clip, handle().native_rate));
    if (static_cast<int>(result.bits.size()) != handle().message_length) {
      throw ProtocolError("detector returned " + std::to_string(result.bits.size()) +
                          " bits, expected " + std::to_string(handle().message_length));
    }
    return result;
  }

 protected:
  virtual AudioClip embed_native(const AudioClip& clip, const Message& message) = 0;
  virtual DetectionResult detect_native(const AudioClip& clip) = 0;
};

// Built-in baseline: synchronization-free BPSK spread spectrum.
//
// The clip is cut into message_length + 1 equal segments (a pilot segment
// with known symbol +1, then one per bit). Each segment carries a seeded
// Gaussian chip sequence band-limited to 1-4 kHz. Embedding uses improved
// spread spectrum: the host's projection onto the chip sequence is removed
// before adding amplitude * symbol, so clean detection is exact. Amplitude
// is the segment RMS scaled by `strength_db`.
//
// Detection correlates each segment with its chip sequence (normalized
// correlation in [-1, 1]). Bits are decided relative to the pilot's sign, so
// the decoder is invariant to polarity inversion; |correlation| is the soft
// score and the mean |correlation| is the presence score.
struct ReferenceConfig {
  std::uint64_t key_seed = 0x5eed;
  int message_length = 16;
  int native_rate = 16000;
  double strength_db = -30.0;
  double band_low_hz = 1000.0;
  double band_high_hz = 4000.0;
  std::size_t min_segment_samples = 1024;
};

inline constexpr double kSilenceRmsFloor = 1e-4;

inline std::size_t reference_segment_length(std::size_t samples, int message_length,
                                            std::size_t min_segment_samples) {
  const std::size_t segment = samples / static_cast<std::size_t>(message_length + 1);
  if (segment < min_segment_samples) {
    throw CapacityError("insufficient capacity: " + std::to_string(samples) + " samples cannot carry " +
                        std::to_string(message_length) + " bits at " +
                        std::to_string(min_segment_samples) + " chips per bit (plus pilot)");
  }
  return segment;
}

// Chip sequence for segment `index`, scaled to unit mean power.
inline std::vector<double> reference_chips(std::uint64_t key_seed, std::size_t index,
                                           std::size_t length, int sample_rate, double low_hz,
                                           double high_hz) {
  Rng rng(mix_seed(mix_seed(key_seed, index), length));
  std::vector<double> noise(length);
  for (double& v : noise) v = rng.gaussian();
  auto spectrum = fft::forward_real(noise);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double hz = static_cast<double>(k) * sample_rate / static_cast<double>(length);
    if (hz < low_hz || hz > high_hz) spectrum[k] = 0.0;
  }
  auto chips = fft::inverse_real(spectrum, length);
  const double rms = std::sqrt(mean_power(chips));
  if (rms > 0.0) {
    for (double& v : chips) v /= rms;
  }
  return chips;
}

inline AudioClip reference_embed(const AudioClip& clip, const Message& message,
                                 const ReferenceConfig& config) {
  const int bits = static_cast<int>(message.size());
  const std::size_t segment = reference_segment_length(clip.size(), bits, config.min_segment_samples);
  std::vector<double> out = clip.vector();
  const double strength = db_to_amplitude(config.strength_db);
  for (int i = 0; i <= bits; ++i) {
    const auto chips = reference_chips(config.key_seed, static_cast<std::size_t>(i), segment,
                                       clip.sample_rate(), config.band_low_hz, config.band_high_hz);
    const std::span<double> host(out.data() + static_cast<std::size_t>(i) * segment, segment);
    const double symbol = (i == 0 || message[static_cast<std::size_t>(i - 1)] == 1) ? 1.0 : -1.0;
    const double projection = dot(host, chips) / energy(chips);
    const double amplitude = std::max(std::sqrt(mean_power(host)), kSilenceRmsFloor) * strength;
    const double weight = amplitude * symbol - projection;
    for (std::size_t n = 0; n < segment; ++n) host[n] += weight * chips[n];
  }
  return clip.with_samples(std::move(out));
}

inline DetectionResult reference_detect(const AudioClip& clip, const ReferenceConfig& config) {
  const int bits = config.message_length;
  const std::size_t segment = reference_segment_length(clip.size(), bits, config.min_segment_samples);
  std::vector<double> correlation(static_cast<std::size_t>(bits) + 1);
  for (int i = 0; i <= bits; ++i) {
    const auto chips = reference_chips(config.key_seed, static_cast<std::size_t>(i), segment,
                                       clip.sample_rate(), config.band_low_hz, config.band_high_hz);
    const std::span<const double> seg(clip.samples().data() + static_cast<std::size_t>(i) * segment,
                                      segment);
    const double norm = std::sqrt(energy(seg) * energy(chips));
    correlation[static_cast<std::size_t>(i)] = norm > 0.0 ? dot(seg, chips) / norm : 0.0;
  }
  const double pilot = correlation[0] < 0.0 ? -1.0 : 1.0;
  std::vector<int> decoded(static_cast<std::size_t>(bits));
  std::vector<double> scores(static_cast<std::size_t>(bits));
  double presence = std::abs(correlation[0]);
  for (std::size_t b = 0; b < decoded.size(); ++b) {
    const double c = correlation[b + 1];
    decoded[b] = c * pilot > 0.0 ? 1 : 0;
    scores[b] = std::min(1.0, std::abs(c));
    presence += std::abs(c);
  }
  return {Message(std::move(decoded)), std::move(scores),
          presence / static_cast<double>(correlation.size())};
}

class ReferenceWatermarker final : public Watermarker {
 public:
  explicit ReferenceWatermarker(ReferenceConfig config = {}) : config_(config) {
    handle_.name = "builtin";
    handle_.message_length = config_.message_length;
    handle_.native_rate = config_.native_rate;
    handle_.mode = WatermarkerMode::kBuiltin;
  }

  const WatermarkerHandle& handle() const override { return handle_; }
  const ReferenceConfig& config() const { return config_; }

 protected:
  AudioClip embed_native(const AudioClip& clip, const Message& message) override {
    return reference_embed(clip, message, config_);
  }
  // Audio too short to hold the message (e.g. after a fast time stretch)
  // decodes as all zeros with zero confidence instead of failing.
  DetectionResult detect_native(const AudioClip& clip) override {
    try {
      return reference_detect(clip, config_);
    } catch (const CapacityError&) {
      const auto n = static_cast<std::size_t>(config_.message_length);
      return {Message(std::vector<int>(n, 0)), std::vector<double>(n, 0.0), 0.0};
    }
  }

 private:
  ReferenceConfig config_;
  WatermarkerHandle handle_;
};

// A watermarker served by an external process over the plugin protocol. Bound
// to one child process; use from one thread at a time.
class PluginWatermarker final : public Watermarker {
 public:
  PluginWatermarker(std::vector<std::string> argv, PluginTimeouts timeouts = {},
                    WavDepth wire_depth = WavDepth::kPcm16)
      : client_(argv, timeouts), wire_depth_(wire_depth), scratch_("rawbench-plugin") {
    const PluginInfo info = client_.info();
    handle_.name = info.name;
    handle_.message_length = info.message_length;
    handle_.native_rate = info.native_rate;
    handle_.mode = WatermarkerMode::kPlugin;
    handle_.command = std::move(argv);
  }

  const WatermarkerHandle& handle() const override { return handle_; }
  PluginClient& client() { return client_; }

 protected:
  AudioClip embed_native(const AudioClip& clip, const Message& message) override {
    const auto input = scratch_.unique_file("embed-in", ".wav");
    const auto output = scratch_.unique_file("embed-out", ".wav");
    save_wav(clip, input, wire_depth_);
    client_.embed(input, output, message.bits());
    AudioClip marked = read_reply_audio(output);
    std::filesystem::remove(input);
    std::filesystem::remove(output);
    marked = resample(marked, clip.sample_rate());
    return clip.with_samples(detail::fit_length(marked.vector(), clip.size()));
  }

  DetectionResult detect_native(const AudioClip& clip) override {
    const auto input = scratch_.unique_file("detect-in", ".wav");
    save_wav(clip, input, wire_depth_);
    PluginDetectReply reply = client_.detect(input);
    std::filesystem::remove(input);
    if (static_cast<int>(reply.bits.size()) != handle_.message_length) {
      throw ProtocolError("protocol violation: detect returned " +
                          std::to_string(reply.bits.size()) + " bits, plugin declared " +
                          std::to_string(handle_.message_length));
    }
    return {Message(std::move(reply.bits)), std::move(reply.scores), reply.presence};
  }

 private:
  static AudioClip read_reply_audio(const std::filesystem::path& path) {
    try {
      return load_wav(path);
    } catch (const IoError& e) {
      throw ProtocolError(std::string("protocol violation: unreadable plugin output: ") + e.what());
    }
  }

  PluginClient client_;
  WavDepth wire_depth_;
  TempDir scratch_;
  WatermarkerHandle handle_;
};

// Starts a plugin and completes the `info` handshake (30 s default timeout).
inline std::unique_ptr<PluginWatermarker> spawn_plugin(const std::vector<std::string>& argv,
                                                       PluginTimeouts timeouts = {},
                                                       WavDepth wire_depth = WavDepth::kPcm16) {
  return std::make_unique<PluginWatermarker>(argv, timeouts, wire_depth);
}

}  // namespace rawbench

#endif  // RAWBENCH_WATERMARK_HPP_
