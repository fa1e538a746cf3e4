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

#ifndef RAWBENCH_METRICS_HPP_
#define RAWBENCH_METRICS_HPP_

// Imperceptibility metrics (SI-SNR, mel cepstral distance, MOS-LQO through an
// external adapter) and robustness metrics (bitwise and full-message
// accuracy, true-positive rate at zero false positives, capacity).

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rawbench/audio_clip.hpp"
#include "rawbench/error.hpp"
#include "rawbench/fft.hpp"
#include "rawbench/log.hpp"
#include "rawbench/message.hpp"
#include "rawbench/plugin.hpp"
#include "rawbench/signal.hpp"
#include "rawbench/spectral.hpp"
#include "rawbench/wav.hpp"

namespace rawbench {

struct PerceptualReport {
  double si_snr_db = 0.0;
  double mcd = 0.0;
  std::optional<double> mos_lqo;
};

struct RobustnessReport {
  double bitwise_acc = 0.0;
  int message_acc = 0;
};

// Projects the estimate onto the reference, s_t = (<est,ref>/|ref|^2) ref,
// and returns 10 log10(|s_t|^2 / |est - s_t|^2) clamped to +-100 dB.
inline double si_snr(const AudioClip& reference, const AudioClip& estimate) {
  require_same_shape(reference, estimate, "si_snr");
  const auto ref = reference.samples();
  const auto est = estimate.samples();
  const double ref_energy = energy(ref);
  if (ref_energy == 0.0) throw InvalidArgument("si_snr: zero reference");
  const double alpha = dot(est, ref) / ref_energy;
  double target = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double t = alpha * ref[i];
    const double e = est[i] - t;
    target += t * t;
    noise += e * e;
  }
  if (noise == 0.0) return kSnrClampDb;
  if (target == 0.0) return -kSnrClampDb;
  return std::clamp(power_to_db(target / noise), -kSnrClampDb, kSnrClampDb);
}

// Fixed analysis settings: 25 ms Hann frames every 10 ms, power spectrum
// through 40 mel filters (0 Hz to Nyquist), natural-log energies floored at
// 1e-10, orthonormal DCT-II, cepstra c1..c13 (c0 excluded). No time
// alignment; both signals have the same length.
struct MelCepstrumConfig {
  double frame_seconds = 0.025;
  double hop_seconds = 0.010;
  std::size_t n_mels = 40;
  std::size_t n_cepstra = 13;
  double log_floor = 1e-10;
};

inline std::vector<std::vector<double>> mel_cepstra(const AudioClip& clip,
                                                    const MelCepstrumConfig& config = {}) {
  const auto frame = static_cast<std::size_t>(std::lround(config.frame_seconds * clip.sample_rate()));
  const auto hop = static_cast<std::size_t>(std::lround(config.hop_seconds * clip.sample_rate()));
  if (clip.size() < frame || frame == 0) {
    throw InvalidArgument("mel cepstral distance: clip shorter than one frame");
  }
  const std::size_t n_fft = fft::next_pow2(frame);
  const auto bank = mel_filterbank(n_fft, config.n_mels, clip.sample_rate(), 0.0,
                                   clip.sample_rate() / 2.0);
  const auto window = hann_window(frame);
  const std::size_t n_frames = 1 + (clip.size() - frame) / hop;
  std::vector<std::vector<double>> out;
  out.reserve(n_frames);
  std::vector<double> buffer(frame);
  std::vector<double> log_mel(config.n_mels);
  for (std::size_t f = 0; f < n_frames; ++f) {
    for (std::size_t i = 0; i < frame; ++i) buffer[i] = clip[f * hop + i] * window[i];
    const auto spectrum = fft::forward_real(buffer, n_fft);
    for (std::size_t m = 0; m < config.n_mels; ++m) {
      const auto row = bank.row(m);
      double e = 0.0;
      for (std::size_t k = 0; k < row.size(); ++k) e += row[k] * std::norm(spectrum[k]);
      log_mel[m] = std::log(std::max(e, config.log_floor));
    }
    out.push_back(dct2(log_mel, 1, config.n_cepstra));
  }
  return out;
}

// Frame mean of (10 / ln 10) * sqrt(2 * sum_d (c_d - c'_d)^2).
inline double mel_cepstral_distance(const AudioClip& reference, const AudioClip& estimate,
                                    const MelCepstrumConfig& config = {}) {
  require_same_shape(reference, estimate, "mel_cepstral_distance");
  const auto a = mel_cepstra(reference, config);
  const auto b = mel_cepstra(estimate, config);
  const double k = 10.0 / std::numbers::ln10;
  double total = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) {
    double sum = 0.0;
    for (std::size_t d = 0; d < a[f].size(); ++d) {
      const double diff = a[f][d] - b[f][d];
      sum += diff * diff;
    }
    total += k * std::sqrt(2.0 * sum);
  }
  return total / static_cast<double>(a.size());
}

// Delegates to an external MOS-LQO tool speaking the plugin protocol:
//   {"op":"attack","input":<estimate.wav>,"output":"",
//    "params":{"metric":"mos_lqo","reference":<reference.wav>}}
//   -> {"ok":true,"mos_lqo":x}
// Without an adapter the metric is omitted with a warning.
inline std::optional<double> mos_lqo(const AudioClip& reference, const AudioClip& estimate,
                                     PluginClient* adapter, const std::filesystem::path& work_dir,
                                     WavDepth wire_depth = WavDepth::kPcm16) {
  if (adapter == nullptr) {
    log_warning("MOS-LQO adapter not configured; metric omitted");
    return std::nullopt;
  }
  const auto ref_path = work_dir / "mos-reference.wav";
  const auto est_path = work_dir / "mos-estimate.wav";
  save_wav(reference, ref_path, wire_depth);
  save_wav(estimate, est_path, wire_depth);
  const Json reply =
      adapter->attack(est_path, "", {{"metric", "mos_lqo"}, {"reference", ref_path.string()}});
  auto it = reply.find("mos_lqo");
  if (it == reply.end() || !it->is_number()) {
    throw ProtocolError("protocol violation: MOS-LQO reply lacks a numeric \"mos_lqo\"");
  }
  const double value = it->get<double>();
  if (value < 1.0 || value > 5.0) {
    throw ProtocolError("protocol violation: MOS-LQO value outside [1, 5]");
  }
  return value;
}

inline void require_same_length(const Message& a, const Message& b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("message length mismatch (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  }
}

inline double bitwise_accuracy(const Message& original, const Message& detected) {
  require_same_length(original, detected);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < original.size(); ++i) matches += original[i] == detected[i];
  return static_cast<double>(matches) / static_cast<double>(original.size());
}

inline int message_accuracy(const Message& original, const Message& detected) {
  require_same_length(original, detected);
  return original == detected ? 1 : 0;
}

inline RobustnessReport robustness(const Message& original, const Message& detected) {
  return {bitwise_accuracy(original, detected), message_accuracy(original, detected)};
}

// Fraction of positive scores strictly above the largest negative score.
inline double tpr_at_zero_fpr(std::span<const double> positive, std::span<const double> negative) {
  if (positive.empty() || negative.empty()) {
    throw InvalidArgument("tpr_at_zero_fpr: score lists must be nonempty");
  }
  const double threshold = *std::max_element(negative.begin(), negative.end());
  const auto above = std::count_if(positive.begin(), positive.end(),
                                   [threshold](double s) { return s > threshold; });
  return static_cast<double>(above) / static_cast<double>(positive.size());
}

// Bits per second of carrier.
inline double compute_capacity(int message_bits, double unit_seconds) {
  if (!(unit_seconds > 0.0)) throw InvalidArgument("capacity: unit length must be positive");
  return static_cast<double>(message_bits) / unit_seconds;
}

}  // namespace rawbench

#endif  // RAWBENCH_METRICS_HPP_
