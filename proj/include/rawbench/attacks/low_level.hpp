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

#ifndef RAWBENCH_ATTACKS_LOW_LEVEL_HPP_
#define RAWBENCH_ATTACKS_LOW_LEVEL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "rawbench/audio_clip.hpp"
#include "rawbench/error.hpp"
#include "rawbench/fft.hpp"
#include "rawbench/random.hpp"
#include "rawbench/resample.hpp"
#include "rawbench/spectral.hpp"

namespace rawbench {

inline AudioClip polarity_invert(const AudioClip& clip) {
  std::vector<double> out(clip.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = -clip[i];
  return clip.with_samples(std::move(out));
}

// No clipping here; clipping only happens when an integer WAV is written.
inline AudioClip adjust_gain(const AudioClip& clip, double rate) {
  std::vector<double> out(clip.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = rate * clip[i];
  return clip.with_samples(std::move(out));
}

// Rounds onto the two's-complement PCM grid of `bits` bits: 2^bits levels of
// step 2^(1-bits) spanning [-1, 1 - step]. Audio decoded from a PCM file of
// the same depth is already on the grid and passes unchanged.
inline AudioClip quantize(const AudioClip& clip, int bits) {
  if (bits < 2 || bits > 24) throw AttackError("quantize: bits must lie in [2, 24]");
  const double levels = std::ldexp(1.0, bits - 1);
  const double step = 1.0 / levels;
  std::vector<double> out(clip.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(std::round(clip[i] * levels), -levels, levels - 1.0) * step;
  }
  return clip.with_samples(std::move(out));
}

// Integer-sample shift by round(seconds * rate): positive delays (zero-filled
// head), negative advances (zero-filled tail). Length is preserved.
inline AudioClip phase_shift(const AudioClip& clip, double seconds) {
  const long shift = std::lround(seconds * clip.sample_rate());
  const long n = static_cast<long>(clip.size());
  if (std::abs(shift) >= n && n > 0) {
    throw AttackError("phase shift of " + std::to_string(shift) +
                      " samples is not shorter than the clip");
  }
  std::vector<double> out(clip.size(), 0.0);
  for (long i = 0; i < n; ++i) {
    const long src = i - shift;
    if (src >= 0 && src < n) out[static_cast<std::size_t>(i)] = clip[static_cast<std::size_t>(src)];
  }
  return clip.with_samples(std::move(out));
}

// Phase-vocoder frame length: the power of two at or above 40 ms.
inline std::size_t vocoder_frame_length(int sample_rate) {
  return fft::next_pow2(static_cast<std::size_t>(std::ceil(0.04 * sample_rate)));
}

// Pitch-preserving time stretch with a phase vocoder (Hann, hop = frame/4,
// centered frames). Analysis frames are read at fractional steps of `rate`;
// magnitudes are interpolated between neighbouring frames and phases are
// advanced by each bin's measured instantaneous frequency. Output length is
// exactly round(len / rate). rate = 1 returns the input unchanged.
inline AudioClip time_stretch(const AudioClip& clip, double rate) {
  if (!(rate > 0.0)) throw AttackError("time_stretch: rate must be positive");
  if (rate == 1.0) return clip;
  const std::size_t n = clip.size();
  const auto target = static_cast<std::size_t>(std::llround(static_cast<double>(n) / rate));
  const std::size_t frame = vocoder_frame_length(clip.sample_rate());
  const std::size_t hop = frame / 4;
  const std::size_t half = frame / 2;

  std::vector<double> padded(n + frame, 0.0);
  std::copy(clip.samples().begin(), clip.samples().end(),
            padded.begin() + static_cast<std::ptrdiff_t>(half));
  const Spectrogram analysis = stft(padded, clip.sample_rate(), frame, hop);
  const std::size_t n_in = analysis.frame_count();
  const std::size_t bins = analysis.bin_count();

  std::vector<double> steps;
  for (double t = 0.0; t < static_cast<double>(n_in); t += rate) steps.push_back(t);
  // Enough synthesis frames to cover the target length.
  const std::size_t needed = (target + frame) / hop + 1;
  while (steps.size() < needed) steps.push_back(steps.back() + rate);

  Spectrogram synthesis(frame, hop, clip.sample_rate(), steps.size());
  std::vector<double> phase(bins);
  std::vector<double> advance(bins);
  const auto first = analysis.frame(0);
  for (std::size_t k = 0; k < bins; ++k) {
    phase[k] = std::arg(first[k]);
    advance[k] = 2.0 * std::numbers::pi * static_cast<double>(hop * k) / static_cast<double>(frame);
  }
  const std::vector<Complex> silence(bins);
  const auto column = [&](std::size_t i) -> std::span<const Complex> {
    return i < n_in ? analysis.frame(i) : std::span<const Complex>(silence);
  };
  for (std::size_t j = 0; j < steps.size(); ++j) {
    const auto i = static_cast<std::size_t>(steps[j]);
    const double alpha = steps[j] - static_cast<double>(i);
    const auto a = column(i);
    const auto b = column(i + 1);
    auto out = synthesis.frame(j);
    for (std::size_t k = 0; k < bins; ++k) {
      const double mag = (1.0 - alpha) * std::abs(a[k]) + alpha * std::abs(b[k]);
      out[k] = std::polar(mag, phase[k]);
      double delta = std::arg(b[k]) - std::arg(a[k]) - advance[k];
      delta -= 2.0 * std::numbers::pi * std::round(delta / (2.0 * std::numbers::pi));
      phase[k] += advance[k] + delta;
    }
  }
  const auto y = istft(synthesis, target + frame);
  return clip.with_samples(std::vector<double>(
      y.begin() + static_cast<std::ptrdiff_t>(half),
      y.begin() + static_cast<std::ptrdiff_t>(half + target)));
}

inline constexpr double kJitterSegmentSeconds = 0.05;
inline constexpr double kJitterRateSpan = 0.1;

// Segment-wise micro-resampling. The clip is cut into 50 ms segments; segment
// k is played at rate r_k ~ U[1 - 0.1*scale, 1 + 0.1*scale]. The resulting
// piecewise-linear time warp is rescaled so the output keeps the input length,
// and the warped positions are read with the band-limited interpolator.
// scale = 0 is the identity.
inline AudioClip time_jitter(const AudioClip& clip, double scale, std::uint64_t seed) {
  if (scale < 0.0) throw AttackError("time_jitter: scale must be non-negative");
  const auto segment = static_cast<std::size_t>(
      std::llround(kJitterSegmentSeconds * clip.sample_rate()));
  const std::size_t n = clip.size();
  if (n < segment || segment == 0) {
    throw AttackError("time_jitter: clip shorter than one 50 ms segment");
  }
  const std::size_t n_segments = (n + segment - 1) / segment;
  Rng rng(seed);
  std::vector<double> rates(n_segments);
  std::vector<double> warped_start(n_segments + 1, 0.0);
  for (std::size_t k = 0; k < n_segments; ++k) {
    rates[k] = rng.uniform(1.0 - kJitterRateSpan * scale, 1.0 + kJitterRateSpan * scale);
    const std::size_t len = std::min(segment, n - k * segment);
    warped_start[k + 1] = warped_start[k] + static_cast<double>(len) * rates[k];
  }
  const double total = warped_start.back();

  std::vector<double> positions(n);
  std::size_t k = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double u = static_cast<double>(j) * total / static_cast<double>(n);
    while (k + 1 < n_segments && u >= warped_start[k + 1]) ++k;
    positions[j] = static_cast<double>(k * segment) + (u - warped_start[k]) / rates[k];
  }
  return clip.with_samples(warp_samples(clip.samples(), positions));
}

}  // namespace rawbench

#endif  // RAWBENCH_ATTACKS_LOW_LEVEL_HPP_
