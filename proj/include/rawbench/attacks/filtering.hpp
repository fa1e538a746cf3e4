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

#ifndef RAWBENCH_ATTACKS_FILTERING_HPP_
#define RAWBENCH_ATTACKS_FILTERING_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "rawbench/audio_clip.hpp"
#include "rawbench/error.hpp"
#include "rawbench/fft.hpp"
#include "rawbench/random.hpp"
#include "rawbench/signal.hpp"
#include "rawbench/spectral.hpp"

namespace rawbench {

enum class FilterKind { kLowpass, kHighpass };

struct Biquad {
  double b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;

  // Transposed direct form II, zero initial state.
  void process(std::vector<double>& x) const {
    double s1 = 0.0, s2 = 0.0;
    for (double& v : x) {
      const double in = v;
      const double out = b0 * in + s1;
      s1 = b1 * in - a1 * out + s2;
      s2 = b2 * in - a2 * out;
      v = out;
    }
  }
};

// Bilinear-transform Butterworth sections, pre-warped. The design corner is
// moved so that the filter is -1.505 dB at `cutoff_hz`; run twice (forward
// and backward) the total is -3.01 dB there.
inline std::array<Biquad, 2> butterworth4(FilterKind kind, double cutoff_hz, int sample_rate) {
  const double warped = std::tan(std::numbers::pi * cutoff_hz / sample_rate);
  const double shift = std::pow(std::sqrt(2.0) - 1.0, 1.0 / 8.0);
  const double corner = kind == FilterKind::kLowpass ? warped / shift : warped * shift;
  const double w0 = 2.0 * std::atan(corner);
  const double cw = std::cos(w0);
  const double sw = std::sin(w0);
  std::array<Biquad, 2> sections;
  for (int k = 0; k < 2; ++k) {
    const double q = 1.0 / (2.0 * std::cos(std::numbers::pi * (2 * k + 1) / 8.0));
    const double alpha = sw / (2.0 * q);
    const double a0 = 1.0 + alpha;
    Biquad s;
    if (kind == FilterKind::kLowpass) {
      s.b0 = (1.0 - cw) / 2.0 / a0;
      s.b1 = (1.0 - cw) / a0;
    } else {
      s.b0 = (1.0 + cw) / 2.0 / a0;
      s.b1 = -(1.0 + cw) / a0;
    }
    s.b2 = s.b0;
    s.a1 = -2.0 * cw / a0;
    s.a2 = (1.0 - alpha) / a0;
    sections[static_cast<std::size_t>(k)] = s;
  }
  return sections;
}

// Zero-phase filter: a 4th-order Butterworth run forward and backward, so the
// magnitude response is that of an 8th-order Butterworth (-3.01 dB at the
// cutoff) with no group delay. Edges are padded by odd reflection.
inline AudioClip apply_filter(const AudioClip& clip, FilterKind kind, double cutoff_hz) {
  const double nyquist = clip.sample_rate() / 2.0;
  if (!(cutoff_hz > 0.0) || cutoff_hz >= nyquist) {
    throw AttackError("filter cutoff " + std::to_string(cutoff_hz) +
                      " Hz must lie in (0, Nyquist=" + std::to_string(nyquist) + ")");
  }
  const auto x = clip.samples();
  if (x.size() < 2) return clip;
  const std::size_t n = x.size();
  const std::size_t pad = std::min<std::size_t>(
      n - 1, static_cast<std::size_t>(std::ceil(4.0 * clip.sample_rate() / cutoff_hz)) + 16);

  std::vector<double> ext(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) {
    ext[i] = 2.0 * x[0] - x[pad - i];
    ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];
  }
  std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));

  const auto sections = butterworth4(kind, cutoff_hz, clip.sample_rate());
  for (const auto& s : sections) s.process(ext);
  std::reverse(ext.begin(), ext.end());
  for (const auto& s : sections) s.process(ext);
  std::reverse(ext.begin(), ext.end());

  return clip.with_samples(
      std::vector<double>(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                          ext.begin() + static_cast<std::ptrdiff_t>(pad + n)));
}

// Ten octave bands centered at 31.25 Hz * 2^k, k = 0..9.
inline constexpr std::size_t kEqBands = 10;

inline std::array<double, kEqBands> eq_band_centers() {
  std::array<double, kEqBands> c{};
  for (std::size_t k = 0; k < kEqBands; ++k) c[k] = 31.25 * std::ldexp(1.0, static_cast<int>(k));
  return c;
}

inline std::array<double, kEqBands> eq_band_gains(double max_gain_db, std::uint64_t seed) {
  const double g = std::abs(max_gain_db);
  Rng rng(seed);
  std::array<double, kEqBands> gains{};
  for (double& v : gains) v = rng.uniform(-g, g);
  return gains;
}

// Gain curve in dB: linear in log-frequency between band centers, held flat
// outside the outermost centers.
inline double eq_curve_db(const std::array<double, kEqBands>& gains, double hz) {
  const auto centers = eq_band_centers();
  if (hz <= centers.front()) return gains.front();
  if (hz >= centers.back()) return gains.back();
  const double octave = std::log2(hz / centers.front());
  const auto k = static_cast<std::size_t>(octave);
  const double frac = octave - static_cast<double>(k);
  return gains[k] + frac * (gains[k + 1] - gains[k]);
}

inline std::size_t eq_frame_length(int sample_rate) {
  return fft::next_pow2(static_cast<std::size_t>(std::ceil(0.1 * sample_rate)));
}

// Random multiband gain applied by STFT weighting (Hann, hop = frame/4). The
// signal is padded by one frame on both ends so every sample is fully
// overlapped and zero gain reconstructs the input.
inline AudioClip equalize(const AudioClip& clip, double max_gain_db, std::uint64_t seed) {
  const auto gains = eq_band_gains(max_gain_db, seed);
  const std::size_t frame = eq_frame_length(clip.sample_rate());
  const std::size_t hop = frame / 4;
  const std::size_t n = clip.size();

  std::vector<double> padded(n + 2 * frame + hop, 0.0);
  std::copy(clip.samples().begin(), clip.samples().end(),
            padded.begin() + static_cast<std::ptrdiff_t>(frame));
  auto spec = stft(padded, clip.sample_rate(), frame, hop);

  std::vector<double> weight(spec.bin_count());
  for (std::size_t k = 0; k < weight.size(); ++k) {
    const double hz = static_cast<double>(k) * clip.sample_rate() / static_cast<double>(frame);
    weight[k] = db_to_amplitude(eq_curve_db(gains, hz));
  }
  for (std::size_t f = 0; f < spec.frame_count(); ++f) {
    auto bins = spec.frame(f);
    for (std::size_t k = 0; k < bins.size(); ++k) bins[k] *= weight[k];
  }
  const auto y = istft(spec, padded.size());
  return clip.with_samples(std::vector<double>(y.begin() + static_cast<std::ptrdiff_t>(frame),
                                               y.begin() + static_cast<std::ptrdiff_t>(frame + n)));
}

}  // namespace rawbench

#endif  // RAWBENCH_ATTACKS_FILTERING_HPP_
