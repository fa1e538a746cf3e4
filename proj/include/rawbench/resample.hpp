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

#ifndef RAWBENCH_RESAMPLE_HPP_
#define RAWBENCH_RESAMPLE_HPP_

// Band-limited resampling with a Kaiser-windowed sinc (beta 9, 32 zero
// crossings per side, so at least 64 taps; the kernel widens by the
// decimation factor when downsampling). The kernel is tabulated at 512
// points per zero crossing and linearly interpolated; interpolation error is
// below -100 dB. The passband edge sits at 94% of the lower Nyquist
// frequency. Codec and model adapters should assume exactly this filter.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "rawbench/audio_clip.hpp"
#include "rawbench/error.hpp"

namespace rawbench {

class SincKernel {
 public:
  static constexpr int kZeroCrossings = 32;
  static constexpr int kOversample = 512;
  static constexpr double kBeta = 9.0;

  static const SincKernel& instance() {
    static const SincKernel kernel;
    return kernel;
  }

  // Kernel value at `x` zero crossings from the center.
  double operator()(double x) const {
    x = std::abs(x);
    if (x >= kZeroCrossings) return 0.0;
    const double scaled = x * kOversample;
    const auto i = static_cast<std::size_t>(scaled);
    const double frac = scaled - static_cast<double>(i);
    return table_[i] + frac * (table_[i + 1] - table_[i]);
  }

 private:
  SincKernel() : table_(static_cast<std::size_t>(kZeroCrossings * kOversample) + 2, 0.0) {
    const double norm = std::cyl_bessel_i(0.0, kBeta);
    for (std::size_t i = 0; i + 1 < table_.size(); ++i) {
      const double x = static_cast<double>(i) / kOversample;
      if (x >= kZeroCrossings) break;
      const double sinc =
          i == 0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
      const double r = x / kZeroCrossings;
      const double window = std::cyl_bessel_i(0.0, kBeta * std::sqrt(1.0 - r * r)) / norm;
      table_[i] = sinc * window;
    }
  }

  std::vector<double> table_;
};

inline constexpr double kResampleRolloff = 0.94;

// Band-limited value of `x` at fractional index `pos` with a low-pass at
// `cutoff` times the Nyquist frequency (cutoff in (0, 1]). Samples outside
// the buffer are zero.
inline double interpolate_at(std::span<const double> x, double pos, double cutoff) {
  const SincKernel& kernel = SincKernel::instance();
  const double reach = SincKernel::kZeroCrossings / cutoff;
  const long first = std::max(0L, static_cast<long>(std::ceil(pos - reach)));
  const long last = std::min(static_cast<long>(x.size()) - 1,
                             static_cast<long>(std::floor(pos + reach)));
  double acc = 0.0;
  for (long n = first; n <= last; ++n) {
    acc += x[static_cast<std::size_t>(n)] * kernel((pos - static_cast<double>(n)) * cutoff);
  }
  return acc * cutoff;
}

inline std::size_t resampled_length(std::size_t length, int source_rate, int target_rate) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(length) * target_rate /
                                               source_rate));
}

namespace detail {

// Kernel taps for every fractional phase of a rational ratio. Output sample
// n sits at input position n * M / L; its phase is (n * M) mod L.
struct PolyphaseTable {
  long reach_lo = 0;  // offset of the first tap relative to floor(pos)
  std::size_t taps = 0;
  std::vector<double> weights;  // L rows of `taps`
};

inline PolyphaseTable make_polyphase(std::uint64_t phases, double cutoff) {
  const SincKernel& kernel = SincKernel::instance();
  const double reach = SincKernel::kZeroCrossings / cutoff;
  PolyphaseTable t;
  t.reach_lo = static_cast<long>(std::ceil(-reach));
  const long hi = static_cast<long>(std::floor(1.0 + reach));
  t.taps = static_cast<std::size_t>(hi - t.reach_lo + 1);
  t.weights.assign(phases * t.taps, 0.0);
  for (std::uint64_t p = 0; p < phases; ++p) {
    const double frac = static_cast<double>(p) / static_cast<double>(phases);
    for (std::size_t k = 0; k < t.taps; ++k) {
      const double d = frac - static_cast<double>(t.reach_lo + static_cast<long>(k));
      t.weights[p * t.taps + k] = std::abs(d) <= reach ? kernel(d * cutoff) * cutoff : 0.0;
    }
  }
  return t;
}

}  // namespace detail

// Windowed-sinc resampler: Kaiser (beta 9) window over 32 zero crossings,
// cutoff at 0.94 of the lower Nyquist frequency. Rational ratios with a
// manageable number of phases use a precomputed polyphase table.
inline std::vector<double> resample_samples(std::span<const double> x, int source_rate,
                                            int target_rate) {
  if (source_rate <= 0 || target_rate <= 0) {
    throw InvalidArgument("resample: rates must be positive");
  }
  if (source_rate == target_rate) return {x.begin(), x.end()};
  const std::size_t out_len = resampled_length(x.size(), source_rate, target_rate);
  const double cutoff =
      std::min(1.0, static_cast<double>(target_rate) / source_rate) * kResampleRolloff;
  const auto g = static_cast<std::uint64_t>(std::gcd(source_rate, target_rate));
  const std::uint64_t m = static_cast<std::uint64_t>(source_rate) / g;
  const std::uint64_t l = static_cast<std::uint64_t>(target_rate) / g;
  std::vector<double> y(out_len);

  if (l > 8192) {
    for (std::size_t n = 0; n < out_len; ++n) {
      const double pos = static_cast<double>(n * m) / static_cast<double>(l);
      y[n] = interpolate_at(x, pos, cutoff);
    }
    return y;
  }

  const auto table = detail::make_polyphase(l, cutoff);
  const long len = static_cast<long>(x.size());
  for (std::size_t n = 0; n < out_len; ++n) {
    const std::uint64_t num = n * m;
    const long base = static_cast<long>(num / l);
    const double* w = table.weights.data() + (num % l) * table.taps;
    long first = base + table.reach_lo;
    std::size_t k0 = 0;
    if (first < 0) {
      k0 = static_cast<std::size_t>(-first);
      first = 0;
    }
    const long last = std::min(len - 1, base + table.reach_lo + static_cast<long>(table.taps) - 1);
    double acc = 0.0;
    const double* src = x.data() + first;
    for (long i = first, k = static_cast<long>(k0); i <= last; ++i, ++k) {
      acc += *src++ * w[k];
    }
    y[n] = acc;
  }
  return y;
}

inline AudioClip resample(const AudioClip& clip, int target_rate) {
  if (target_rate <= 0) throw InvalidArgument("resample: target rate must be positive");
  if (target_rate == clip.sample_rate()) return clip;
  return AudioClip(resample_samples(clip.samples(), clip.sample_rate(), target_rate),
                   target_rate, clip.source_bit_depth());
}

// Reads `x` at arbitrary increasing positions (time warping). Rates stay
// close to 1 for callers of this function, so no extra anti-alias margin is
// applied and integer positions reproduce the input exactly.
inline std::vector<double> warp_samples(std::span<const double> x,
                                        std::span<const double> positions) {
  std::vector<double> y(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double pos = positions[i];
    const double rounded = std::round(pos);
    if (pos == rounded && rounded >= 0 && rounded < static_cast<double>(x.size())) {
      y[i] = x[static_cast<std::size_t>(rounded)];
    } else {
      y[i] = interpolate_at(x, pos, 1.0);
    }
  }
  return y;
}

}  // namespace rawbench

#endif  // RAWBENCH_RESAMPLE_HPP_
