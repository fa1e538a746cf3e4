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

#ifndef RAWBENCH_SIGNAL_HPP_
#define RAWBENCH_SIGNAL_HPP_

// Level and power helpers shared by attacks and metrics.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>

#include "rawbench/audio_clip.hpp"
#include "rawbench/error.hpp"

namespace rawbench {

inline constexpr double kSnrClampDb = 100.0;

inline double energy(std::span<const double> x) {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
}

inline double mean_power(std::span<const double> x) {
  return x.empty() ? 0.0 : energy(x) / static_cast<double>(x.size());
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double peak_abs(std::span<const double> x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  return peak;
}

inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double power_to_db(double power) { return 10.0 * std::log10(power); }
inline double amplitude_to_db(double amplitude) {
  return 20.0 * std::log10(amplitude);
}

inline void require_same_shape(const AudioClip& a, const AudioClip& b,
                               const char* what) {
  if (a.size() != b.size()) {
    throw InvalidArgument(std::string(what) + ": length mismatch (" +
                          std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  }
  if (a.sample_rate() != b.sample_rate()) {
    throw InvalidArgument(std::string(what) + ": sample rate mismatch");
  }
}

// 10*log10(P_ref / P_(degraded - ref)), clamped to +-100 dB.
inline double measure_snr(const AudioClip& reference, const AudioClip& degraded) {
  require_same_shape(reference, degraded, "measure_snr");
  double signal = 0.0;
  double residual = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double r = reference[i];
    const double d = degraded[i] - r;
    signal += r * r;
    residual += d * d;
  }
  if (residual == 0.0) return kSnrClampDb;
  if (signal == 0.0) return -kSnrClampDb;
  return std::clamp(power_to_db(signal / residual), -kSnrClampDb, kSnrClampDb);
}

}  // namespace rawbench

#endif  // RAWBENCH_SIGNAL_HPP_
