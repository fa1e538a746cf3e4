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

#ifndef RAWBENCH_ATTACKS_DYNAMICS_HPP_
#define RAWBENCH_ATTACKS_DYNAMICS_HPP_

// Feed-forward dynamics processors sharing one detector and gain smoother.
//
// Detector: RMS over a 10 ms causal window, reported in dBFS calibrated so a
// full-scale sine reads 0 dB (RMS + 3.01 dB). Gain computer (no knee):
//   compressor 4:1 above threshold, expander 1:2 below threshold,
//   limiter inf:1 above threshold.
// The gain in dB is smoothed by a one-pole filter, 5 ms while gain falls and
// 50 ms while it recovers. No make-up gain.

#include <algorithm>
#include <cmath>
#include <vector>

#include "rawbench/audio_clip.hpp"
#include "rawbench/signal.hpp"

namespace rawbench {

enum class DynamicsKind { kCompress, kExpand, kLimit };

struct DynamicsTiming {
  double attack_ms = 5.0;
  double release_ms = 50.0;
  double rms_window_ms = 10.0;
};

inline constexpr double kCompressorRatio = 4.0;
inline constexpr double kExpanderRatio = 2.0;  // 1:2 downward expansion
inline constexpr double kMinGainDb = -120.0;

inline double dynamics_static_gain_db(DynamicsKind kind, double level_db, double threshold_db) {
  switch (kind) {
    case DynamicsKind::kCompress:
      return level_db > threshold_db ? -(level_db - threshold_db) * (1.0 - 1.0 / kCompressorRatio)
                                     : 0.0;
    case DynamicsKind::kExpand:
      return level_db < threshold_db
                 ? std::max(kMinGainDb, (level_db - threshold_db) * (kExpanderRatio - 1.0))
                 : 0.0;
    case DynamicsKind::kLimit:
      return level_db > threshold_db ? -(level_db - threshold_db) : 0.0;
  }
  return 0.0;
}

inline AudioClip apply_dynamics(const AudioClip& clip, DynamicsKind kind, double threshold_db,
                                const DynamicsTiming& timing = {}) {
  const double fs = clip.sample_rate();
  const auto window = static_cast<std::size_t>(
      std::max(1.0, std::round(timing.rms_window_ms * 1e-3 * fs)));
  const double attack = std::exp(-1.0 / (timing.attack_ms * 1e-3 * fs));
  const double release = std::exp(-1.0 / (timing.release_ms * 1e-3 * fs));

  const auto x = clip.samples();
  std::vector<double> out(x.size());
  double sum_sq = 0.0;
  double gain_db = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum_sq += x[i] * x[i];
    if (i >= window) sum_sq -= x[i - window] * x[i - window];
    sum_sq = std::max(sum_sq, 0.0);
    const double count = static_cast<double>(std::min(i + 1, window));
    const double level_db = 10.0 * std::log10(std::max(2.0 * sum_sq / count, 1e-30));
    const double target = dynamics_static_gain_db(kind, level_db, threshold_db);
    const double coeff = target < gain_db ? attack : release;
    gain_db = coeff * gain_db + (1.0 - coeff) * target;
    out[i] = x[i] * db_to_amplitude(gain_db);
  }
  return clip.with_samples(std::move(out));
}

}  // namespace rawbench

#endif  // RAWBENCH_ATTACKS_DYNAMICS_HPP_
