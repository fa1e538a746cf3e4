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

#ifndef RAWBENCH_ATTACKS_MIXING_HPP_
#define RAWBENCH_ATTACKS_MIXING_HPP_

// Additive noise and convolution reverb. The added component is always scaled
// to hit the requested power ratio exactly; the carrier is never touched.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "rawbench/audio_clip.hpp"
#include "rawbench/error.hpp"
#include "rawbench/fft.hpp"
#include "rawbench/random.hpp"
#include "rawbench/resample.hpp"
#include "rawbench/signal.hpp"

namespace rawbench {

namespace detail {

inline AudioClip mix_at_snr(const AudioClip& clip, std::vector<double> noise, double snr_db) {
  const double signal_energy = energy(clip.samples());
  const double noise_energy = energy(noise);
  if (noise_energy == 0.0) throw AttackError("noise source has zero power");
  const double gain = std::sqrt(signal_energy / (noise_energy * db_to_power(snr_db)));
  std::vector<double> out(clip.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = clip[i] + gain * noise[i];
  return clip.with_samples(std::move(out));
}

inline void require_carrier_power(const AudioClip& clip) {
  if (clip.empty() || energy(clip.samples()) == 0.0) {
    throw AttackError("zero-power carrier: SNR is undefined");
  }
}

}  // namespace detail

inline AudioClip add_gaussian_noise(const AudioClip& clip, double snr_db, std::uint64_t seed) {
  detail::require_carrier_power(clip);
  Rng rng(seed);
  std::vector<double> noise(clip.size());
  for (double& v : noise) v = rng.gaussian();
  return detail::mix_at_snr(clip, std::move(noise), snr_db);
}

// Corpus noise is resampled to the carrier rate; shorter noise is looped from
// its start, longer noise is cropped at a seeded offset.
inline AudioClip add_background_noise(const AudioClip& clip, const AudioClip& noise_clip,
                                      double snr_db, std::uint64_t seed) {
  detail::require_carrier_power(clip);
  if (noise_clip.empty()) throw AttackError("background noise clip is empty");
  const AudioClip source = resample(noise_clip, clip.sample_rate());
  const auto src = source.samples();
  std::vector<double> noise(clip.size());
  if (src.size() <= clip.size()) {
    for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = src[i % src.size()];
  } else {
    Rng rng(seed);
    const std::size_t offset = rng.below(src.size() - clip.size() + 1);
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(offset), clip.size(), noise.begin());
  }
  return detail::mix_at_snr(clip, std::move(noise), snr_db);
}

// Gaussian when `corpus` is empty, background noise otherwise.
inline AudioClip add_noise(const AudioClip& clip, const std::optional<AudioClip>& corpus,
                           double snr_db, std::uint64_t seed) {
  return corpus ? add_background_noise(clip, *corpus, snr_db, seed)
                : add_gaussian_noise(clip, snr_db, seed);
}

// dry + wet, where wet = clip * IR truncated to the clip length and scaled so
// that P_dry / P_wet equals `dry_wet_db`.
inline AudioClip convolve_reverb(const AudioClip& clip, const AudioClip& impulse_response,
                                 double dry_wet_db) {
  if (impulse_response.empty()) throw AttackError("reverb: empty impulse response");
  detail::require_carrier_power(clip);
  const AudioClip ir = resample(impulse_response, clip.sample_rate());
  auto wet = fft::convolve(clip.samples(), ir.samples(), clip.size());
  if (energy(wet) == 0.0) throw AttackError("reverb: impulse response produced silence");
  return detail::mix_at_snr(clip, std::move(wet), dry_wet_db);
}

}  // namespace rawbench

#endif  // RAWBENCH_ATTACKS_MIXING_HPP_
