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

#ifndef RAWBENCH_AUDIO_CLIP_HPP_
#define RAWBENCH_AUDIO_CLIP_HPP_

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rawbench/error.hpp"

namespace rawbench {

// Mono sample buffer with its sample rate. Nominal full scale is +-1.0;
// values beyond that are legal until an integer WAV file is written.
class AudioClip {
 public:
  AudioClip() = default;

  AudioClip(std::vector<double> samples, int sample_rate,
            std::optional<int> source_bit_depth = std::nullopt)
      : samples_(std::move(samples)),
        sample_rate_(sample_rate),
        source_bit_depth_(source_bit_depth) {
    if (sample_rate_ <= 0) {
      throw InvalidArgument("sample rate must be positive, got " +
                            std::to_string(sample_rate_));
    }
    for (double v : samples_) {
      if (!std::isfinite(v)) {
        throw InvalidArgument("audio samples must be finite");
      }
    }
  }

  std::span<const double> samples() const { return samples_; }
  const std::vector<double>& vector() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::optional<int> source_bit_depth() const { return source_bit_depth_; }

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double duration_seconds() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }
  double operator[](std::size_t i) const { return samples_[i]; }

  // Same rate and provenance, new samples.
  AudioClip with_samples(std::vector<double> samples) const {
    return AudioClip(std::move(samples), sample_rate_, source_bit_depth_);
  }

  friend bool operator==(const AudioClip&, const AudioClip&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_ = 1;
  std::optional<int> source_bit_depth_;
};

}  // namespace rawbench

#endif  // RAWBENCH_AUDIO_CLIP_HPP_
