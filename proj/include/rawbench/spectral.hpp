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

#ifndef RAWBENCH_SPECTRAL_HPP_
#define RAWBENCH_SPECTRAL_HPP_

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "rawbench/audio_clip.hpp"
#include "rawbench/error.hpp"
#include "rawbench/fft.hpp"

namespace rawbench {

using Complex = std::complex<double>;

// Periodic Hann window (sums to a constant at hop = n/2 and n/4).
inline std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

inline bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// Frames start at 0, hop, 2*hop, ... and stop at the last frame that fits
// entirely inside the signal.
class Spectrogram {
 public:
  Spectrogram(std::size_t frame_length, std::size_t hop, int sample_rate, std::size_t n_frames)
      : frame_length_(frame_length),
        hop_(hop),
        sample_rate_(sample_rate),
        n_frames_(n_frames),
        data_(n_frames * (frame_length / 2 + 1)) {}

  std::size_t frame_length() const { return frame_length_; }
  std::size_t hop() const { return hop_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t frame_count() const { return n_frames_; }
  std::size_t bin_count() const { return frame_length_ / 2 + 1; }

  std::span<Complex> frame(std::size_t i) {
    return {data_.data() + i * bin_count(), bin_count()};
  }
  std::span<const Complex> frame(std::size_t i) const {
    return {data_.data() + i * bin_count(), bin_count()};
  }

 private:
  std::size_t frame_length_;
  std::size_t hop_;
  int sample_rate_;
  std::size_t n_frames_;
  std::vector<Complex> data_;
};

inline Spectrogram stft(std::span<const double> x, int sample_rate, std::size_t frame_length,
                        std::size_t hop) {
  if (!is_pow2(frame_length)) throw InvalidArgument("stft: frame length must be a power of two");
  if (hop == 0 || hop > frame_length) throw InvalidArgument("stft: need 0 < hop <= frame length");
  if (x.size() < frame_length) {
    throw InvalidArgument("stft: clip shorter than one frame (" + std::to_string(x.size()) +
                          " < " + std::to_string(frame_length) + ")");
  }
  const std::size_t n_frames = 1 + (x.size() - frame_length) / hop;
  const auto window = hann_window(frame_length);
  Spectrogram spec(frame_length, hop, sample_rate, n_frames);
  std::vector<double> buffer(frame_length);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const double* src = x.data() + f * hop;
    for (std::size_t i = 0; i < frame_length; ++i) buffer[i] = src[i] * window[i];
    const auto bins = fft::forward_real(buffer);
    std::copy(bins.begin(), bins.end(), spec.frame(f).begin());
  }
  return spec;
}

inline Spectrogram stft(const AudioClip& clip, std::size_t frame_length, std::size_t hop) {
  return stft(clip.samples(), clip.sample_rate(), frame_length, hop);
}

// Weighted overlap-add with a Hann synthesis window, normalized by the summed
// squared window. Exact inverse of stft() wherever frames overlap; samples
// covered by no frame come back as zero. `length` 0 means the natural length.
inline std::vector<double> istft(const Spectrogram& spec, std::size_t length = 0) {
  const std::size_t n = spec.frame_length();
  const std::size_t natural = spec.frame_count() == 0 ? 0 : (spec.frame_count() - 1) * spec.hop() + n;
  if (length == 0) length = natural;
  const auto window = hann_window(n);
  std::vector<double> out(std::max(length, natural), 0.0);
  std::vector<double> norm(out.size(), 0.0);
  for (std::size_t f = 0; f < spec.frame_count(); ++f) {
    const auto frame = fft::inverse_real(spec.frame(f), n);
    const std::size_t start = f * spec.hop();
    for (std::size_t i = 0; i < n; ++i) {
      out[start + i] += frame[i] * window[i];
      norm[start + i] += window[i] * window[i];
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (norm[i] > 1e-10) out[i] /= norm[i];
  }
  out.resize(length, 0.0);
  return out;
}

inline double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

struct MelFilterbank {
  std::size_t n_mels = 0;
  std::size_t n_bins = 0;
  std::vector<double> weights;    // row-major n_mels x n_bins
  std::vector<double> center_hz;  // one per filter, increasing

  std::span<const double> row(std::size_t m) const {
    return {weights.data() + m * n_bins, n_bins};
  }
};

// Triangular filters spaced uniformly on the mel scale (HTK formula). The
// triangle edges are evaluated at exact bin frequencies, not snapped to bins.
inline MelFilterbank mel_filterbank(std::size_t fft_size, std::size_t n_mels, int sample_rate,
                                    double f_min, double f_max) {
  if (n_mels == 0) throw InvalidArgument("mel_filterbank: n_mels must be positive");
  if (!(f_min >= 0.0 && f_min < f_max && f_max <= sample_rate / 2.0)) {
    throw InvalidArgument("mel_filterbank: invalid band edges");
  }
  MelFilterbank bank;
  bank.n_mels = n_mels;
  bank.n_bins = fft_size / 2 + 1;
  bank.weights.assign(n_mels * bank.n_bins, 0.0);

  const double mel_lo = hz_to_mel(f_min);
  const double mel_hi = hz_to_mel(f_max);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                      static_cast<double>(n_mels + 1));
  }
  edges.front() = f_min;
  edges.back() = f_max;
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
    bank.center_hz.push_back(center);
    double sum = 0.0;
    for (std::size_t k = 0; k < bank.n_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / static_cast<double>(fft_size);
      double w = 0.0;
      if (f >= lo && f <= center && center > lo) {
        w = (f - lo) / (center - lo);
      } else if (f > center && f <= hi && hi > center) {
        w = (hi - f) / (hi - center);
      }
      bank.weights[m * bank.n_bins + k] = w;
      sum += w;
    }
    if (!(sum > 0.0)) {
      throw InvalidArgument("mel_filterbank: filter " + std::to_string(m) +
                            " covers no FFT bin; use a larger FFT or fewer mels");
    }
  }
  return bank;
}

// Orthonormal DCT-II coefficients [first, first + count) of `x`.
inline std::vector<double> dct2(std::span<const double> x, std::size_t first, std::size_t count) {
  const double n = static_cast<double>(x.size());
  std::vector<double> out(count, 0.0);
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t k = first + j;
    double acc = 0.0;
    for (std::size_t m = 0; m < x.size(); ++m) {
      acc += x[m] * std::cos(std::numbers::pi * static_cast<double>(k) *
                             (static_cast<double>(m) + 0.5) / n);
    }
    out[j] = acc * std::sqrt((k == 0 ? 1.0 : 2.0) / n);
  }
  return out;
}

}  // namespace rawbench

#endif  // RAWBENCH_SPECTRAL_HPP_
