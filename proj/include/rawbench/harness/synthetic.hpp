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

#ifndef RAWBENCH_HARNESS_SYNTHETIC_HPP_
#define RAWBENCH_HARNESS_SYNTHETIC_HPP_

// Seeded synthetic corpus for the self-test: crude stand-ins for speech
// (voiced harmonic syllables), music (chord sequences with plucked
// envelopes) and environmental sound (modulated colored noise with events),
// plus noise clips and impulse responses for BN and RV.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"
#include "rawbench/audio_clip.hpp"
#include "rawbench/harness/manifest.hpp"
#include "rawbench/random.hpp"
#include "rawbench/signal.hpp"
#include "rawbench/wav.hpp"

namespace rawbench::synthetic {

inline constexpr int kRate = 16000;
inline constexpr double kSeconds = 3.0;
inline constexpr double kTargetRmsDb = -20.0;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace detail {

inline constexpr double kNoiseFloorDb = -50.0;  // relative to the clip RMS

// Scales to the target RMS (peak kept under 0.9) over a faint white floor,
// as any real recording has.
inline std::vector<double> normalized(std::vector<double> x, Rng& rng,
                                      double rms_db = kTargetRmsDb) {
  double e = 0.0;
  for (double v : x) e += v * v;
  const double rms = std::sqrt(e / static_cast<double>(x.size()));
  double scale = rms > 0.0 ? db_to_amplitude(rms_db) / rms : 0.0;
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v) * scale);
  if (peak > 0.9) scale *= 0.9 / peak;
  const double floor = db_to_amplitude(rms_db + kNoiseFloorDb);
  for (double& v : x) v = v * scale + floor * rng.gaussian();
  return x;
}

// One-pole lowpass; coefficient from a cutoff in Hz.
inline void smooth(std::vector<double>& x, double cutoff_hz) {
  const double a = std::exp(-kTwoPi * cutoff_hz / kRate);
  double s = 0.0;
  for (double& v : x) v = s = (1.0 - a) * v + a * s;
}

}  // namespace detail

inline std::vector<double> speech_like(std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(kSeconds * kRate);
  std::vector<double> x(n, 0.0);
  const double f0_base = rng.uniform(95.0, 230.0);
  const double syllable_rate = rng.uniform(3.0, 5.5);
  const double formants[3] = {rng.uniform(300, 800), rng.uniform(900, 2200), rng.uniform(2400, 3200)};
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kRate;
    const double f0 = f0_base * (1.0 + 0.08 * std::sin(kTwoPi * 0.7 * t));
    phase += kTwoPi * f0 / kRate;
    const double env = 0.15 + 0.85 * std::pow(std::sin(std::numbers::pi * syllable_rate * t), 2.0);
    double v = 0.0;
    for (int h = 1; f0 * h < 7000.0; ++h) {
      double gain = 0.0;
      for (double f : formants) gain += 1.0 / (1.0 + std::pow((f0 * h - f) / 150.0, 2.0));
      v += (0.2 + gain) / h * std::sin(h * phase);
    }
    x[i] = env * v + 0.02 * rng.gaussian();
  }
  return detail::normalized(std::move(x), rng);
}

inline std::vector<double> music_like(std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(kSeconds * kRate);
  std::vector<double> x(n, 0.0);
  const double note_seconds = rng.uniform(0.25, 0.6);
  const auto note_len = static_cast<std::size_t>(note_seconds * kRate);
  const int root = static_cast<int>(rng.below(24)) + 45;  // MIDI A2..G#4
  static constexpr int kChords[4][3] = {{0, 4, 7}, {5, 9, 12}, {7, 11, 14}, {-3, 0, 4}};
  for (std::size_t start = 0, k = 0; start < n; start += note_len, ++k) {
    const auto& chord = kChords[rng.below(4)];
    const double decay = rng.uniform(2.0, 6.0);
    for (int semitone : chord) {
      const double f = 440.0 * std::pow(2.0, (root + semitone - 69) / 12.0);
      const double detune = rng.uniform(-0.002, 0.002);
      for (std::size_t i = start; i < n && i < start + 2 * note_len; ++i) {
        const double t = static_cast<double>(i - start) / kRate;
        const double env = std::exp(-decay * t) * std::min(1.0, t * 200.0);
        double v = 0.0;
        for (int h = 1; h <= 16 && f * h < 7500.0; ++h) {
          v += std::sin(kTwoPi * f * (1.0 + detune) * h * t) / h;
        }
        x[i] += env * v;
      }
    }
  }
  return detail::normalized(std::move(x), rng);
}

inline std::vector<double> environmental_like(std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(kSeconds * kRate);
  std::vector<double> bed(n);
  for (double& v : bed) v = rng.gaussian();
  detail::smooth(bed, rng.uniform(400.0, 3000.0));
  std::vector<double> wobble(n);
  for (double& v : wobble) v = rng.gaussian();
  detail::smooth(wobble, 2.0);
  const double wobble_peak = std::max(1e-9, *std::max_element(wobble.begin(), wobble.end(),
                                             [](double a, double b) { return std::abs(a) < std::abs(b); }));
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = bed[i] * (0.6 + 0.4 * wobble[i] / std::abs(wobble_peak));
  // A few short events: chirps or damped knocks.
  const int events = 2 + static_cast<int>(rng.below(5));
  for (int e = 0; e < events; ++e) {
    const auto at = static_cast<std::size_t>(rng.uniform(0.0, kSeconds - 0.3) * kRate);
    const double f = rng.uniform(500.0, 4000.0);
    const bool chirp = rng.coin();
    for (std::size_t i = 0; i < static_cast<std::size_t>(0.25 * kRate) && at + i < n; ++i) {
      const double t = static_cast<double>(i) / kRate;
      const double freq = chirp ? f * (1.0 + 2.0 * t) : f;
      x[at + i] += 3.0 * std::exp(-18.0 * t) * std::sin(kTwoPi * freq * t);
    }
  }
  return detail::normalized(std::move(x), rng);
}

inline std::vector<double> noise_clip(std::uint64_t seed, double seconds) {
  Rng rng(seed);
  std::vector<double> x(static_cast<std::size_t>(seconds * kRate));
  for (double& v : x) v = rng.gaussian();
  detail::smooth(x, 1500.0);  // brownish tilt, like room or street noise
  return detail::normalized(std::move(x), rng);
}

// Exponentially decaying noise tail with a unit direct path.
inline std::vector<double> impulse_response(std::uint64_t seed, double rt60_seconds) {
  Rng rng(seed);
  std::vector<double> h(static_cast<std::size_t>(rt60_seconds * kRate));
  const double tau = rt60_seconds / std::log(1000.0);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double t = static_cast<double>(i) / kRate;
    h[i] = 0.3 * rng.gaussian() * std::exp(-t / tau);
  }
  h[0] = 1.0;
  return h;
}

// Writes `clips` clips, cycling through the domains, plus resources and a
// manifest.json into `dir`. Returns the manifest path.
inline std::filesystem::path write_corpus(const std::filesystem::path& dir, std::size_t clips,
                                          std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < clips; ++i) {
    const Domain domain = kAllDomains[i % kAllDomains.size()];
    const std::uint64_t s = mix_seed(seed, i);
    std::vector<double> x = domain == Domain::kSpeech  ? speech_like(s)
                            : domain == Domain::kMusic ? music_like(s)
                                                       : environmental_like(s);
    char name[64];
    std::snprintf(name, sizeof name, "%s_%02zu.wav", std::string(domain_name(domain)).c_str(), i);
    save_wav(AudioClip(std::move(x), kRate), dir / name, WavDepth::kPcm16);
    entries.push_back({{"path", name}, {"domain", domain_name(domain)}, {"collection", "synthetic"}});
  }
  nlohmann::json noise = nlohmann::json::array();
  nlohmann::json irs = nlohmann::json::array();
  for (int k = 0; k < 2; ++k) {
    const std::string nname = "noise_" + std::to_string(k) + ".wav";
    save_wav(AudioClip(noise_clip(mix_seed(seed, "noise" + std::to_string(k)), 4.0), kRate),
             dir / nname, WavDepth::kPcm16);
    noise.push_back(nname);
    const std::string iname = "ir_" + std::to_string(k) + ".wav";
    save_wav(AudioClip(impulse_response(mix_seed(seed, "ir" + std::to_string(k)), 0.3 + 0.3 * k), kRate),
             dir / iname, WavDepth::kFloat32);
    irs.push_back(iname);
  }
  const auto path = dir / "manifest.json";
  std::ofstream out(path);
  out << nlohmann::json{{"entries", entries},
                        {"resources", {{"noise", noise}, {"impulse_responses", irs}}}}
             .dump(2)
      << '\n';
  if (!out) throw IoError("cannot write " + path.string());
  return path;
}

}  // namespace rawbench::synthetic

#endif  // RAWBENCH_HARNESS_SYNTHETIC_HPP_
