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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "rawbench/attacks/apply.hpp"
#include "rawbench/metrics.hpp"
#include "rawbench/signal.hpp"
#include "test_util.hpp"

namespace rawbench {
namespace {

using testing::max_abs_diff;
using testing::rich_tone;
using testing::sine;
using testing::white_noise;

// Amplitude of the component at `hz`, by direct correlation over the middle
// half of the clip (keeps filter edge effects out).
double tone_amplitude(const AudioClip& clip, double hz) {
  const std::size_t begin = clip.size() / 4, end = 3 * clip.size() / 4;
  std::complex<double> acc = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double t = static_cast<double>(i) / clip.sample_rate();
    acc += clip[i] * std::polar(1.0, -2.0 * std::numbers::pi * hz * t);
  }
  return 2.0 * std::abs(acc) / static_cast<double>(end - begin);
}

double peak_dbfs(const AudioClip& clip, std::size_t from) {
  double peak = 0.0;
  for (std::size_t i = from; i < clip.size(); ++i) peak = std::max(peak, std::abs(clip[i]));
  return 20.0 * std::log10(peak);
}

TEST(NoiseTest, GaussianHitsRequestedSnr) {
  const AudioClip clip = rich_tone(2.0, 16000, 1);
  for (auto regime : {AttackRegime::loose(), AttackRegime::strict()}) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto spec = AttackSpec::make(AttackId::GN, regime, s);
      const AudioClip out = apply_attack(clip, spec);
      EXPECT_NEAR(measure_snr(clip, out), *spec.parameter, 0.1);
    }
  }
}

TEST(NoiseTest, SineAt20dB) {
  const AudioClip clip = sine(1000.0, 1.0, 16000);
  EXPECT_NEAR(measure_snr(clip, add_gaussian_noise(clip, 20.0, 4)), 20.0, 0.1);
}

TEST(NoiseTest, SixtyDbIsNearSixtyDbSiSnr) {
  const AudioClip clip = rich_tone(2.0, 16000, 2);
  EXPECT_NEAR(si_snr(clip, add_gaussian_noise(clip, 60.0, 5)), 60.0, 0.2);
}

TEST(NoiseTest, BackgroundNoiseLoopsAndCrops) {
  const AudioClip clip = rich_tone(1.0, 16000, 3);
  const AudioClip short_noise = white_noise(0.3, 16000, 0.1, 6);
  const AudioClip long_noise = white_noise(3.0, 16000, 0.1, 7);
  for (double snr : {20.0, 35.0, 60.0}) {
    EXPECT_NEAR(measure_snr(clip, add_background_noise(clip, short_noise, snr, 1)), snr, 0.1);
    EXPECT_NEAR(measure_snr(clip, add_background_noise(clip, long_noise, snr, 1)), snr, 0.1);
  }
  // Looping: the added noise repeats with the corpus period.
  const AudioClip out = add_background_noise(clip, short_noise, 30.0, 1);
  const std::size_t period = short_noise.size();
  EXPECT_NEAR((out[period + 10] - clip[period + 10]) / (out[10] - clip[10]), 1.0, 1e-9);
  // Cropping offset depends on the seed.
  EXPECT_NE(add_background_noise(clip, long_noise, 30.0, 1).vector(),
            add_background_noise(clip, long_noise, 30.0, 2).vector());
}

TEST(NoiseTest, ZeroCarrier) {
  const AudioClip silent(std::vector<double>(1000, 0.0), 16000);
  try {
    add_gaussian_noise(silent, 30.0, 1);
    FAIL();
  } catch (const AttackError& e) {
    EXPECT_NE(std::string(e.what()).find("zero-power carrier"), std::string::npos);
  }
}

TEST(ReverbTest, DryWetRatio) {
  const AudioClip clip = rich_tone(2.0, 16000, 4);
  // Decaying noise IR.
  std::vector<double> ir(4000);
  Rng rng(8);
  for (std::size_t i = 0; i < ir.size(); ++i) ir[i] = rng.gaussian() * std::exp(-static_cast<double>(i) / 800.0);
  const AudioClip impulse(ir, 16000);
  for (double snr : {0.0, 6.0, 12.0, 3.3}) {
    const AudioClip out = convolve_reverb(clip, impulse, snr);
    std::vector<double> wet(out.size());
    for (std::size_t i = 0; i < wet.size(); ++i) wet[i] = out[i] - clip[i];
    EXPECT_NEAR(10.0 * std::log10(energy(clip.samples()) / energy(wet)), snr, 0.1) << snr;
  }
}

TEST(ReverbTest, UnitImpulseDoublesAtZeroDb) {
  const AudioClip clip = rich_tone(0.5, 16000, 5);
  const AudioClip out = convolve_reverb(clip, AudioClip({1.0}, 16000), 0.0);
  for (std::size_t i = 0; i < clip.size(); ++i) ASSERT_NEAR(out[i], 2.0 * clip[i], 1e-9);
  EXPECT_DOUBLE_EQ(si_snr(clip, out), 100.0);
  EXPECT_THROW(convolve_reverb(clip, AudioClip(std::vector<double>{}, 16000), 0.0), AttackError);
}

TEST(DynamicsTest, CompressorLeavesQuietSignalAlone) {
  const AudioClip clip = sine(440.0, 1.0, 16000, std::pow(10.0, -40.0 / 20.0));
  const AudioClip out = apply_dynamics(clip, DynamicsKind::kCompress, -18.0);
  EXPECT_LT(max_abs_diff(out.samples(), clip.samples()), 1e-12);
}

TEST(DynamicsTest, CompressorReducesByRatio) {
  // -6 dBFS into a -18 dB threshold at 4:1: 12 dB over becomes 3 dB over.
  const AudioClip clip = sine(440.0, 2.0, 16000, std::pow(10.0, -6.0 / 20.0));
  const AudioClip out = apply_dynamics(clip, DynamicsKind::kCompress, -18.0);
  EXPECT_NEAR(peak_dbfs(out, out.size() / 2), -15.0, 0.5);
}

TEST(DynamicsTest, LimiterHoldsThreshold) {
  const AudioClip clip = sine(440.0, 2.0, 16000, 1.0);
  const AudioClip out = apply_dynamics(clip, DynamicsKind::kLimit, -6.0);
  EXPECT_LE(peak_dbfs(out, out.size() / 2), -6.0 + 0.5);
  EXPECT_GE(peak_dbfs(out, out.size() / 2), -6.0 - 0.5);
}

TEST(DynamicsTest, ExpanderDoublesDistanceBelowThreshold) {
  const AudioClip clip = sine(440.0, 2.0, 16000, std::pow(10.0, -20.0 / 20.0));
  const AudioClip out = apply_dynamics(clip, DynamicsKind::kExpand, -12.0);
  EXPECT_NEAR(peak_dbfs(out, out.size() / 2), -28.0, 0.5);
}

TEST(FilterTest, LowpassPassband) {
  const AudioClip clip = sine(100.0, 1.0, 44100);
  const AudioClip out = apply_filter(clip, FilterKind::kLowpass, 8000.0);
  EXPECT_LT(std::abs(20.0 * std::log10(tone_amplitude(out, 100.0) / tone_amplitude(clip, 100.0))), 0.5);
}

TEST(FilterTest, HighpassStopband) {
  const AudioClip clip = sine(50.0, 2.0, 16000);
  const AudioClip out = apply_filter(clip, FilterKind::kHighpass, 500.0);
  EXPECT_LE(20.0 * std::log10(tone_amplitude(out, 50.0) / tone_amplitude(clip, 50.0)), -30.0);
}

TEST(FilterTest, ThreeDbPointWithinFivePercent) {
  const int rate = 44100;
  for (double fc : {3500.0, 6000.0, 8000.0}) {
    auto gain = [&](double hz) {
      const AudioClip c = sine(hz, 1.0, rate);
      return 20.0 * std::log10(tone_amplitude(apply_filter(c, FilterKind::kLowpass, fc), hz) /
                               tone_amplitude(c, hz));
    };
    EXPECT_GT(gain(0.95 * fc), -3.0) << fc;
    EXPECT_LT(gain(1.05 * fc), -3.0) << fc;
  }
  for (double fc : {100.0, 250.0, 500.0}) {
    auto gain = [&](double hz) {
      const AudioClip c = sine(hz, 2.0, rate);
      return 20.0 * std::log10(tone_amplitude(apply_filter(c, FilterKind::kHighpass, fc), hz) /
                               tone_amplitude(c, hz));
    };
    EXPECT_GT(gain(1.05 * fc), -3.0) << fc;
    EXPECT_LT(gain(0.95 * fc), -3.0) << fc;
  }
}

TEST(FilterTest, NyquistGuard) {
  EXPECT_THROW(apply_filter(sine(100.0, 0.1, 16000), FilterKind::kLowpass, 9000.0), AttackError);
}

TEST(EqualizeTest, ZeroGainIsIdentity) {
  const AudioClip clip = rich_tone(1.0, 16000, 6);
  EXPECT_LT(max_abs_diff(equalize(clip, 0.0, 3).samples(), clip.samples()), 1e-6);
}

TEST(EqualizeTest, BandDeviationBounded) {
  // Per-band power ratio of white noise before and after, measured with a
  // direct sum over DFT bins of the whole interior.
  const int rate = 44100;
  const AudioClip clip = white_noise(2.0, rate, 0.1, 9);
  for (std::uint64_t seed : {1, 2, 3}) {
    for (double g : {0.75, -0.75}) {
      const AudioClip out = equalize(clip, g, seed);
      const auto centers = eq_band_centers();
      const auto x = fft::forward_real(clip.samples());
      const auto y = fft::forward_real(out.samples());
      for (double c : centers) {
        double px = 0.0, py = 0.0;
        for (std::size_t k = 1; k < x.size(); ++k) {
          const double hz = static_cast<double>(k) * rate / static_cast<double>(clip.size());
          if (hz < c / std::sqrt(2.0) || hz > c * std::sqrt(2.0)) continue;
          px += std::norm(x[k]);
          py += std::norm(y[k]);
        }
        EXPECT_LE(std::abs(10.0 * std::log10(py / px)), 0.85) << c;
      }
    }
  }
}

TEST(EqualizeTest, Deterministic) {
  const AudioClip clip = rich_tone(0.5, 16000, 7);
  EXPECT_EQ(equalize(clip, 0.5, 4).vector(), equalize(clip, 0.5, 4).vector());
  EXPECT_NE(equalize(clip, 0.5, 4).vector(), equalize(clip, 0.5, 5).vector());
}

TEST(TimeStretchTest, UnitRateIsIdentity) {
  const AudioClip clip = rich_tone(1.0, 16000, 8);
  EXPECT_EQ(time_stretch(clip, 1.0).vector(), clip.vector());
}

TEST(TimeStretchTest, LengthFormula) {
  const AudioClip clip = rich_tone(3.0, 16000, 9);
  EXPECT_NEAR(time_stretch(clip, 0.75).duration_seconds(), 4.0, 0.025);
  for (double r : {0.8, 0.95, 1.05, 1.25}) {
    const auto expected = std::llround(static_cast<double>(clip.size()) / r);
    const auto hop = static_cast<long long>(vocoder_frame_length(16000) / 4);
    EXPECT_LE(std::llabs(static_cast<long long>(time_stretch(clip, r).size()) - expected), hop);
  }
}

TEST(TimeStretchTest, PitchPreserved) {
  const AudioClip clip = sine(440.0, 2.0, 16000);
  const AudioClip out = time_stretch(clip, 1.25);
  double best_hz = 0.0, best = 0.0;
  for (double hz = 400.0; hz <= 480.0; hz += 0.5) {
    const double a = tone_amplitude(out, hz);
    if (a > best) best = a, best_hz = hz;
  }
  EXPECT_NEAR(best_hz, 440.0, 5.0);
}

TEST(TimeJitterTest, ZeroScaleIsIdentity) {
  const AudioClip clip = rich_tone(1.0, 16000, 10);
  EXPECT_LT(max_abs_diff(time_jitter(clip, 0.0, 1).samples(), clip.samples()), 1e-9);
}

TEST(TimeJitterTest, LengthAndDeterminism) {
  const AudioClip clip = rich_tone(1.3, 16000, 11);
  const AudioClip a = time_jitter(clip, 0.5, 7);
  EXPECT_EQ(a.size(), clip.size());
  EXPECT_EQ(a.vector(), time_jitter(clip, 0.5, 7).vector());
  EXPECT_NE(a.vector(), time_jitter(clip, 0.5, 8).vector());
  EXPECT_GT(max_abs_diff(a.samples(), clip.samples()), 1e-3);
  EXPECT_THROW(time_jitter(AudioClip(std::vector<double>(100, 0.1), 16000), 0.2, 1), AttackError);
}

TEST(LowLevelTest, PolarityInversion) {
  const AudioClip clip({0.5, -0.25}, 8000);
  EXPECT_EQ(polarity_invert(clip).vector(), (std::vector<double>{-0.5, 0.25}));
  const AudioClip x = white_noise(0.2, 16000, 0.3, 12);
  EXPECT_EQ(polarity_invert(polarity_invert(x)).vector(), x.vector());
  EXPECT_NEAR(measure_snr(x, polarity_invert(x)), 10.0 * std::log10(0.25), 1e-9);
}

TEST(LowLevelTest, GainGroup) {
  const AudioClip x = white_noise(0.2, 16000, 0.1, 13);
  EXPECT_EQ(adjust_gain(x, 1.0).vector(), x.vector());
  const AudioClip half({0.5, -0.1}, 8000);
  EXPECT_DOUBLE_EQ(peak_abs(adjust_gain(half, 5.0).samples()), 2.5);
  for (double a : {0.2, 0.37, 3.0, 5.0}) {
    EXPECT_LE(max_abs_diff(adjust_gain(adjust_gain(x, a), 1.0 / a).samples(), x.samples()), 1e-12);
  }
}

TEST(LowLevelTest, Quantization) {
  // A clip on the 16-bit grid (what a 16-bit file decodes to) is unchanged.
  std::vector<double> grid;
  Rng rng(14);
  for (int i = 0; i < 5000; ++i) grid.push_back(static_cast<double>(static_cast<int>(rng.below(65536)) - 32768) / 32768.0);
  const AudioClip pcm(grid, 16000);
  EXPECT_EQ(quantize(pcm, 16).vector(), pcm.vector());

  const AudioClip x = white_noise(0.5, 16000, 0.2, 15);
  const AudioClip q8 = quantize(x, 8);
  EXPECT_LE(max_abs_diff(q8.samples(), x.samples()), std::ldexp(1.0, -8));
  EXPECT_EQ(quantize(q8, 8).vector(), q8.vector());
  for (int bits = 8; bits <= 16; ++bits) {
    const AudioClip q = quantize(x, bits);
    EXPECT_EQ(quantize(q, bits).vector(), q.vector()) << bits;
  }
}

TEST(LowLevelTest, PhaseShift) {
  const AudioClip x = white_noise(1.0, 16000, 0.2, 16);
  const AudioClip d = phase_shift(x, 0.1);
  for (std::size_t i = 0; i < 1600; ++i) ASSERT_EQ(d[i], 0.0);
  EXPECT_EQ(d[1600], x[0]);
  EXPECT_EQ(d.size(), x.size());
  EXPECT_EQ(phase_shift(x, 0.0).vector(), x.vector());
  for (double s : {0.1, -0.1, 0.033}) {
    const AudioClip back = phase_shift(phase_shift(x, s), -s);
    const auto k = static_cast<std::size_t>(std::abs(std::lround(s * 16000)));
    for (std::size_t i = 2 * k; i + 2 * k < x.size(); ++i) ASSERT_EQ(back[i], x[i]) << s;
  }
  EXPECT_THROW(phase_shift(AudioClip(std::vector<double>(100, 0.1), 16000), 0.05), AttackError);
}

TEST(ApplyAttackTest, NativeAttacksAreDeterministicAndKeepLength) {
  const AudioClip clip = rich_tone(1.5, 16000, 17);
  TempDir dir("apply-test");
  const auto noise_path = dir.path() / "noise.wav";
  const auto ir_path = dir.path() / "ir.wav";
  save_wav(white_noise(0.7, 16000, 0.1, 18), noise_path, WavDepth::kFloat32);
  std::vector<double> ir(2000);
  for (std::size_t i = 0; i < ir.size(); ++i) ir[i] = std::exp(-static_cast<double>(i) / 300.0) * (i % 7 == 0 ? 1.0 : -0.3);
  save_wav(AudioClip(ir, 16000), ir_path, WavDepth::kFloat32);

  for (AttackId id : kAllAttacks) {
    const auto cat = attack_info(id).category;
    if (cat == AttackCategory::kNeuralCompression || cat == AttackCategory::kConventionalCompression) continue;
    for (auto regime : {AttackRegime::loose(), AttackRegime::strict()}) {
      std::string resource;
      if (id == AttackId::BN) resource = noise_path.string();
      if (id == AttackId::RV) resource = ir_path.string();
      const auto spec = AttackSpec::make(id, regime, 99, resource);
      const AudioClip a = apply_attack(clip, spec);
      const AudioClip b = apply_attack(clip, spec);
      EXPECT_EQ(a.vector(), b.vector()) << attack_code(id);
      EXPECT_EQ(a.sample_rate(), clip.sample_rate());
      if (id != AttackId::TS) EXPECT_EQ(a.size(), clip.size()) << attack_code(id);
      for (double v : a.samples()) ASSERT_TRUE(std::isfinite(v)) << attack_code(id);
    }
  }
}

TEST(ApplyAttackTest, DefinitionsAndErrors) {
  const AudioClip clip = rich_tone(0.5, 16000, 19);
  EXPECT_EQ(apply_attack(clip, AttackSpec{AttackId::PI, std::nullopt, AttackRegime::strict(), 1, {}}).vector(),
            polarity_invert(clip).vector());
  EXPECT_EQ(apply_attack(clip, AttackSpec{AttackId::GA, 1.0, AttackRegime::loose(), 1, {}}).vector(),
            clip.vector());
  try {
    apply_attack(clip, AttackSpec::make(AttackId::BN, AttackRegime::loose(), 1));
    FAIL();
  } catch (const AttackError& e) {
    EXPECT_NE(std::string(e.what()).find("missing resource"), std::string::npos);
  }
  EXPECT_THROW(apply_attack(clip, AttackSpec::make(AttackId::EN, AttackRegime::loose(), 1)), AttackError);
  // Lowpass at the Nyquist frequency of a 16 kHz clip passes it through.
  EXPECT_EQ(apply_attack(clip, AttackSpec{AttackId::LP, 8000.0, AttackRegime::loose(), 1, {}}).vector(),
            clip.vector());
  EXPECT_THROW(apply_attack(clip, AttackSpec{AttackId::GN, 5.0, AttackRegime::loose(), 1, {}}), AttackError);
}

}  // namespace
}  // namespace rawbench
