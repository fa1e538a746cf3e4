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
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rawbench/log.hpp"
#include "rawbench/metrics.hpp"
#include "rawbench/resample.hpp"
#include "rawbench/signal.hpp"
#include "rawbench/spectral.hpp"
#include "rawbench/temp_dir.hpp"
#include "rawbench/wav.hpp"
#include "test_util.hpp"

namespace rawbench {
namespace {

using testing::sine;
using testing::white_noise;

void write_bytes(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

// Hand-assembled 16-bit stereo PCM file.
std::vector<unsigned char> stereo_pcm16(const std::vector<std::int16_t>& interleaved, int rate) {
  std::vector<unsigned char> b;
  auto u32 = [&](std::uint32_t v) { for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i))); };
  auto u16 = [&](std::uint16_t v) { b.push_back(static_cast<unsigned char>(v)); b.push_back(static_cast<unsigned char>(v >> 8)); };
  auto tag = [&](const char* t) { b.insert(b.end(), t, t + 4); };
  const auto data = static_cast<std::uint32_t>(interleaved.size() * 2);
  tag("RIFF"); u32(36 + data); tag("WAVE");
  tag("fmt "); u32(16); u16(1); u16(2); u32(static_cast<std::uint32_t>(rate));
  u32(static_cast<std::uint32_t>(rate * 4)); u16(4); u16(16);
  tag("data"); u32(data);
  for (auto s : interleaved) u16(static_cast<std::uint16_t>(s));
  return b;
}

class WavTest : public ::testing::Test {
 protected:
  TempDir dir_{"wav-test"};
};

TEST_F(WavTest, StereoPcmIsMixedDownToMono) {
  const auto path = dir_.path() / "stereo.wav";
  write_bytes(path, stereo_pcm16({32767, 1000, -2000, 4000, 0, 0}, 44100));
  const AudioClip clip = load_wav(path);
  ASSERT_EQ(clip.size(), 3u);
  EXPECT_EQ(clip.sample_rate(), 44100);
  EXPECT_EQ(clip.source_bit_depth(), 16);
  EXPECT_DOUBLE_EQ(clip[0], (32767.0 / 32768.0 + 1000.0 / 32768.0) / 2.0);
  EXPECT_DOUBLE_EQ(clip[1], (-2000.0 / 32768.0 + 4000.0 / 32768.0) / 2.0);
  EXPECT_DOUBLE_EQ(clip[2], 0.0);
}

TEST_F(WavTest, FullScaleCodeScalesBy32768) {
  const auto path = dir_.path() / "fs.wav";
  write_bytes(path, stereo_pcm16({32767, 32767}, 8000));
  EXPECT_DOUBLE_EQ(load_wav(path)[0], 32767.0 / 32768.0);
}

TEST_F(WavTest, TruncatedHeaderIsUnsupported) {
  const auto path = dir_.path() / "bad.wav";
  auto bytes = stereo_pcm16({1, 2}, 8000);
  bytes.resize(30);
  write_bytes(path, bytes);
  try {
    load_wav(path);
    FAIL() << "expected an error";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("unsupported encoding"), std::string::npos);
  }
}

TEST_F(WavTest, MissingFileAndZeroLength) {
  EXPECT_THROW(load_wav(dir_.path() / "nope.wav"), IoError);
  const auto path = dir_.path() / "empty.wav";
  write_bytes(path, stereo_pcm16({}, 8000));
  try {
    load_wav(path);
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("zero-length"), std::string::npos);
  }
}

TEST_F(WavTest, Float32RoundTripIsBitExact) {
  // Values representable in float32 survive exactly.
  std::vector<double> x;
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) x.push_back(static_cast<float>(rng.uniform(-1.5, 1.5)));
  const AudioClip clip(x, 22050);
  const auto path = dir_.path() / "f.wav";
  save_wav(clip, path, WavDepth::kFloat32);
  const AudioClip back = load_wav(path);
  EXPECT_EQ(back.vector(), clip.vector());
  EXPECT_EQ(back.source_bit_depth(), 32);
  // And a second cycle is the identity.
  save_wav(back, path, WavDepth::kFloat32);
  EXPECT_EQ(load_wav(path).vector(), back.vector());
}

TEST_F(WavTest, Pcm16RoundTripWithinOneStep) {
  const AudioClip clip = white_noise(0.2, 16000, 0.1, 11);
  const auto path = dir_.path() / "p16.wav";
  save_wav(clip, path, WavDepth::kPcm16);
  const AudioClip back = load_wav(path);
  EXPECT_LE(testing::max_abs_diff(back.samples(), clip.samples()), std::ldexp(1.0, -15));
}

TEST_F(WavTest, Pcm24RoundTripWithinOneStep) {
  const AudioClip clip = white_noise(0.2, 48000, 0.1, 12);
  const auto path = dir_.path() / "p24.wav";
  save_wav(clip, path, WavDepth::kPcm24);
  const AudioClip back = load_wav(path);
  EXPECT_EQ(back.source_bit_depth(), 24);
  EXPECT_LE(testing::max_abs_diff(back.samples(), clip.samples()), std::ldexp(1.0, -23));
}

TEST_F(WavTest, IntegerSaveClipsAndWarns) {
  std::vector<std::string> warnings;
  auto previous = set_log_sink([&](LogLevel level, std::string_view msg) {
    if (level == LogLevel::kWarning) warnings.emplace_back(msg);
  });
  const AudioClip clip({2.5, -2.5, 0.25}, 8000);
  const auto path = dir_.path() / "clip.wav";
  save_wav(clip, path, WavDepth::kPcm16);
  set_log_sink(previous);
  const AudioClip back = load_wav(path);
  EXPECT_DOUBLE_EQ(back[0], 1.0 - std::ldexp(1.0, -15));
  EXPECT_DOUBLE_EQ(back[1], -(1.0 - std::ldexp(1.0, -15)));
  EXPECT_DOUBLE_EQ(back[2], 0.25);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("2 samples clipped"), std::string::npos);
}

TEST_F(WavTest, ProbeMatchesLoad) {
  const AudioClip clip = white_noise(1.7, 22050, 0.1, 13);
  const auto path = dir_.path() / "probe.wav";
  save_wav(clip, path, WavDepth::kPcm24);
  const WavInfo info = probe_wav(path);
  EXPECT_EQ(info.frames, clip.size());
  EXPECT_EQ(info.sample_rate, 22050);
  EXPECT_EQ(info.bits_per_sample, 24);
  EXPECT_NEAR(info.duration_seconds(), 1.7, 1e-4);
}

TEST_F(WavTest, UnwritablePath) {
  EXPECT_THROW(save_wav(AudioClip({0.0}, 8000), dir_.path() / "no" / "such" / "dir.wav",
                        WavDepth::kPcm16),
               IoError);
}

TEST(AudioClipTest, RejectsBadRateAndNonFinite) {
  EXPECT_THROW(AudioClip({0.0}, 0), InvalidArgument);
  EXPECT_THROW(AudioClip({std::nan("")}, 8000), InvalidArgument);
}

TEST(ResampleTest, SameRateIsIdentity) {
  const AudioClip clip = white_noise(0.5, 44100, 0.3, 1);
  EXPECT_EQ(resample(clip, 44100).vector(), clip.vector());
}

TEST(ResampleTest, OutputLength) {
  const AudioClip clip = white_noise(1.0, 44100, 0.3, 2);
  const auto out = resample(clip, 16000);
  EXPECT_NEAR(static_cast<double>(out.size()), 16000.0, 1.0);
  EXPECT_EQ(out.sample_rate(), 16000);
  EXPECT_NEAR(static_cast<double>(resample(clip, 22050).size()), 22050.0, 1.0);
}

TEST(ResampleTest, SineDownsampleMatchesAnalyticTarget) {
  const AudioClip in = sine(1000.0, 1.0, 44100);
  const AudioClip out = resample(in, 16000);
  const AudioClip ideal = sine(1000.0, 1.0, 16000);
  ASSERT_EQ(out.size(), ideal.size());
  const std::size_t skip = out.size() / 20;
  const AudioClip a(std::vector<double>(ideal.vector().begin() + skip, ideal.vector().end() - skip), 16000);
  const AudioClip b(std::vector<double>(out.vector().begin() + skip, out.vector().end() - skip), 16000);
  EXPECT_GE(si_snr(a, b), 40.0);
}

TEST(ResampleTest, RemovesContentAboveTargetNyquist) {
  // 7.5 kHz survives 44.1 -> 16 kHz, 12 kHz must not alias into the band.
  const AudioClip in = sine(12000.0, 0.5, 44100);
  const AudioClip out = resample(in, 16000);
  const std::size_t skip = out.size() / 10;
  double peak = 0.0;
  for (std::size_t i = skip; i + skip < out.size(); ++i) peak = std::max(peak, std::abs(out[i]));
  EXPECT_LT(20.0 * std::log10(peak / 0.5), -60.0);
}

TEST(MeasureSnrTest, ClampAndPowerRatios) {
  const AudioClip x = white_noise(0.5, 16000, 0.3, 5);
  EXPECT_DOUBLE_EQ(measure_snr(x, x), 100.0);

  // Noise scaled to an exact power ratio; the oracle is the ratio itself.
  const AudioClip n = white_noise(0.5, 16000, 1.0, 6);
  for (double ratio : {1.0, 100.0}) {
    const double gain = std::sqrt(energy(x.samples()) / (energy(n.samples()) * ratio));
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] + gain * n[i];
    EXPECT_NEAR(measure_snr(x, x.with_samples(y)), 10.0 * std::log10(ratio), 1e-9);
  }
}

TEST(MeasureSnrTest, MatchesOneLineOracleAndRejectsMismatch) {
  const AudioClip x = white_noise(0.1, 16000, 0.3, 7);
  std::vector<double> y = x.vector();
  for (double& v : y) v *= 1.0 + 1e-3;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < y.size(); ++i) { num += x[i] * x[i]; den += (y[i] - x[i]) * (y[i] - x[i]); }
  const double got = measure_snr(x, x.with_samples(y));
  EXPECT_TRUE(std::isfinite(got));
  EXPECT_NEAR(got, 10.0 * std::log10(num / den), 1e-12);
  EXPECT_THROW(measure_snr(x, AudioClip({0.0}, 16000)), InvalidArgument);
}

TEST(StftTest, ZerosGiveZeros) {
  const std::vector<double> x(2048, 0.0);
  const auto spec = stft(x, 16000, 512, 128);
  for (std::size_t f = 0; f < spec.frame_count(); ++f) {
    for (const auto& c : spec.frame(f)) EXPECT_EQ(std::abs(c), 0.0);
  }
}

TEST(StftTest, BinCenterSineConcentratesInMainLobe) {
  const int rate = 16000;
  const std::size_t n = 512;
  const int bin = 37;
  const AudioClip x = sine(bin * static_cast<double>(rate) / n, 0.1, rate);
  const auto spec = stft(x, n, n / 4);
  const auto frame = spec.frame(0);
  double total = 0.0;
  for (std::size_t k = 1; k + 1 < frame.size(); ++k) total += std::norm(frame[k]);
  const double center = std::norm(frame[bin]);
  const double lobe = center + std::norm(frame[bin - 1]) + std::norm(frame[bin + 1]);

  // Leakage oracle: straight DFT of the same windowed frame.
  std::vector<double> windowed(n);
  for (std::size_t i = 0; i < n; ++i) {
    windowed[i] = x[i] * (0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n));
  }
  const auto dft = oracle::naive_dft(windowed, n);
  double dft_total = 0.0;
  for (std::size_t k = 1; k < n / 2; ++k) dft_total += std::norm(dft[k]);
  EXPECT_NEAR(center / total, std::norm(dft[bin]) / dft_total, 1e-9);
  EXPECT_NEAR(center / total, 2.0 / 3.0, 1e-6);  // Hann main-lobe split 1 : 1/4 : 1/4
  EXPECT_GT(lobe / total, 0.95);
}

TEST(StftTest, InverseReconstructsInterior) {
  const AudioClip x = white_noise(0.5, 16000, 0.3, 8);
  const auto spec = stft(x, 1024, 256);
  const auto y = istft(spec, x.size());
  double err = 0.0;
  for (std::size_t i = 1024; i + 1024 < x.size(); ++i) err = std::max(err, std::abs(y[i] - x[i]));
  EXPECT_LT(err, 1e-6);
}

TEST(StftTest, ParsevalWithWindowEnergyWeighting) {
  const AudioClip x = white_noise(0.3, 16000, 0.3, 9);
  const std::size_t n = 512, hop = 128;
  const auto spec = stft(x, n, hop);
  const auto w = hann_window(n);
  double spectral = 0.0;
  for (std::size_t f = 0; f < spec.frame_count(); ++f) {
    const auto frame = spec.frame(f);
    for (std::size_t k = 0; k < frame.size(); ++k) {
      const double weight = (k == 0 || k == n / 2) ? 1.0 : 2.0;
      spectral += weight * std::norm(frame[k]);
    }
  }
  spectral /= static_cast<double>(n);
  double temporal = 0.0;
  for (std::size_t f = 0; f < spec.frame_count(); ++f) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = x[f * hop + i] * w[i];
      temporal += v * v;
    }
  }
  EXPECT_NEAR(spectral / temporal, 1.0, 1e-4);
}

TEST(StftTest, Errors) {
  EXPECT_THROW(stft(std::vector<double>(100, 0.0), 16000, 512, 128), InvalidArgument);
  EXPECT_THROW(stft(std::vector<double>(1000, 0.0), 16000, 500, 125), InvalidArgument);
  EXPECT_THROW(stft(std::vector<double>(1000, 0.0), 16000, 512, 1024), InvalidArgument);
}

TEST(MelFilterbankTest, SingleFilterSpansBand) {
  const auto bank = mel_filterbank(1024, 1, 16000, 300.0, 5000.0);
  ASSERT_EQ(bank.center_hz.size(), 1u);
  const auto row = bank.row(0);
  for (std::size_t k = 0; k < row.size(); ++k) {
    const double f = k * 16000.0 / 1024.0;
    if (f < 300.0 || f > 5000.0) EXPECT_EQ(row[k], 0.0) << f;
    if (f > 320.0 && f < 4980.0) EXPECT_GT(row[k], 0.0) << f;
  }
  EXPECT_NEAR(bank.center_hz[0], oracle::mel_centers(1, 300.0, 5000.0)[0], 1e-9);
}

TEST(MelFilterbankTest, RowSumsPositiveAndCentersMatchFormula) {
  const auto bank = mel_filterbank(512, 40, 16000, 0.0, 8000.0);
  const auto expected = oracle::mel_centers(40, 0.0, 8000.0);
  for (std::size_t m = 0; m < 40; ++m) {
    double sum = 0.0;
    for (double w : bank.row(m)) sum += w;
    EXPECT_GT(sum, 0.0) << m;
    EXPECT_NEAR(bank.center_hz[m], expected[m], 1e-6 * expected[m]) << m;
    if (m > 0) EXPECT_GT(bank.center_hz[m], bank.center_hz[m - 1]);
  }
}

TEST(MelFilterbankTest, InvalidEdges) {
  EXPECT_THROW(mel_filterbank(512, 40, 16000, 4000.0, 3000.0), InvalidArgument);
  EXPECT_THROW(mel_filterbank(512, 40, 16000, 0.0, 9000.0), InvalidArgument);
}

}  // namespace
}  // namespace rawbench
