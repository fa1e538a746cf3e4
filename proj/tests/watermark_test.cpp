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

#include <string>

#include "rawbench/attacks/low_level.hpp"
#include "rawbench/metrics.hpp"
#include "rawbench/watermark.hpp"
#include "test_util.hpp"

namespace rawbench {
namespace {

using testing::rich_tone;
using testing::white_noise;

// Carriers of a few kinds and rates; 3 s each.
AudioClip carrier(std::uint64_t seed) {
  static const int rates[] = {16000, 22050, 44100};
  const int rate = rates[seed % 3];
  if (seed % 2 == 0) return rich_tone(3.0, rate, seed);
  return white_noise(3.0, rate, 0.05 + 0.01 * static_cast<double>(seed % 5), seed);
}

TEST(ReferenceWatermarkTest, CleanRecoveryOverRandomTriples) {
  double total = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    ReferenceConfig config;
    config.key_seed = mix_seed(77, t);
    ReferenceWatermarker wm(config);
    const AudioClip clip = carrier(t);
    const Message m = Message::random(16, 1000 + t);
    const AudioClip marked = wm.embed(clip, m);
    ASSERT_EQ(marked.size(), clip.size());
    ASSERT_EQ(marked.sample_rate(), clip.sample_rate());
    total += bitwise_accuracy(m, wm.detect(marked).bits);
  }
  EXPECT_EQ(total / 100.0, 1.0);
}

TEST(ReferenceWatermarkTest, WrongKeyIsChance) {
  double total = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    ReferenceConfig right, wrong;
    right.key_seed = mix_seed(5, t);
    wrong.key_seed = mix_seed(6, t);
    ReferenceWatermarker embedder(right), detector(wrong);
    const Message m = Message::random(16, 2000 + t);
    total += bitwise_accuracy(m, detector.detect(embedder.embed(carrier(t), m)).bits);
  }
  const double mean = total / 100.0;
  EXPECT_GE(mean, 0.45);
  EXPECT_LE(mean, 0.55);
}

TEST(ReferenceWatermarkTest, UnmarkedNoiseIsChance) {
  ReferenceWatermarker wm;
  double total = 0.0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    const AudioClip noise = white_noise(1.5, 16000, 0.1, 5000 + t);
    const DetectionResult r = wm.detect(noise);
    EXPECT_EQ(r.bits.size(), 16u);
    total += bitwise_accuracy(Message::random(16, 9000 + t), r.bits);
  }
  EXPECT_NEAR(total / 200.0, 0.5, 0.05);
}

TEST(ReferenceWatermarkTest, PolarityInvariant) {
  ReferenceWatermarker wm;
  for (std::uint64_t t = 0; t < 10; ++t) {
    const Message m = Message::random(16, 300 + t);
    const AudioClip marked = wm.embed(carrier(t), m);
    EXPECT_EQ(wm.detect(polarity_invert(marked)).bits, m);
  }
}

TEST(ReferenceWatermarkTest, Imperceptibility) {
  ReferenceWatermarker wm;
  for (std::uint64_t t = 0; t < 12; ++t) {
    const AudioClip clip = carrier(t);
    EXPECT_GE(si_snr(clip, wm.embed(clip, Message::random(16, t))), 25.0) << t;
  }
}

TEST(ReferenceWatermarkTest, ScoresSeparateMarkedFromClean) {
  ReferenceWatermarker wm;
  std::vector<double> marked_presence, clean_presence;
  double marked_score = 0.0, clean_score = 0.0;
  for (std::uint64_t t = 0; t < 30; ++t) {
    const AudioClip clip = carrier(t);
    const DetectionResult a = wm.detect(wm.embed(clip, Message::random(16, t)));
    const DetectionResult b = wm.detect(clip);
    for (double s : a.bit_scores) marked_score += s;
    for (double s : b.bit_scores) clean_score += s;
    marked_presence.push_back(*a.presence_score);
    clean_presence.push_back(*b.presence_score);
  }
  EXPECT_GT(marked_score, clean_score);
  EXPECT_GT(tpr_at_zero_fpr(marked_presence, clean_presence), 0.9);
}

TEST(ReferenceWatermarkTest, CapacityAndLengthErrors) {
  ReferenceWatermarker wm;
  const AudioClip tiny = white_noise(0.5, 16000, 0.1, 1);  // 8000 < 17 * 1024
  try {
    wm.embed(tiny, Message::random(16, 1));
    FAIL();
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find("insufficient capacity"), std::string::npos);
  }
  EXPECT_THROW(wm.embed(carrier(0), Message::random(8, 1)), InvalidArgument);
  EXPECT_THROW(reference_detect(tiny, ReferenceConfig{}), CapacityError);
  // Through the watermarker interface, short audio is low confidence, not an error.
  const DetectionResult r = wm.detect(tiny);
  EXPECT_EQ(r.bits.size(), 16u);
  EXPECT_EQ(r.presence_score, 0.0);
}

TEST(ReferenceWatermarkTest, SilentCarrierStillCarriesBits) {
  ReferenceWatermarker wm;
  const AudioClip silence(std::vector<double>(48000, 0.0), 16000);
  const Message m = Message::random(16, 4);
  EXPECT_EQ(wm.detect(wm.embed(silence, m)).bits, m);
}

TEST(PluginWatermarkTest, EchoRoundTripWithinSixteenBits) {
  auto wm = spawn_plugin({RAWBENCH_ECHO_PLUGIN_PATH, "--message-length", "12", "--name", "echo12"});
  EXPECT_EQ(wm->handle().message_length, 12);
  EXPECT_EQ(wm->handle().name, "echo12");
  EXPECT_EQ(wm->handle().mode, WatermarkerMode::kPlugin);
  const AudioClip clip = rich_tone(1.0, 16000, 3);
  const AudioClip out = wm->embed(clip, Message::random(12, 1));
  ASSERT_EQ(out.size(), clip.size());
  EXPECT_LE(testing::max_abs_diff(out.samples(), clip.samples()), std::ldexp(1.0, -15));
  const DetectionResult r = wm->detect(out);
  EXPECT_EQ(r.bits.size(), 12u);
  EXPECT_EQ(r.bit_scores.size(), 12u);
}

TEST(PluginWatermarkTest, ResamplesToNativeRate) {
  auto wm = spawn_plugin({RAWBENCH_ECHO_PLUGIN_PATH, "--native-rate", "22050"});
  const AudioClip clip = rich_tone(1.0, 44100, 4);
  const AudioClip out = wm->embed(clip, Message::random(16, 2));
  EXPECT_EQ(out.size(), clip.size());
  EXPECT_EQ(out.sample_rate(), 44100);
  EXPECT_GE(si_snr(clip, out), 60.0);
}

TEST(PluginWatermarkTest, LengthMismatchFailsBeforeAnyCall) {
  auto wm = spawn_plugin({RAWBENCH_ECHO_PLUGIN_PATH, "--crash-on", "embed"});
  // Would crash the child if it reached the plugin.
  EXPECT_THROW(wm->embed(rich_tone(1.0, 16000, 5), Message::random(5, 1)), InvalidArgument);
  EXPECT_TRUE(wm->client().running());
}

TEST(PluginWatermarkTest, SpawnErrors) {
  EXPECT_THROW(spawn_plugin({"/nonexistent/plugin-binary"}), PluginError);
  EXPECT_THROW(spawn_plugin({RAWBENCH_ECHO_PLUGIN_PATH, "--garbage-info"}), ProtocolError);
  EXPECT_THROW(spawn_plugin({RAWBENCH_ECHO_PLUGIN_PATH, "--hang-on", "info"},
                            PluginTimeouts{std::chrono::milliseconds(300), std::chrono::seconds(5)}),
               PluginError);
}

TEST(PluginWatermarkTest, FailureReplies) {
  auto wm = spawn_plugin({RAWBENCH_ECHO_PLUGIN_PATH, "--fail-on", "detect"});
  EXPECT_THROW(wm->detect(rich_tone(1.0, 16000, 6)), PluginError);
  auto crashing = spawn_plugin({RAWBENCH_ECHO_PLUGIN_PATH, "--crash-on", "embed"});
  EXPECT_THROW(crashing->embed(rich_tone(1.0, 16000, 6), Message::random(16, 1)), PluginError);
}

}  // namespace
}  // namespace rawbench
