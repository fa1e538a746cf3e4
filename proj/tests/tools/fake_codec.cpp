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

// Stand-in for an external encoder/decoder pair. "encode" delays the audio,
// optionally changes its rate and adds noise that shrinks as the bitrate
// grows; "decode" copies. The "compressed" file is a float WAV.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rawbench/random.hpp"
#include "rawbench/resample.hpp"
#include "rawbench/wav.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fake codec"};
  app.require_subcommand(1);
  std::string in, out;
  int kbps = 128;
  int delay = 0;
  int rate = 0;
  bool clean = false;
  bool fail = false;
  auto* encode = app.add_subcommand("encode");
  encode->add_option("--in", in)->required();
  encode->add_option("--out", out)->required();
  encode->add_option("--kbps", kbps);
  encode->add_option("--delay", delay, "Leading samples of silence");
  encode->add_option("--rate", rate, "Resample to this rate");
  encode->add_flag("--clean", clean, "Add no noise");
  encode->add_flag("--fail", fail, "Exit with status 4");
  auto* decode = app.add_subcommand("decode");
  decode->add_option("--in", in)->required();
  decode->add_option("--out", out)->required();
  CLI11_PARSE(app, argc, argv);

  try {
    if (decode->parsed()) {
      std::filesystem::copy_file(in, out, std::filesystem::copy_options::overwrite_existing);
      return 0;
    }
    if (fail) {
      std::cerr << "fake codec: injected failure\n";
      return 4;
    }
    rawbench::AudioClip clip = rawbench::load_wav(in);
    if (rate > 0) clip = rawbench::resample(clip, rate);
    std::vector<double> y(static_cast<std::size_t>(delay), 0.0);
    y.insert(y.end(), clip.samples().begin(), clip.samples().end());
    if (!clean) {
      double power = 0.0;
      for (double v : clip.samples()) power += v * v;
      power /= static_cast<double>(clip.size());
      const double snr_db = 10.0 + kbps / 8.0;
      const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
      rawbench::Rng rng(static_cast<std::uint64_t>(kbps));
      for (double& v : y) v += sigma * rng.gaussian();
    }
    rawbench::save_wav(clip.with_samples(std::move(y)), out, rawbench::WavDepth::kFloat32);
  } catch (const std::exception& e) {
    std::cerr << "fake codec: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
