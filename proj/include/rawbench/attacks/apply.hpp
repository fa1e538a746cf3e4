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

#ifndef RAWBENCH_ATTACKS_APPLY_HPP_
#define RAWBENCH_ATTACKS_APPLY_HPP_

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "rawbench/attacks/catalog.hpp"
#include "rawbench/attacks/compression.hpp"
#include "rawbench/attacks/dynamics.hpp"
#include "rawbench/attacks/filtering.hpp"
#include "rawbench/attacks/low_level.hpp"
#include "rawbench/attacks/mixing.hpp"
#include "rawbench/audio_clip.hpp"
#include "rawbench/error.hpp"
#include "rawbench/plugin.hpp"
#include "rawbench/temp_dir.hpp"
#include "rawbench/wav.hpp"

namespace rawbench {

// Thread-safe cache of noise clips and impulse responses keyed by path.
class ResourceCache {
 public:
  std::shared_ptr<const AudioClip> get(const std::string& path) {
    std::lock_guard lock(mutex_);
    if (auto it = clips_.find(path); it != clips_.end()) return it->second;
    auto clip = std::make_shared<const AudioClip>(load_wav(path));
    clips_.emplace(path, clip);
    return clip;
  }

 private:
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const AudioClip>> clips_;
};

// Everything an attack may need besides the clip and its spec. Plugin and
// cache pointers are borrowed; a worker owns one environment at a time.
struct AttackEnvironment {
  std::map<AttackId, CodecCommand> codecs = default_codec_commands();
  std::chrono::milliseconds codec_timeout = std::chrono::minutes(5);
  PluginClient* neural_codec = nullptr;
  WavDepth wire_depth = WavDepth::kPcm16;
  std::filesystem::path work_dir;  // empty: a private temp dir per call
  ResourceCache* resources = nullptr;
};

namespace detail {

inline std::shared_ptr<const AudioClip> load_resource(const AttackSpec& spec,
                                                      AttackEnvironment& env, const char* what) {
  if (spec.resource.empty()) {
    throw AttackError(std::string("missing resource: ") + std::string(attack_code(spec.id)) +
                      " needs " + what);
  }
  try {
    if (env.resources) return env.resources->get(spec.resource);
    return std::make_shared<const AudioClip>(load_wav(spec.resource));
  } catch (const IoError& e) {
    throw AttackError(std::string("missing resource: ") + e.what());
  }
}

}  // namespace detail

// Dispatches to the attack named by spec.id. The output keeps the input
// sample rate and, for every attack except TS, the input length.
inline AudioClip apply_attack(const AudioClip& clip, const AttackSpec& spec,
                              AttackEnvironment& env) {
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    throw AttackError(e.what());
  }
  const double p = spec.parameter.value_or(0.0);
  const std::uint64_t seed = spec.internal_seed();

  std::optional<TempDir> scratch;
  const auto work_dir = [&]() -> std::filesystem::path {
    if (!env.work_dir.empty()) return env.work_dir;
    if (!scratch) scratch.emplace("rawbench-attack");
    return scratch->path();
  };

  AudioClip out;
  switch (spec.id) {
    case AttackId::GN: out = add_gaussian_noise(clip, p, seed); break;
    case AttackId::BN:
      out = add_background_noise(clip, *detail::load_resource(spec, env, "a noise clip"), p, seed);
      break;
    case AttackId::RV:
      out = convolve_reverb(clip, *detail::load_resource(spec, env, "an impulse response"), p);
      break;
    case AttackId::DC: out = apply_dynamics(clip, DynamicsKind::kCompress, p); break;
    case AttackId::DE: out = apply_dynamics(clip, DynamicsKind::kExpand, p); break;
    case AttackId::LM: out = apply_dynamics(clip, DynamicsKind::kLimit, p); break;
    case AttackId::LP:
      // A cutoff at or above Nyquist has nothing left to remove.
      out = p >= clip.sample_rate() / 2.0 ? clip : apply_filter(clip, FilterKind::kLowpass, p);
      break;
    case AttackId::HP: out = apply_filter(clip, FilterKind::kHighpass, p); break;
    case AttackId::EQ: out = equalize(clip, p, seed); break;
    case AttackId::TS: out = time_stretch(clip, p); break;
    case AttackId::TJ: out = time_jitter(clip, p, seed); break;
    case AttackId::PI: out = polarity_invert(clip); break;
    case AttackId::GA: out = adjust_gain(clip, p); break;
    case AttackId::QN: out = quantize(clip, static_cast<int>(p)); break;
    case AttackId::PS: out = phase_shift(clip, p); break;
    case AttackId::EN:
    case AttackId::DA:
      if (env.neural_codec == nullptr) {
        throw AttackError("missing resource: no neural codec plugin configured");
      }
      out = neural_codec(clip, spec.id, static_cast<int>(p), *env.neural_codec, work_dir(),
                         env.wire_depth);
      break;
    case AttackId::MP:
    case AttackId::OG:
    case AttackId::AA: {
      auto it = env.codecs.find(spec.id);
      if (it == env.codecs.end()) {
        throw AttackError("missing resource: no codec command for " +
                          std::string(attack_code(spec.id)));
      }
      out = transcode(clip, spec.id, static_cast<int>(p), it->second, work_dir(),
                      env.codec_timeout);
      break;
    }
  }
  if (spec.id != AttackId::TS && out.size() != clip.size()) {
    throw AttackError("internal: attack changed the clip length");
  }
  return out;
}

inline AudioClip apply_attack(const AudioClip& clip, const AttackSpec& spec) {
  AttackEnvironment env;
  return apply_attack(clip, spec, env);
}

}  // namespace rawbench

#endif  // RAWBENCH_ATTACKS_APPLY_HPP_
