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

#ifndef RAWBENCH_ATTACKS_CATALOG_HPP_
#define RAWBENCH_ATTACKS_CATALOG_HPP_

// The twenty attacks, their parameter ranges, the loose/strict thresholds,
// and regime-aware parameter sampling.
//
// Regime split: one-sided ranges split at the threshold, with the audible
// extreme strict (low SNR, low cutoff for LP, high cutoff for HP, more
// negative dynamics thresholds, larger jitter scale). EQ, TS, GA and PS are
// loose inside the band around their neutral value and strict outside it.
// Bitrate lists are strict at and beyond the threshold on the aggressive
// side; the codebook lists (EN, DA) use the threshold as their single loose
// value. PI has no parameter and is identical in both regimes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rawbench/error.hpp"
#include "rawbench/random.hpp"

namespace rawbench {

enum class AttackId : std::uint8_t {
  GN, BN, RV, DC, DE, LM, LP, HP, EQ, TS, TJ, PI, GA, QN, PS, EN, DA, MP, OG, AA
};

inline constexpr std::size_t kAttackCount = 20;

inline constexpr std::array<AttackId, kAttackCount> kAllAttacks = {
    AttackId::GN, AttackId::BN, AttackId::RV, AttackId::DC, AttackId::DE,
    AttackId::LM, AttackId::LP, AttackId::HP, AttackId::EQ, AttackId::TS,
    AttackId::TJ, AttackId::PI, AttackId::GA, AttackId::QN, AttackId::PS,
    AttackId::EN, AttackId::DA, AttackId::MP, AttackId::OG, AttackId::AA};

enum class AttackCategory {
  kMixing,
  kDynamics,
  kFiltering,
  kLowLevel,
  kNeuralCompression,
  kConventionalCompression,
};

// Which end of the range is more audible.
enum class Severity { kLowIsStrict, kHighIsStrict, kAwayFromCenter, kDiscrete, kNone };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  double length() const { return hi - lo; }
};

struct AttackInfo {
  AttackId id;
  std::string_view code;
  std::string_view name;
  std::string_view parameter;  // e.g. "SNR (dB)"; empty for PI
  AttackCategory category;
  Severity severity;
  Interval range;              // continuous attacks
  double threshold = 0.0;      // one-sided split point or band center
  double band = 0.0;           // half-width of the loose band (centered attacks)
  std::vector<double> values;  // discrete attacks: every legal value
  std::vector<double> loose_values;
  std::vector<double> strict_values;

  bool has_parameter() const { return severity != Severity::kNone; }
  bool is_discrete() const { return severity == Severity::kDiscrete; }
};

namespace detail {

inline std::vector<AttackInfo> build_catalog() {
  using enum AttackId;
  using enum AttackCategory;
  using enum Severity;
  std::vector<AttackInfo> c;
  c.push_back({GN, "GN", "Gaussian noise", "SNR (dB)", kMixing, kLowIsStrict, {20, 60}, 40});
  c.push_back({BN, "BN", "Background noise", "SNR (dB)", kMixing, kLowIsStrict, {20, 60}, 35});
  c.push_back({RV, "RV", "Reverb", "SNR (dB)", kMixing, kLowIsStrict, {0, 12}, 6});
  c.push_back({DC, "DC", "Dynamic range compression", "Threshold (dB)", kDynamics,
               kLowIsStrict, {-36, -6}, -18});
  c.push_back({DE, "DE", "Dynamic range expansion", "Threshold (dB)", kDynamics,
               kLowIsStrict, {-16, -6}, -12});
  c.push_back({LM, "LM", "Limiter", "Threshold (dB)", kDynamics, kLowIsStrict, {-36, -6}, -18});
  c.push_back({LP, "LP", "Lowpass", "Cutoff (Hz)", kFiltering, kLowIsStrict, {3500, 8000}, 6000});
  c.push_back({HP, "HP", "Highpass", "Cutoff (Hz)", kFiltering, kHighIsStrict, {10, 500}, 250});
  c.push_back({EQ, "EQ", "Equalization", "Max gain (dB)", kFiltering, kAwayFromCenter,
               {-0.75, 0.75}, 0.0, 0.375});
  c.push_back({TS, "TS", "Time stretch", "Rate", kLowLevel, kAwayFromCenter, {0.75, 1.25}, 1.0,
               0.05});
  c.push_back({TJ, "TJ", "Time jittering", "Scale", kLowLevel, kHighIsStrict, {0.10, 0.50}, 0.20});
  c.push_back({PI, "PI", "Polarity inversion", "", kLowLevel, kNone, {0, 0}, 0});
  c.push_back({GA, "GA", "Gain adjustment", "Rate", kLowLevel, kAwayFromCenter, {0.20, 5.0}, 1.0,
               0.50});
  c.push_back({QN, "QN", "Quantization", "#Bits/sample", kLowLevel, kDiscrete, {8, 16}, 12, 0,
               {8, 9, 10, 11, 12, 13, 14, 15, 16}, {13, 14, 15, 16}, {8, 9, 10, 11, 12}});
  c.push_back({PS, "PS", "Phase shift", "Seconds", kLowLevel, kAwayFromCenter, {-0.10, 0.10}, 0.0,
               0.05});
  c.push_back({EN, "EN", "Encodec (at 24 kHz)", "#Codebooks", kNeuralCompression, kDiscrete,
               {16, 32}, 32, 0, {16, 32}, {32}, {16}});
  c.push_back({DA, "DA", "Descript Audio Codec (at 44.1 kHz)", "#Codebooks", kNeuralCompression,
               kDiscrete, {7, 9}, 9, 0, {7, 8, 9}, {9}, {7, 8}});
  c.push_back({MP, "MP", "MP3 codec", "Bitrate (kbps)", kConventionalCompression, kDiscrete,
               {64, 256}, 64, 0, {64, 128, 256}, {128, 256}, {64}});
  c.push_back({OG, "OG", "OGG codec", "Bitrate (kbps)", kConventionalCompression, kDiscrete,
               {48, 256}, 48, 0, {48, 64, 128, 256}, {64, 128, 256}, {48}});
  c.push_back({AA, "AA", "AAC codec", "Bitrate (kbps)", kConventionalCompression, kDiscrete,
               {64, 256}, 64, 0, {64, 128, 256}, {128, 256}, {64}});
  return c;
}

}  // namespace detail

inline const AttackInfo& attack_info(AttackId id) {
  static const std::vector<AttackInfo> catalog = detail::build_catalog();
  return catalog[static_cast<std::size_t>(id)];
}

inline std::string_view attack_code(AttackId id) { return attack_info(id).code; }

inline std::optional<AttackId> parse_attack_id(std::string_view code) {
  for (AttackId id : kAllAttacks) {
    if (attack_info(id).code == code) return id;
  }
  return std::nullopt;
}

inline std::string_view category_name(AttackCategory category) {
  switch (category) {
    case AttackCategory::kMixing: return "Mixing";
    case AttackCategory::kDynamics: return "Dynamics";
    case AttackCategory::kFiltering: return "Filtering";
    case AttackCategory::kLowLevel: return "Low level";
    case AttackCategory::kNeuralCompression: return "Neural compression";
    case AttackCategory::kConventionalCompression: return "Conventional compression";
  }
  return "";
}

enum class RegimeKind { kLoose, kStrict, kFixed };

class AttackRegime {
 public:
  static AttackRegime loose() { return AttackRegime(RegimeKind::kLoose, 0.0); }
  static AttackRegime strict() { return AttackRegime(RegimeKind::kStrict, 0.0); }
  static AttackRegime fixed(double value) { return AttackRegime(RegimeKind::kFixed, value); }

  RegimeKind kind() const { return kind_; }
  double fixed_value() const { return value_; }

  std::string name() const {
    switch (kind_) {
      case RegimeKind::kLoose: return "loose";
      case RegimeKind::kStrict: return "strict";
      case RegimeKind::kFixed: {
        std::ostringstream out;
        out << "fixed(" << value_ << ')';
        return out.str();
      }
    }
    return "";
  }

  // "L" / "S" as used in report tables.
  std::string_view short_name() const {
    return kind_ == RegimeKind::kLoose ? "L" : kind_ == RegimeKind::kStrict ? "S" : "F";
  }

  friend bool operator==(const AttackRegime&, const AttackRegime&) = default;

 private:
  AttackRegime(RegimeKind kind, double value) : kind_(kind), value_(value) {}
  RegimeKind kind_;
  double value_;
};

inline std::optional<AttackRegime> parse_regime(std::string_view text) {
  if (text == "loose" || text == "L" || text == "l") return AttackRegime::loose();
  if (text == "strict" || text == "S" || text == "s") return AttackRegime::strict();
  return std::nullopt;
}

// The set of parameter values a regime may produce.
struct RegimeDomain {
  std::vector<Interval> intervals;
  std::vector<double> values;

  bool contains(double v) const {
    if (!values.empty()) return std::find(values.begin(), values.end(), v) != values.end();
    return std::any_of(intervals.begin(), intervals.end(),
                       [v](const Interval& i) { return i.contains(v); });
  }
};

inline RegimeDomain full_domain(AttackId id) {
  const AttackInfo& info = attack_info(id);
  if (info.is_discrete()) return {{}, info.values};
  return {{info.range}, {}};
}

inline RegimeDomain regime_domain(AttackId id, RegimeKind kind) {
  const AttackInfo& info = attack_info(id);
  if (kind == RegimeKind::kFixed) return full_domain(id);
  const bool loose = kind == RegimeKind::kLoose;
  const Interval r = info.range;
  const double t = info.threshold;
  switch (info.severity) {
    case Severity::kLowIsStrict:
      return {{loose ? Interval{t, r.hi} : Interval{r.lo, t}}, {}};
    case Severity::kHighIsStrict:
      return {{loose ? Interval{r.lo, t} : Interval{t, r.hi}}, {}};
    case Severity::kAwayFromCenter: {
      const Interval inner{t - info.band, t + info.band};
      if (loose) return {{inner}, {}};
      return {{Interval{r.lo, inner.lo}, Interval{inner.hi, r.hi}}, {}};
    }
    case Severity::kDiscrete:
      return {{}, loose ? info.loose_values : info.strict_values};
    case Severity::kNone:
      return {};
  }
  return {};
}

inline void validate_parameter(AttackId id, std::optional<double> parameter) {
  const AttackInfo& info = attack_info(id);
  if (!info.has_parameter()) {
    if (parameter) {
      throw InvalidArgument(std::string(info.code) + " takes no parameter");
    }
    return;
  }
  if (!parameter || !full_domain(id).contains(*parameter)) {
    std::ostringstream msg;
    msg << info.code << ": parameter ";
    if (parameter) msg << *parameter; else msg << "(none)";
    msg << " outside the attack's range";
    throw InvalidArgument(msg.str());
  }
}

// Uniform draw over the regime's sub-range (length-weighted across the two
// sides for centered attacks, uniform over members for discrete lists).
// Returns nullopt for PI.
inline std::optional<double> sample_parameter(AttackId id, const AttackRegime& regime,
                                              std::uint64_t seed) {
  const AttackInfo& info = attack_info(id);
  if (regime.kind() == RegimeKind::kFixed) {
    if (!info.has_parameter()) return std::nullopt;
    validate_parameter(id, regime.fixed_value());
    return regime.fixed_value();
  }
  if (!info.has_parameter()) return std::nullopt;
  const RegimeDomain domain = regime_domain(id, regime.kind());
  Rng rng(mix_seed(seed, "parameter"));
  if (!domain.values.empty()) {
    return domain.values[rng.below(domain.values.size())];
  }
  double total = 0.0;
  for (const auto& i : domain.intervals) total += i.length();
  double u = rng.uniform() * total;
  for (const auto& i : domain.intervals) {
    if (u <= i.length()) return std::min(i.hi, i.lo + u);
    u -= i.length();
  }
  return domain.intervals.back().hi;
}

// One concrete attack instance. `resource` names the noise clip (BN) or
// impulse response (RV) when the attack needs one.
struct AttackSpec {
  AttackId id = AttackId::PI;
  std::optional<double> parameter;
  AttackRegime regime = AttackRegime::loose();
  std::uint64_t seed = 0;
  std::string resource;

  static AttackSpec make(AttackId id, const AttackRegime& regime, std::uint64_t seed,
                         std::string resource = {}) {
    return AttackSpec{id, sample_parameter(id, regime, seed), regime, seed, std::move(resource)};
  }

  void validate() const { validate_parameter(id, parameter); }

  // Seed for randomness inside the attack, decorrelated from the draw that
  // picked the parameter.
  std::uint64_t internal_seed() const { return mix_seed(seed, "attack"); }
};

}  // namespace rawbench

#endif  // RAWBENCH_ATTACKS_CATALOG_HPP_
