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

#include <set>
#include <string>

#include "rawbench/attacks/catalog.hpp"

namespace rawbench {
namespace {

using enum AttackId;

// Expected sub-ranges, written out per attack rather than derived from the
// catalog, so a wrong threshold or direction in the catalog shows up here.
struct Expectation {
  AttackId id;
  std::vector<Interval> loose;
  std::vector<Interval> strict;
};

const std::vector<Expectation>& continuous_expectations() {
  static const std::vector<Expectation> e = {
      {GN, {{40, 60}}, {{20, 40}}},
      {BN, {{35, 60}}, {{20, 35}}},
      {RV, {{6, 12}}, {{0, 6}}},
      {DC, {{-18, -6}}, {{-36, -18}}},
      {DE, {{-12, -6}}, {{-16, -12}}},
      {LM, {{-18, -6}}, {{-36, -18}}},
      {LP, {{6000, 8000}}, {{3500, 6000}}},
      {HP, {{10, 250}}, {{250, 500}}},
      {EQ, {{-0.375, 0.375}}, {{-0.75, -0.375}, {0.375, 0.75}}},
      {TS, {{0.95, 1.05}}, {{0.75, 0.95}, {1.05, 1.25}}},
      {TJ, {{0.10, 0.20}}, {{0.20, 0.50}}},
      {GA, {{0.5, 1.5}}, {{0.2, 0.5}, {1.5, 5.0}}},
      {PS, {{-0.05, 0.05}}, {{-0.10, -0.05}, {0.05, 0.10}}},
  };
  return e;
}

struct DiscreteExpectation {
  AttackId id;
  std::set<double> loose;
  std::set<double> strict;
};

const std::vector<DiscreteExpectation>& discrete_expectations() {
  static const std::vector<DiscreteExpectation> e = {
      {QN, {13, 14, 15, 16}, {8, 9, 10, 11, 12}},
      {EN, {32}, {16}},
      {DA, {9}, {7, 8}},
      {MP, {128, 256}, {64}},
      {OG, {64, 128, 256}, {48}},
      {AA, {128, 256}, {64}},
  };
  return e;
}

bool in_any(double v, const std::vector<Interval>& intervals) {
  for (const auto& i : intervals) {
    if (v >= i.lo - 1e-12 && v <= i.hi + 1e-12) return true;
  }
  return false;
}

TEST(AttackCatalogTest, TwentyCodesInOrder) {
  const std::vector<std::string> codes = {"GN", "BN", "RV", "DC", "DE", "LM", "LP",
                                          "HP", "EQ", "TS", "TJ", "PI", "GA", "QN",
                                          "PS", "EN", "DA", "MP", "OG", "AA"};
  ASSERT_EQ(kAllAttacks.size(), codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    EXPECT_EQ(attack_code(kAllAttacks[i]), codes[i]);
    EXPECT_EQ(parse_attack_id(codes[i]), kAllAttacks[i]);
  }
  EXPECT_FALSE(parse_attack_id("XX").has_value());
}

TEST(AttackCatalogTest, CategoriesCoverSixGroups) {
  std::set<AttackCategory> seen;
  for (AttackId id : kAllAttacks) seen.insert(attack_info(id).category);
  EXPECT_EQ(seen.size(), 6u);
  EXPECT_EQ(attack_info(MP).category, AttackCategory::kConventionalCompression);
  EXPECT_EQ(attack_info(EN).category, AttackCategory::kNeuralCompression);
  EXPECT_EQ(attack_info(PS).category, AttackCategory::kLowLevel);
}

TEST(RegimeSamplingTest, ContinuousDrawsLandInTheirSide) {
  for (const auto& e : continuous_expectations()) {
    std::size_t lo_side = 0, hi_side = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
      const auto loose = sample_parameter(e.id, AttackRegime::loose(), s);
      const auto strict = sample_parameter(e.id, AttackRegime::strict(), s);
      ASSERT_TRUE(loose && strict);
      EXPECT_TRUE(in_any(*loose, e.loose)) << attack_code(e.id) << " loose " << *loose;
      EXPECT_TRUE(in_any(*strict, e.strict)) << attack_code(e.id) << " strict " << *strict;
      if (e.strict.size() == 2) (*strict < e.loose[0].lo ? lo_side : hi_side)++;
    }
    if (e.strict.size() == 2) {
      EXPECT_GT(lo_side, 0u) << attack_code(e.id);
      EXPECT_GT(hi_side, 0u) << attack_code(e.id);
    }
  }
}

TEST(RegimeSamplingTest, DiscreteDrawsUseEveryListedValue) {
  for (const auto& e : discrete_expectations()) {
    std::set<double> loose_seen, strict_seen;
    for (std::uint64_t s = 0; s < 1000; ++s) {
      loose_seen.insert(*sample_parameter(e.id, AttackRegime::loose(), s));
      strict_seen.insert(*sample_parameter(e.id, AttackRegime::strict(), s));
    }
    EXPECT_EQ(loose_seen, e.loose) << attack_code(e.id);
    EXPECT_EQ(strict_seen, e.strict) << attack_code(e.id);
  }
}

TEST(RegimeSamplingTest, ContinuousDrawsAreRoughlyUniform) {
  // GN loose over [40, 60]: mean near 50 and both halves populated.
  double sum = 0.0;
  int upper = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const double v = *sample_parameter(GN, AttackRegime::loose(), s);
    sum += v;
    upper += v > 50.0;
  }
  EXPECT_NEAR(sum / 1000.0, 50.0, 1.0);
  EXPECT_NEAR(upper, 500, 60);
}

TEST(RegimeSamplingTest, PolarityInversionHasNoParameter) {
  EXPECT_FALSE(sample_parameter(PI, AttackRegime::loose(), 1).has_value());
  EXPECT_FALSE(sample_parameter(PI, AttackRegime::strict(), 1).has_value());
  EXPECT_NO_THROW(validate_parameter(PI, std::nullopt));
  EXPECT_THROW(validate_parameter(PI, 1.0), InvalidArgument);
}

TEST(RegimeSamplingTest, Deterministic) {
  for (AttackId id : kAllAttacks) {
    EXPECT_EQ(sample_parameter(id, AttackRegime::strict(), 42),
              sample_parameter(id, AttackRegime::strict(), 42));
  }
  EXPECT_NE(sample_parameter(GN, AttackRegime::strict(), 1),
            sample_parameter(GN, AttackRegime::strict(), 2));
}

TEST(RegimeSamplingTest, FixedValues) {
  EXPECT_EQ(sample_parameter(GN, AttackRegime::fixed(25.0), 0), 25.0);
  EXPECT_THROW(sample_parameter(GN, AttackRegime::fixed(70.0), 0), InvalidArgument);
  EXPECT_THROW(sample_parameter(MP, AttackRegime::fixed(96.0), 0), InvalidArgument);
  EXPECT_EQ(sample_parameter(QN, AttackRegime::fixed(10.0), 0), 10.0);
}

TEST(RegimeSamplingTest, LooseAndStrictCoverFullRange) {
  for (const auto& e : continuous_expectations()) {
    const Interval full = attack_info(e.id).range;
    double covered = 0.0;
    for (const auto& i : e.loose) covered += i.length();
    for (const auto& i : e.strict) covered += i.length();
    EXPECT_NEAR(covered, full.length(), 1e-12) << attack_code(e.id);
  }
  for (const auto& e : discrete_expectations()) {
    std::set<double> all = e.loose;
    all.insert(e.strict.begin(), e.strict.end());
    const auto& values = attack_info(e.id).values;
    EXPECT_EQ(all, std::set<double>(values.begin(), values.end())) << attack_code(e.id);
  }
}

TEST(RegimeTest, ParseAndNames) {
  EXPECT_EQ(parse_regime("loose"), AttackRegime::loose());
  EXPECT_EQ(parse_regime("S"), AttackRegime::strict());
  EXPECT_FALSE(parse_regime("medium").has_value());
  EXPECT_EQ(AttackRegime::strict().short_name(), "S");
  EXPECT_EQ(AttackRegime::loose().name(), "loose");
}

TEST(AttackSpecTest, MakeSamplesAndValidates) {
  const auto spec = AttackSpec::make(MP, AttackRegime::strict(), 9);
  EXPECT_EQ(spec.parameter, 64.0);
  EXPECT_NO_THROW(spec.validate());
  AttackSpec bad{GN, 10.0, AttackRegime::strict(), 0, {}};
  EXPECT_THROW(bad.validate(), InvalidArgument);
  EXPECT_NE(spec.internal_seed(), spec.seed);
}

}  // namespace
}  // namespace rawbench
