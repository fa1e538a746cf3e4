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

#ifndef RAWBENCH_HARNESS_PLAN_HPP_
#define RAWBENCH_HARNESS_PLAN_HPP_

// A run plan is the ordered list of work cells: for every clip and
// watermarker, one clean cell followed by one cell per selected
// (attack, regime). Attack parameters and BN/RV resources are drawn here, so
// the plan alone fixes every random choice of the run.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rawbench/attacks/catalog.hpp"
#include "rawbench/harness/config.hpp"
#include "rawbench/harness/manifest.hpp"
#include "rawbench/random.hpp"

namespace rawbench {

struct WorkCell {
  std::size_t index = 0;
  std::string id;  // unique within the plan; the resume key
  std::size_t clip_index = 0;
  std::size_t watermarker_index = 0;
  std::optional<AttackSpec> attack;  // empty for the clean cell
  std::uint64_t seed = 0;

  bool clean() const { return !attack.has_value(); }
  std::uint64_t message_seed() const { return mix_seed(seed, "message"); }
};

struct RunPlan {
  DatasetManifest manifest;
  RunConfig config;
  std::vector<WorkCell> cells;

  const ManifestEntry& clip(const WorkCell& cell) const { return manifest.entries[cell.clip_index]; }
  const WatermarkerSpec& watermarker(const WorkCell& cell) const {
    return config.watermarkers[cell.watermarker_index];
  }
};

inline std::uint64_t cell_seed(std::uint64_t master_seed, const std::string& clip_id,
                               std::string_view attack, std::string_view regime) {
  return mix_seed(mix_seed(mix_seed(master_seed, clip_id), attack), regime);
}

inline std::string cell_id(const std::string& clip_id, const std::string& watermarker,
                           std::string_view attack, std::string_view regime) {
  return clip_id + "|" + watermarker + "|" + std::string(attack) + "|" + std::string(regime);
}

inline RunPlan plan_run(const DatasetManifest& manifest, const RunConfig& config) {
  validate_config(config);
  RunPlan plan{manifest, config, {}};
  for (std::size_t c = 0; c < manifest.entries.size(); ++c) {
    const std::string& clip_id = manifest.entries[c].id;
    for (std::size_t w = 0; w < config.watermarkers.size(); ++w) {
      const std::string& wm = config.watermarkers[w].name;
      WorkCell clean;
      clean.index = plan.cells.size();
      clean.id = cell_id(clip_id, wm, "clean", "-");
      clean.clip_index = c;
      clean.watermarker_index = w;
      clean.seed = cell_seed(config.master_seed, clip_id, "clean", "-");
      plan.cells.push_back(std::move(clean));

      for (const auto& selection : config.attacks) {
        const std::string_view code = attack_code(selection.id);
        const std::string regime = selection.regime.name();
        WorkCell cell;
        cell.index = plan.cells.size();
        cell.id = cell_id(clip_id, wm, code, regime);
        cell.clip_index = c;
        cell.watermarker_index = w;
        cell.seed = cell_seed(config.master_seed, clip_id, code, regime);
        std::string resource;
        const auto& pool = selection.id == AttackId::BN   ? manifest.noise
                           : selection.id == AttackId::RV ? manifest.impulse_responses
                                                          : std::vector<std::filesystem::path>{};
        if (!pool.empty()) {
          Rng rng(mix_seed(cell.seed, "resource"));
          resource = pool[rng.below(pool.size())].string();
        }
        cell.attack = AttackSpec::make(selection.id, selection.regime, cell.seed, resource);
        plan.cells.push_back(std::move(cell));
      }
    }
  }
  return plan;
}

inline nlohmann::json cell_to_json(const RunPlan& plan, const WorkCell& cell) {
  nlohmann::json j = {{"cell", cell.id},
                      {"index", cell.index},
                      {"clip", plan.clip(cell).id},
                      {"watermarker", plan.watermarker(cell).name},
                      {"seed", cell.seed}};
  if (cell.clean()) {
    j["attack"] = "clean";
  } else {
    j["attack"] = std::string(attack_code(cell.attack->id));
    j["regime"] = cell.attack->regime.name();
    j["parameter"] = cell.attack->parameter ? nlohmann::json(*cell.attack->parameter) : nlohmann::json();
    if (!cell.attack->resource.empty()) j["resource"] = cell.attack->resource;
  }
  return j;
}

}  // namespace rawbench

#endif  // RAWBENCH_HARNESS_PLAN_HPP_
