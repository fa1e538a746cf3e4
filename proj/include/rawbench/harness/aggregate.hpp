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

#ifndef RAWBENCH_HARNESS_AGGREGATE_HPP_
#define RAWBENCH_HARNESS_AGGREGATE_HPP_

// Report tables computed from a record set. Failed records never enter a
// mean; they are counted per group instead.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rawbench/attacks/catalog.hpp"
#include "rawbench/error.hpp"
#include "rawbench/harness/record.hpp"
#include "rawbench/metrics.hpp"

namespace rawbench {

struct GroupStats {
  std::size_t ok = 0;
  std::size_t failed = 0;
  double bitwise_sum = 0.0;
  double message_sum = 0.0;

  void add(const EvalRecord& r) {
    if (!r.ok()) {
      ++failed;
      return;
    }
    ++ok;
    bitwise_sum += r.bitwise_acc.value_or(0.0);
    message_sum += r.message_acc.value_or(0);
  }
  std::optional<double> bitwise() const {
    if (ok == 0) return std::nullopt;
    return bitwise_sum / static_cast<double>(ok);
  }
  std::optional<double> message() const {
    if (ok == 0) return std::nullopt;
    return message_sum / static_cast<double>(ok);
  }
  bool empty() const { return ok == 0 && failed == 0; }
};

// One row per (watermarker, regime); columns follow kAllAttacks.
struct GridRow {
  std::string watermarker;
  std::string regime;
  std::array<GroupStats, kAttackCount> cells;
};

// Strict attacks only, split by domain.
struct DomainRow {
  std::string watermarker;
  std::array<GroupStats, kAllDomains.size()> cells;
};

struct CleanRow {
  std::string watermarker;
  std::optional<double> si_snr;
  std::optional<double> mcd;
  std::optional<double> mos_lqo;
  std::optional<double> bitwise;
  std::optional<double> message;
  std::optional<double> tpr_at_zero_fpr;
  std::size_t n = 0;
  std::size_t failed = 0;
};

struct ReportTables {
  std::vector<GridRow> grid;
  std::vector<DomainRow> domain;
  std::vector<CleanRow> clean;
};

namespace detail {

inline std::size_t attack_column(const std::string& code) {
  for (std::size_t i = 0; i < kAllAttacks.size(); ++i) {
    if (attack_code(kAllAttacks[i]) == code) return i;
  }
  throw InvalidArgument("unknown attack code in records: " + code);
}

inline std::size_t domain_column(Domain d) {
  return static_cast<std::size_t>(std::find(kAllDomains.begin(), kAllDomains.end(), d) -
                                  kAllDomains.begin());
}

inline int regime_rank(const std::string& regime) {
  return regime == "loose" ? 0 : regime == "strict" ? 1 : 2;
}

class MeanOf {
 public:
  void add(const std::optional<double>& v) {
    if (v) {
      sum_ += *v;
      ++n_;
    }
  }
  std::optional<double> get() const {
    if (n_ == 0) return std::nullopt;
    return sum_ / static_cast<double>(n_);
  }

 private:
  double sum_ = 0.0;
  std::size_t n_ = 0;
};

}  // namespace detail

inline ReportTables aggregate(const std::vector<EvalRecord>& records) {
  if (records.empty()) throw InvalidArgument("aggregate: no records");

  std::vector<std::string> watermarkers;
  for (const auto& r : records) {
    if (std::find(watermarkers.begin(), watermarkers.end(), r.watermarker) == watermarkers.end()) {
      watermarkers.push_back(r.watermarker);
    }
  }

  ReportTables t;
  for (const auto& wm : watermarkers) {
    std::vector<std::string> regimes;
    for (const auto& r : records) {
      if (r.watermarker == wm && !r.clean() &&
          std::find(regimes.begin(), regimes.end(), r.regime) == regimes.end()) {
        regimes.push_back(r.regime);
      }
    }
    std::stable_sort(regimes.begin(), regimes.end(), [](const auto& a, const auto& b) {
      return detail::regime_rank(a) < detail::regime_rank(b);
    });
    for (const auto& regime : regimes) {
      GridRow row{wm, regime, {}};
      for (const auto& r : records) {
        if (r.watermarker == wm && !r.clean() && r.regime == regime) {
          row.cells[detail::attack_column(r.attack)].add(r);
        }
      }
      t.grid.push_back(std::move(row));
    }

    DomainRow drow{wm, {}};
    for (const auto& r : records) {
      if (r.watermarker == wm && !r.clean() && r.regime == "strict") {
        drow.cells[detail::domain_column(r.domain)].add(r);
      }
    }
    t.domain.push_back(std::move(drow));

    CleanRow crow;
    crow.watermarker = wm;
    detail::MeanOf si, mcd, mos;
    GroupStats acc;
    std::vector<double> marked, unmarked;
    bool scores_complete = true;
    for (const auto& r : records) {
      if (r.watermarker != wm || !r.clean()) continue;
      acc.add(r);
      if (!r.ok()) continue;
      si.add(r.si_snr);
      mcd.add(r.mcd);
      mos.add(r.mos_lqo);
      if (r.presence && r.presence_unmarked) {
        marked.push_back(*r.presence);
        unmarked.push_back(*r.presence_unmarked);
      } else {
        scores_complete = false;
      }
    }
    crow.si_snr = si.get();
    crow.mcd = mcd.get();
    crow.mos_lqo = mos.get();
    crow.bitwise = acc.bitwise();
    crow.message = acc.message();
    if (scores_complete && !marked.empty()) crow.tpr_at_zero_fpr = tpr_at_zero_fpr(marked, unmarked);
    crow.n = acc.ok;
    crow.failed = acc.failed;
    t.clean.push_back(std::move(crow));
  }
  return t;
}

}  // namespace rawbench

#endif  // RAWBENCH_HARNESS_AGGREGATE_HPP_
