// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ergofit/limits.hpp"
#include "ergofit/statistics.hpp"

namespace ergofit {

// Empirical thresholds c_eps for one limit law: P(limit > c_eps) = eps,
// estimated as (1-eps)-quantiles of n_replicates Monte Carlo draws.
struct CalibrationTable {
  std::string law_id;
  std::vector<double> epsilons;    // ascending
  std::vector<double> thresholds;  // aligned with epsilons, decreasing
  std::int64_t n_replicates = 0;
  std::uint64_t seed = 0;
  GridMeta grid;
  std::string created_at;  // informational; excluded from equality

  double threshold_for(double eps) const;

  bool operator==(const CalibrationTable& o) const {
    return law_id == o.law_id && epsilons == o.epsilons && thresholds == o.thresholds &&
           n_replicates == o.n_replicates && seed == o.seed && grid == o.grid;
  }
};

CalibrationTable calibrate(const LimitLaw& law, std::vector<double> epsilons, int n_replicates,
                           std::uint64_t seed);

enum class Decision { accept, reject };
std::string decision_name(Decision d);

// Rejection iff value > c_eps (strict: a value equal to the threshold is
// accepted). The statistic's law must match the table's law.
Decision decide(const StatValue& stat, const CalibrationTable& table, double eps);

// JSON file, schema version 1, numbers in 17-significant-digit decimal text.
void save_table(const CalibrationTable& table, const std::filesystem::path& path);
CalibrationTable load_table(const std::filesystem::path& path);

}  // namespace ergofit
