// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergofit/calibration.hpp"
#include "ergofit/registry.hpp"
#include "ergofit/statistics.hpp"

namespace ergofit {

enum class StudyKind { size, power, paramfree, limitmatch };

std::string study_kind_name(StudyKind k);
StudyKind parse_study_kind(const std::string& s);

struct StudyConfig {
  StudyKind study = StudyKind::size;
  ModelSpec model;                        // H0 model (family or simple)
  std::optional<Theta> theta;             // simulation theta for family H0
  std::optional<ModelSpec> true_model;    // power: data-generating drift
  std::optional<Theta> true_theta;        // power with a family true model
  double horizon = 500.0;
  double dt = 0.01;
  std::vector<double> t_ladder;           // power only; empty -> {horizon}
  int n_replicates = 300;
  std::vector<StatisticKind> stats;
  std::vector<double> epsilons;
  std::uint64_t seed = 1;
  std::vector<Theta> thetas;              // paramfree ensembles
  int limit_n = 10000;                    // limitmatch sampler ensemble size
  int grid_m = 400;
  bool increment_sigma_weight = false;    // weight KSIncrement sums by 1/sigma
  std::map<std::string, std::string> tables;  // law_id -> table path
  bool autocalibrate = true;
  int calibration_n = 100000;
  std::uint64_t calibration_seed = 0;     // 0 -> derived from seed
  std::string out_dir = "report";

  nlohmann::json echo;  // the validated config, re-serializable

  static StudyConfig from_json(const nlohmann::json& doc);
  static StudyConfig from_file(const std::filesystem::path& path);
};

struct StatRow {
  int replicate = 0;
  StatisticKind kind;
  double value = 0.0;
  std::optional<Theta> theta_hat;
  bool boundary_hit_alpha = false;
  bool boundary_hit_beta = false;
};

struct RowGroup {
  std::string label;  // file stem, e.g. "rows", "rows_T250", "rows_theta1"
  double horizon = 0.0;
  std::vector<StatRow> rows;
};

struct StudyReport {
  StudyConfig config;
  std::vector<RowGroup> groups;
  std::vector<std::pair<std::string, std::vector<double>>> extra_samples;  // e.g. limit draws
  std::map<std::string, CalibrationTable> tables_used;
  nlohmann::json summary;
  double wall_clock_sec = 0.0;

  // rows*.csv (+ extra sample csvs, tables) and summary.json under dir.
  void write(const std::filesystem::path& dir) const;
};

std::string rows_csv_text(const RowGroup& group);

StudyReport run_study(const StudyConfig& config);

// Rejection rate over rows of one statistic kind given a threshold.
double rejection_rate(const std::vector<StatRow>& rows, const StatisticKind& kind,
                      double threshold);

}  // namespace ergofit
