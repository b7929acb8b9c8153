// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#include "ergofit/calibration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <json.hpp>

#include "ergofit/errors.hpp"
#include "ergofit/text_io.hpp"

namespace ergofit {

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

double CalibrationTable::threshold_for(double eps) const {
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (std::abs(epsilons[i] - eps) <= 1e-12) return thresholds[i];
  }
  throw validation_error("calibration table for '" + law_id + "' has no epsilon " +
                         format_double_short(eps));
}

CalibrationTable calibrate(const LimitLaw& law, std::vector<double> epsilons,
                           int n_replicates, std::uint64_t seed) {
  if (epsilons.empty()) throw validation_error("calibrate: no epsilons given");
  std::sort(epsilons.begin(), epsilons.end());
  for (double e : epsilons) {
    if (!(e > 0.0 && e < 1.0)) throw validation_error("calibrate: epsilon outside (0,1)");
  }
  if (n_replicates < 1000) {
    throw validation_error("calibrate: n_replicates must be at least 1000");
  }
  for (double e : epsilons) {
    // Both tails need enough order statistics: eps near 0 puts c_eps in the
    // far upper tail, eps near 1 in the far lower tail.
    const double tail = static_cast<double>(n_replicates) * std::min(e, 1.0 - e);
    if (tail < 20.0) {
      throw validation_error("calibrate: n_replicates too small for epsilon=" +
                             format_double_short(e) + " (need n*min(eps,1-eps) >= 20, have " +
                             format_double_short(tail) + ")");
    }
  }

  std::vector<double> samples = draw_limit_samples(law, n_replicates, seed);
  std::sort(samples.begin(), samples.end());

  CalibrationTable table;
  table.law_id = law.law_id();
  table.epsilons = epsilons;
  table.thresholds.reserve(epsilons.size());
  const std::size_t n = samples.size();
  for (double e : epsilons) {
    // order statistic ceil((1-e) n), 1-based; ties resolved low by indexing.
    std::size_t k = static_cast<std::size_t>(std::ceil((1.0 - e) * static_cast<double>(n)));
    k = std::min(std::max<std::size_t>(k, 1), n);
    table.thresholds.push_back(samples[k - 1]);
  }
  table.n_replicates = n_replicates;
  table.seed = seed;
  table.grid = law.grid_meta();
  table.created_at = utc_timestamp();
  return table;
}

std::string decision_name(Decision d) { return d == Decision::accept ? "accept" : "reject"; }

Decision decide(const StatValue& stat, const CalibrationTable& table, double eps) {
  if (stat.meta.law_id != table.law_id) {
    throw validation_error("statistic " + stat_kind_name(stat.kind) + " calibrates against '" +
                           stat.meta.law_id + "' but the table holds '" + table.law_id + "'");
  }
  const double c = table.threshold_for(eps);
  return stat.value > c ? Decision::reject : Decision::accept;
}

void save_table(const CalibrationTable& table, const std::filesystem::path& path) {
  // Emitted by hand so every number is 17-significant-digit decimal text.
  std::string out = "{\n  \"version\": 1,\n";
  out += "  \"law_id\": \"" + table.law_id + "\",\n";
  out += "  \"epsilons\": [";
  for (std::size_t i = 0; i < table.epsilons.size(); ++i) {
    if (i) out += ", ";
    out += format_double(table.epsilons[i]);
  }
  out += "],\n  \"thresholds\": [";
  for (std::size_t i = 0; i < table.thresholds.size(); ++i) {
    if (i) out += ", ";
    out += format_double(table.thresholds[i]);
  }
  out += "],\n";
  out += "  \"n_replicates\": " + std::to_string(table.n_replicates) + ",\n";
  out += "  \"seed\": " + std::to_string(table.seed) + ",\n";
  out += "  \"grid\": {";
  if (table.grid.field) {
    out += "\"L\": " + format_double(table.grid.field->half_width) +
           ", \"dz\": " + format_double(table.grid.field->dz) +
           ", \"m_y\": " + std::to_string(table.grid.field->m_y);
  } else if (table.grid.n_steps) {
    out += "\"n_steps\": " + std::to_string(*table.grid.n_steps);
  }
  out += "},\n";
  out += "  \"created_at\": \"" + table.created_at + "\"\n}\n";
  write_text_file(path, out);
}

CalibrationTable load_table(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("calibration table " + path.string() + ": not valid JSON (" +
                           e.what() + ")");
  }
  try {
    if (!doc.contains("version") || doc["version"].get<int>() != 1) {
      throw validation_error("calibration table " + path.string() + ": unsupported version");
    }
    CalibrationTable table;
    table.law_id = doc.at("law_id").get<std::string>();
    table.epsilons = doc.at("epsilons").get<std::vector<double>>();
    table.thresholds = doc.at("thresholds").get<std::vector<double>>();
    table.n_replicates = doc.at("n_replicates").get<std::int64_t>();
    table.seed = doc.at("seed").get<std::uint64_t>();
    const auto& grid = doc.at("grid");
    if (grid.contains("n_steps")) {
      table.grid.n_steps = grid["n_steps"].get<int>();
    } else if (grid.contains("L")) {
      LimitGrid g;
      g.half_width = grid.at("L").get<double>();
      g.dz = grid.at("dz").get<double>();
      g.m_y = grid.at("m_y").get<int>();
      table.grid.field = g;
    }
    table.created_at = doc.value("created_at", "");
    if (table.epsilons.size() != table.thresholds.size() || table.epsilons.empty()) {
      throw validation_error("calibration table " + path.string() + ": eps/threshold size mismatch");
    }
    if (!std::is_sorted(table.epsilons.begin(), table.epsilons.end())) {
      throw validation_error("calibration table " + path.string() + ": epsilons not sorted");
    }
    for (std::size_t i = 1; i < table.thresholds.size(); ++i) {
      if (!(table.thresholds[i] < table.thresholds[i - 1])) {
        throw validation_error("calibration table " + path.string() +
                               ": thresholds not strictly decreasing in epsilon");
      }
    }
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("calibration table " + path.string() + ": bad schema (" + e.what() +
                           ")");
  }
}

}  // namespace ergofit
