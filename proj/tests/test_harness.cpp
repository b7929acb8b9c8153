// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>

#include "ergofit/errors.hpp"
#include "ergofit/harness.hpp"
#include "ergofit/numerics.hpp"
#include "ergofit/text_io.hpp"

using namespace ergofit;

namespace {

nlohmann::json base_config() {
  nlohmann::json cfg;
  cfg["version"] = 1;
  cfg["study"] = "size";
  cfg["model"] = "simple:ou";
  cfg["T"] = 50.0;
  cfg["dt"] = 0.01;
  cfg["n_replicates"] = 60;
  cfg["stats"] = {"ADF:CvM"};
  cfg["epsilons"] = {0.1};
  cfg["seed"] = 11;
  cfg["autocalibrate"] = true;
  cfg["calibration_n"] = 2000;
  cfg["calibration_seed"] = 12;
  return cfg;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config validation fails fast") {
  auto cfg = base_config();
  cfg["n_replicates"] = 20;
  CHECK_THROWS_AS(StudyConfig::from_json(cfg), validation_error);

  cfg = base_config();
  cfg["stats"] = nlohmann::json::array();
  CHECK_THROWS_AS(StudyConfig::from_json(cfg), validation_error);

  cfg = base_config();
  cfg["stats"] = {"ParamEDF:CvM"};  // incompatible with a simple model
  CHECK_THROWS_AS(StudyConfig::from_json(cfg), validation_error);

  cfg = base_config();
  cfg["model"] = "family:gamma=0.5,sigma=1,box=-2:2x0.5:3";
  cfg["stats"] = {"ParamEDF:CvM"};
  cfg["theta"] = {0.0, 1.0};
  try {
    StudyConfig::from_json(cfg);
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    CHECK(std::string(e.what()).find("unsupported regime gamma=0.5") != std::string::npos);
  }

  cfg = base_config();
  cfg["model"] = "family:gamma=1,sigma=1,box=-2:2x0.5:3";
  cfg["stats"] = {"ParamEDF:CvM"};
  CHECK_THROWS_AS(StudyConfig::from_json(cfg), validation_error);  // family needs theta

  cfg = base_config();
  cfg["model"] = "family:gamma=1,sigma=1,box=-2:2x0.5:3";
  cfg["stats"] = {"ParamEDF:CvM"};
  cfg["theta"] = {5.0, 1.0};  // outside the box
  CHECK_THROWS_AS(StudyConfig::from_json(cfg), validation_error);

  cfg = base_config();
  cfg["autocalibrate"] = false;  // no table for int_w2
  CHECK_THROWS_AS(StudyConfig::from_json(cfg), validation_error);

  cfg = base_config();
  cfg["study"] = "power";  // power needs true_model
  CHECK_THROWS_AS(StudyConfig::from_json(cfg), validation_error);

  cfg = base_config();
  cfg["study"] = "paramfree";
  CHECK_THROWS_AS(StudyConfig::from_json(cfg), validation_error);  // needs family + thetas

  cfg = base_config();
  cfg["study"] = "paramfree";
  cfg["model"] = "family:gamma=1,sigma=1,box=-2:2x0.5:3";
  cfg["stats"] = {"ParamEDF:CvM", "ParamDensity:CvM"};  // exactly one kind
  cfg["thetas"] = {{0.0, 1.0}, {0.5, 1.0}};
  CHECK_THROWS_AS(StudyConfig::from_json(cfg), validation_error);

  cfg = base_config();
  cfg["study"] = "bogus";
  CHECK_THROWS_AS(StudyConfig::from_json(cfg), validation_error);
}

TEST_CASE("tiny-table refusal propagates from calibrate") {
  auto cfg = base_config();
  cfg["epsilons"] = {1.0};  // eps = 1 impossible
  CHECK_THROWS_AS(StudyConfig::from_json(cfg), validation_error);

  cfg = base_config();
  cfg["epsilons"] = {0.9999};
  const StudyConfig parsed = StudyConfig::from_json(cfg);
  CHECK_THROWS_AS(run_study(parsed), validation_error);
}

TEST_CASE("tail-check warnings surface in the study summary") {
  auto cfg = base_config();
  // double-well drift table: outward in a band beyond the default check
  // radius, strongly inward at the edges (normalizable on the truncation)
  const auto drift = std::filesystem::temp_directory_path() / "ergofit_dw.csv";
  write_text_file(drift,
                  "x,s0\n-4.3,40.8\n-3,0\n-2,-10\n0,0\n2,10\n3,0\n4.3,-40.8\n");
  cfg["model"] = "simple:table=" + drift.string() + ",trunc=-4.3:4.3";
  cfg["n_replicates"] = 50;
  cfg["T"] = 20.0;
  const StudyReport report = run_study(StudyConfig::from_json(cfg));
  REQUIRE(report.summary.contains("warnings"));
  CHECK(report.summary["warnings"][0].get<std::string>().find("tail sign") != std::string::npos);
  std::filesystem::remove(drift);
}

TEST_CASE("size study: summary equals row-level recomputation, rows reproduce bitwise") {
  const StudyConfig cfg = StudyConfig::from_json(base_config());
  const StudyReport report = run_study(cfg);
  REQUIRE(report.groups.size() == 1);
  const auto& rows = report.groups[0].rows;
  CHECK(static_cast<int>(rows.size()) == cfg.n_replicates);

  const auto& entry = report.summary["rejections"][0];
  const double thr = entry["threshold"].get<double>();
  const double rate = entry["rejection_rate"].get<double>();
  CHECK(rate == rejection_rate(rows, cfg.stats[0], thr));
  CHECK(rate >= 0.0);
  CHECK(rate <= 1.0);

  // bitwise determinism of the row artifact
  const StudyReport again = run_study(cfg);
  CHECK(rows_csv_text(report.groups[0]) == rows_csv_text(again.groups[0]));

  // files land where requested
  const auto dir = std::filesystem::temp_directory_path() / "ergofit_report_test";
  std::filesystem::remove_all(dir);
  report.write(dir);
  CHECK(std::filesystem::exists(dir / "rows.csv"));
  CHECK(std::filesystem::exists(dir / "summary.json"));
  CHECK(std::filesystem::exists(dir / "tables" / "int_w2.json"));
  const CalibrationTable t = load_table(dir / "tables" / "int_w2.json");
  CHECK(t.law_id == "int_w2");
  std::filesystem::remove_all(dir);
}

TEST_CASE("composite size study carries theta_hat into the rows") {
  auto cfg = base_config();
  cfg["model"] = "family:gamma=1,sigma=1,box=-2:2x0.5:3";
  cfg["stats"] = {"ParamEDF:CvM", "ParamDensity:CvM"};
  cfg["theta"] = {0.5, 1.0};
  cfg["T"] = 50.0;
  cfg["calibration_n"] = 2000;
  const StudyReport report = run_study(StudyConfig::from_json(cfg));
  const auto& rows = report.groups[0].rows;
  CHECK(rows.size() == 120);  // 60 replicates x 2 statistics
  int with_theta = 0;
  for (const auto& r : rows) {
    if (r.theta_hat) ++with_theta;
  }
  CHECK(with_theta == 120);
  // theta_hat computed once per trajectory: both kinds see the same estimate
  for (int i = 0; i < 60; ++i) {
    CHECK(rows[2 * i].theta_hat->alpha == rows[2 * i + 1].theta_hat->alpha);
    CHECK(rows[2 * i].theta_hat->beta == rows[2 * i + 1].theta_hat->beta);
  }
}

TEST_CASE("power study: degenerate alternative reproduces the size") {
  auto cfg = base_config();
  cfg["study"] = "power";
  cfg["true_model"] = "simple:ou";  // same drift as H0
  cfg["n_replicates"] = 100;
  cfg["T"] = 100.0;
  cfg["epsilons"] = {0.1};
  const StudyReport report = run_study(StudyConfig::from_json(cfg));
  const double rate = report.summary["power"][0]["rejections"][0]["rejection_rate"].get<double>();
  CHECK(std::abs(rate - 0.1) < 0.09);  // power ~ size within MC noise
}

TEST_CASE("power ladder produces one row group per rung") {
  auto cfg = base_config();
  cfg["study"] = "power";
  cfg["true_model"] = "simple:cubic";
  cfg["T_ladder"] = {25.0, 50.0};
  cfg["n_replicates"] = 50;
  const StudyReport report = run_study(StudyConfig::from_json(cfg));
  REQUIRE(report.groups.size() == 2);
  CHECK(report.groups[0].label == "rows_T25");
  CHECK(report.groups[1].label == "rows_T50");
  CHECK(report.summary["power"].size() == 2);
}

TEST_CASE("paramfree study: identical thetas are indistinguishable") {
  nlohmann::json cfg;
  cfg["study"] = "paramfree";
  cfg["model"] = "family:gamma=1,sigma=1,box=-2:2x0.5:3";
  cfg["stats"] = {"ParamEDF:CvM"};
  cfg["thetas"] = {{0.5, 1.0}, {0.5, 1.0}};
  cfg["T"] = 100.0;
  cfg["n_replicates"] = 80;
  cfg["seed"] = 21;
  const StudyReport report = run_study(StudyConfig::from_json(cfg));
  REQUIRE(report.groups.size() == 2);
  const auto& pair = report.summary["pairwise_ks"][0];
  CHECK(pair["ks_distance"].get<double>() < pair["critical_1pct"].get<double>());
  CHECK_FALSE(pair["distinguishable"].get<bool>());
}

TEST_CASE("limitmatch study reports the two-sample distance") {
  auto cfg = base_config();
  cfg["study"] = "limitmatch";
  cfg["T"] = 200.0;
  cfg["n_replicates"] = 80;
  cfg["limit_n"] = 4000;
  const StudyReport report = run_study(StudyConfig::from_json(cfg));
  CHECK(report.summary["law_id"] == "int_w2");
  const double d = report.summary["ks_distance"].get<double>();
  CHECK(d > 0.0);
  CHECK(d < 0.3);
  REQUIRE(report.extra_samples.size() == 1);
  CHECK(report.extra_samples[0].second.size() == 4000);
}

TEST_CASE("config echo reserializes to an identical validated command") {
  const auto doc = base_config();
  const StudyConfig cfg = StudyConfig::from_json(doc);
  // round trip through the echo
  const StudyConfig again = StudyConfig::from_json(cfg.echo);
  CHECK(again.echo == cfg.echo);
  CHECK(again.seed == cfg.seed);
  CHECK(again.calibration_seed == cfg.calibration_seed);
  CHECK(stat_kind_name(again.stats[0]) == stat_kind_name(cfg.stats[0]));
}

}  // TEST_SUITE
