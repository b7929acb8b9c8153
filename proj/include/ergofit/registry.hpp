// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ergofit/limits.hpp"
#include "ergofit/model.hpp"
#include "ergofit/statistics.hpp"

namespace ergofit {

// Centralized effective defaults (the `defaults` subcommand dumps these).
struct Defaults {
  double dt = 0.01;
  double burn_in_fraction = 0.1;  // applied only when x0 is given explicitly
  int stat_grid_m = 400;
  double limit_tail_mass = 1e-8;
  double limit_dz_fraction = 0.005;  // dz = fraction * L
  int limit_m_y = 400;
  int w_n_steps = 1000;
  int mle_alpha_grid = 2001;
  int calibration_n = 100000;
  int limitmatch_n = 10000;
};

const Defaults& defaults();
std::string defaults_json();

// ---------------------------------------------------------------------------
// Model spec grammar (documented in the README):
//   family:gamma=<g>,sigma=<s>,box=<a1>:<a2>x<b1>:<b2>
//   simple:<builtin>[,<param>=<value>...][,sigma=<s>][,trunc=<lo>:<hi>]
//   simple:table=<drift.csv>[,sigma=<s>|sigma_table=<file.csv>][,trunc=<lo>:<hi>]
// Builtins: ou, switching, cubic, shifted-ou, nonlinear-demo.
// ---------------------------------------------------------------------------

struct ModelSpec {
  enum class Kind { family, simple };

  Kind kind = Kind::family;
  // family
  double gamma = 1.0;
  double sigma = 1.0;
  ThetaBox box;
  // simple
  std::string drift_name;  // builtin name, or "table"
  std::map<std::string, double> params;
  std::string drift_table_path;
  std::string sigma_table_path;  // empty -> constant sigma
  std::optional<Interval> truncation;
  std::string raw;

  bool is_family() const { return kind == Kind::family; }
  // Normalized text with defaults applied; identical laws canonicalize equal.
  std::string canonical() const;
};

ModelSpec parse_model_spec(const std::string& text);

ParametricModel build_family(const ModelSpec& spec);
SimpleModel build_simple(const ModelSpec& spec);

// ---------------------------------------------------------------------------
// Statistic/law compatibility: which limit law calibrates which statistic.
// ---------------------------------------------------------------------------

struct CompatEntry {
  StatisticKind kind;
  std::string model_class;   // "family" or "simple"
  std::string law_template;  // e.g. "Delta:gamma=<g>"
};

// One entry per implemented statistic kind; the unsupported regime has none.
const std::vector<CompatEntry>& compatibility_registry();

std::string law_id_for(const StatisticKind& kind, const ParametricModel& model);
std::string law_id_for(const StatisticKind& kind, const SimpleModel& model);

// True when the statistic kind can be computed under this spec's model class.
bool kind_compatible_with(const StatisticKind& kind, const ModelSpec& spec);

}  // namespace ergofit
