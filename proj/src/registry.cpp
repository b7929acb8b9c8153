// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#include "ergofit/registry.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <json.hpp>

#include "ergofit/errors.hpp"
#include "ergofit/numerics.hpp"
#include "ergofit/text_io.hpp"

namespace ergofit {

const Defaults& defaults() {
  static const Defaults d;
  return d;
}

std::string defaults_json() {
  const Defaults& d = defaults();
  nlohmann::json j;
  j["dt"] = d.dt;
  j["burn_in_fraction"] = d.burn_in_fraction;
  j["stat_grid_m"] = d.stat_grid_m;
  j["limit_tail_mass"] = d.limit_tail_mass;
  j["limit_dz_fraction"] = d.limit_dz_fraction;
  j["limit_m_y"] = d.limit_m_y;
  j["w_n_steps"] = d.w_n_steps;
  j["mle_alpha_grid"] = d.mle_alpha_grid;
  j["calibration_n"] = d.calibration_n;
  j["limitmatch_n"] = d.limitmatch_n;
  return j.dump(2);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = s.find(sep, start);
    if (end == std::string::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

std::pair<double, double> parse_range(const std::string& text, const std::string& what) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw validation_error("malformed " + what + ": '" + text + "'");
  return {parse_double(parts[0]), parse_double(parts[1])};
}

struct BuiltinInfo {
  std::map<std::string, double> defaults;
};

const std::map<std::string, BuiltinInfo>& builtins() {
  static const std::map<std::string, BuiltinInfo> table = {
      {"ou", {{{"alpha", 0.0}, {"beta", 1.0}}}},
      {"switching", {{{"alpha", 0.0}, {"beta", 1.0}}}},
      {"cubic", {{{"alpha", 0.0}, {"beta", 1.0}}}},
      {"shifted-ou", {{{"alpha", 0.5}, {"beta", 1.0}}}},
      {"nonlinear-demo", {{{"beta", 1.0}, {"amp", 0.8}, {"freq", 1.0}}}},
  };
  return table;
}

// Tabulated curve with linear interpolation. Drift tables extrapolate linearly
// from the edge slope (keeps mean reversion outside the table); sigma tables
// clamp to the edge value.
class LinearTable {
 public:
  LinearTable(std::vector<double> xs, std::vector<double> ys, bool extrapolate)
      : xs_(std::move(xs)), ys_(std::move(ys)), extrapolate_(extrapolate) {
    if (xs_.size() < 2) throw validation_error("table: need at least 2 rows");
    for (std::size_t i = 1; i < xs_.size(); ++i) {
      if (!(xs_[i] > xs_[i - 1])) throw validation_error("table: x column must be strictly increasing");
    }
  }

  double operator()(double x) const {
    const std::size_t n = xs_.size();
    if (x <= xs_.front()) {
      if (!extrapolate_) return ys_.front();
      const double slope = (ys_[1] - ys_[0]) / (xs_[1] - xs_[0]);
      return ys_.front() + slope * (x - xs_.front());
    }
    if (x >= xs_.back()) {
      if (!extrapolate_) return ys_.back();
      const double slope = (ys_[n - 1] - ys_[n - 2]) / (xs_[n - 1] - xs_[n - 2]);
      return ys_.back() + slope * (x - xs_.back());
    }
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs_.begin()) - 1;
    const double w = (x - xs_[j]) / (xs_[j + 1] - xs_[j]);
    return ys_[j] + w * (ys_[j + 1] - ys_[j]);
  }

  double x_front() const { return xs_.front(); }
  double x_back() const { return xs_.back(); }

 private:
  std::vector<double> xs_, ys_;
  bool extrapolate_;
};

std::shared_ptr<LinearTable> load_table_csv(const std::string& path,
                                            const std::string& y_column, bool extrapolate) {
  const CsvTable csv = read_csv(path);
  const int xc = csv.column("x");
  const int yc = csv.column(y_column);
  if (xc < 0 || yc < 0) {
    throw validation_error("table " + path + ": need header x," + y_column);
  }
  std::vector<double> xs, ys;
  xs.reserve(csv.rows.size());
  ys.reserve(csv.rows.size());
  for (const auto& row : csv.rows) {
    if (static_cast<int>(row.size()) <= std::max(xc, yc)) {
      throw validation_error("table " + path + ": short row");
    }
    xs.push_back(parse_double(row[static_cast<std::size_t>(xc)]));
    ys.push_back(parse_double(row[static_cast<std::size_t>(yc)]));
  }
  return std::make_shared<LinearTable>(std::move(xs), std::move(ys), extrapolate);
}

Interval default_truncation(const ModelSpec& spec) {
  const auto get = [&spec](const std::string& k) { return spec.params.at(k); };
  if (spec.drift_name == "ou" || spec.drift_name == "shifted-ou") {
    const double w = 8.0 * spec.sigma / std::sqrt(get("beta"));
    return {get("alpha") - w, get("alpha") + w};
  }
  if (spec.drift_name == "switching") {
    const double w = std::max(12.0 * spec.sigma * spec.sigma / get("beta"), 2.0);
    return {get("alpha") - w, get("alpha") + w};
  }
  if (spec.drift_name == "cubic") {
    const double w = 3.2 * std::pow(spec.sigma * spec.sigma / get("beta"), 0.25);
    return {get("alpha") - w, get("alpha") + w};
  }
  if (spec.drift_name == "nonlinear-demo") {
    const double w = 12.0 * spec.sigma / std::sqrt(get("beta"));
    return {-w, w};
  }
  throw validation_error("simple:table requires an explicit trunc=<lo>:<hi>");
}

}  // namespace

ModelSpec parse_model_spec(const std::string& text) {
  ModelSpec spec;
  spec.raw = text;
  const auto head = text.find(':');
  if (head == std::string::npos) {
    throw validation_error("model spec must start with 'family:' or 'simple:', got '" + text + "'");
  }
  const std::string tag = text.substr(0, head);
  const std::string body = text.substr(head + 1);
  const auto fields = split(body, ',');

  if (tag == "family") {
    spec.kind = ModelSpec::Kind::family;
    bool saw_box = false;
    for (const auto& field : fields) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw validation_error("malformed family field: '" + field + "'");
      const std::string key = field.substr(0, eq);
      const std::string val = field.substr(eq + 1);
      if (key == "gamma") {
        spec.gamma = parse_double(val);
      } else if (key == "sigma") {
        spec.sigma = parse_double(val);
      } else if (key == "box") {
        const auto x = val.find('x');
        if (x == std::string::npos) throw validation_error("malformed box: '" + val + "'");
        const auto ar = parse_range(val.substr(0, x), "box alpha range");
        const auto br = parse_range(val.substr(x + 1), "box beta range");
        spec.box = ThetaBox{ar.first, ar.second, br.first, br.second};
        saw_box = true;
      } else {
        throw validation_error("unknown family field: '" + key + "'");
      }
    }
    if (!saw_box) throw validation_error("family spec requires box=<a1>:<a2>x<b1>:<b2>");
    build_family(spec);  // validate eagerly
    return spec;
  }

  if (tag != "simple") throw validation_error("unknown model class: '" + tag + "'");
  spec.kind = ModelSpec::Kind::simple;
  if (fields.empty() || fields[0].empty()) throw validation_error("simple spec requires a drift name");

  std::size_t first_param = 0;
  if (fields[0].rfind("table=", 0) == 0) {
    spec.drift_name = "table";
    spec.drift_table_path = fields[0].substr(6);
    first_param = 1;
  } else if (fields[0].find('=') == std::string::npos) {
    spec.drift_name = fields[0];
    first_param = 1;
    const auto it = builtins().find(spec.drift_name);
    if (it == builtins().end()) {
      throw validation_error("unknown simple drift builtin: '" + spec.drift_name + "'");
    }
    spec.params = it->second.defaults;
  } else {
    throw validation_error("simple spec must start with a builtin name or table=<file>");
  }

  for (std::size_t i = first_param; i < fields.size(); ++i) {
    const auto& field = fields[i];
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw validation_error("malformed simple field: '" + field + "'");
    const std::string key = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    if (key == "sigma") {
      spec.sigma = parse_double(val);
      if (!(spec.sigma > 0.0)) throw validation_error("sigma must be > 0");
    } else if (key == "sigma_table") {
      spec.sigma_table_path = val;
    } else if (key == "trunc") {
      const auto r = parse_range(val, "trunc");
      if (!(r.first < r.second)) throw validation_error("trunc lo must be < hi");
      spec.truncation = Interval{r.first, r.second};
    } else if (spec.drift_name != "table" && spec.params.count(key)) {
      spec.params[key] = parse_double(val);
    } else {
      throw validation_error("unknown field '" + key + "' for simple:" + spec.drift_name);
    }
  }
  if (spec.drift_name == "table" && !spec.truncation) {
    throw validation_error("simple:table requires an explicit trunc=<lo>:<hi>");
  }
  for (const auto& [k, v] : spec.params) {
    if (k == "beta" && !(v > 0.0)) throw validation_error("beta must be > 0");
  }
  return spec;
}

std::string ModelSpec::canonical() const {
  if (kind == Kind::family) {
    return "family:gamma=" + format_double_short(gamma) + ",sigma=" + format_double_short(sigma) +
           ",box=" + format_double_short(box.a1) + ":" + format_double_short(box.a2) + "x" +
           format_double_short(box.b1) + ":" + format_double_short(box.b2);
  }
  std::string out = "simple:" + drift_name;
  if (drift_name == "table") out += "=" + drift_table_path;
  for (const auto& [k, v] : params) out += "," + k + "=" + format_double_short(v);
  if (!sigma_table_path.empty()) {
    out += ",sigma_table=" + sigma_table_path;
  } else {
    out += ",sigma=" + format_double_short(sigma);
  }
  Interval tr = truncation ? *truncation : default_truncation(*this);
  out += ",trunc=" + format_double_short(tr.lo) + ":" + format_double_short(tr.hi);
  return out;
}

ParametricModel build_family(const ModelSpec& spec) {
  if (spec.kind != ModelSpec::Kind::family) {
    throw validation_error("expected a family model spec, got '" + spec.raw + "'");
  }
  return ParametricModel(spec.gamma, spec.sigma, spec.box);
}

SimpleModel build_simple(const ModelSpec& spec) {
  if (spec.kind != ModelSpec::Kind::simple) {
    throw validation_error("expected a simple model spec, got '" + spec.raw + "'");
  }
  std::function<double(double)> drift;
  Interval trunc = spec.truncation ? *spec.truncation : default_truncation(spec);

  if (spec.drift_name == "table") {
    auto table = load_table_csv(spec.drift_table_path, "s0", /*extrapolate=*/true);
    drift = [table](double x) { return (*table)(x); };
  } else if (spec.drift_name == "ou" || spec.drift_name == "shifted-ou") {
    const double alpha = spec.params.at("alpha");
    const double beta = spec.params.at("beta");
    drift = [alpha, beta](double x) { return -beta * (x - alpha); };
  } else if (spec.drift_name == "switching") {
    const double alpha = spec.params.at("alpha");
    const double beta = spec.params.at("beta");
    drift = [alpha, beta](double x) { return -beta * sgn(x - alpha); };
  } else if (spec.drift_name == "cubic") {
    const double alpha = spec.params.at("alpha");
    const double beta = spec.params.at("beta");
    drift = [alpha, beta](double x) {
      const double u = x - alpha;
      return -beta * u * u * u;
    };
  } else if (spec.drift_name == "nonlinear-demo") {
    const double beta = spec.params.at("beta");
    const double amp = spec.params.at("amp");
    const double freq = spec.params.at("freq");
    drift = [beta, amp, freq](double x) { return -beta * x * (1.0 + amp * std::cos(freq * x)); };
  } else {
    throw validation_error("unknown simple drift builtin: '" + spec.drift_name + "'");
  }

  std::function<double(double)> sigma;
  if (!spec.sigma_table_path.empty()) {
    auto table = load_table_csv(spec.sigma_table_path, "sigma", /*extrapolate=*/false);
    sigma = [table](double x) { return (*table)(x); };
  } else {
    const double s = spec.sigma;
    sigma = [s](double) { return s; };
  }

  return SimpleModel(std::move(drift), std::move(sigma), trunc, spec.canonical());
}

const std::vector<CompatEntry>& compatibility_registry() {
  static const std::vector<CompatEntry> entries = {
      {{StatFamily::param_edf, StatNorm::cvm}, "family", "Delta:gamma=<g>"},
      {{StatFamily::param_edf, StatNorm::ks}, "family", "Delta_sup:gamma=<g>"},
      {{StatFamily::param_density, StatNorm::cvm}, "family", "delta:gamma=<g>"},
      {{StatFamily::param_density, StatNorm::ks}, "family", "delta_sup:gamma=<g>"},
      {{StatFamily::simple_density, StatNorm::cvm}, "simple", "delta_S0:<hash>"},
      {{StatFamily::simple_density, StatNorm::ks}, "simple", "delta_S0_sup:<hash>"},
      {{StatFamily::adf, StatNorm::cvm}, "simple", "int_w2"},
      {{StatFamily::ks_increment, StatNorm::ks}, "simple", "sup_abs_w"},
  };
  return entries;
}

std::string law_id_for(const StatisticKind& kind, const ParametricModel& model) {
  validate_statistic_kind(kind);
  if (kind.family != StatFamily::param_edf && kind.family != StatFamily::param_density) {
    throw validation_error("statistic " + stat_kind_name(kind) + " needs a simple model");
  }
  if (model.regime() == GammaRegime::unsupported) {
    throw validation_error("unsupported regime gamma=0.5");
  }
  return param_law_id(kind.family, kind.norm, model.gamma());
}

std::string law_id_for(const StatisticKind& kind, const SimpleModel& model) {
  validate_statistic_kind(kind);
  switch (kind.family) {
    case StatFamily::simple_density: return simple_law_id(model, kind.norm);
    case StatFamily::adf: return "int_w2";
    case StatFamily::ks_increment: return "sup_abs_w";
    default:
      throw validation_error("statistic " + stat_kind_name(kind) + " needs a family model");
  }
}

bool kind_compatible_with(const StatisticKind& kind, const ModelSpec& spec) {
  const bool param_kind =
      kind.family == StatFamily::param_edf || kind.family == StatFamily::param_density;
  return param_kind == spec.is_family();
}

}  // namespace ergofit
