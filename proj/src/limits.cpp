// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#include "ergofit/limits.hpp"

#include <algorithm>
#include <cmath>

#include "ergofit/errors.hpp"
#include "ergofit/numerics.hpp"
#include "ergofit/parallel.hpp"
#include "ergofit/text_io.hpp"

namespace ergofit {

std::string stat_family_name(StatFamily f) {
  switch (f) {
    case StatFamily::param_edf: return "ParamEDF";
    case StatFamily::param_density: return "ParamDensity";
    case StatFamily::simple_density: return "SimpleDensity";
    case StatFamily::adf: return "ADF";
    case StatFamily::ks_increment: return "KSIncrement";
  }
  return "?";
}

std::string stat_norm_name(StatNorm n) { return n == StatNorm::cvm ? "CvM" : "KS"; }

StatFamily parse_stat_family(const std::string& s) {
  if (s == "ParamEDF") return StatFamily::param_edf;
  if (s == "ParamDensity") return StatFamily::param_density;
  if (s == "SimpleDensity") return StatFamily::simple_density;
  if (s == "ADF") return StatFamily::adf;
  if (s == "KSIncrement") return StatFamily::ks_increment;
  throw validation_error("unknown statistic family: '" + s + "'");
}

StatNorm parse_stat_norm(const std::string& s) {
  if (s == "CvM") return StatNorm::cvm;
  if (s == "KS") return StatNorm::ks;
  throw validation_error("unknown norm: '" + s + "' (expected CvM or KS)");
}

LimitGrid default_param_limit_grid(double gamma, double tail_mass) {
  LimitGrid g;
  g.half_width = standard_quantile(gamma, 1.0 - 0.5 * tail_mass);
  g.dz = 0.005 * g.half_width;
  g.m_y = 400;
  return g;
}

LimitGrid default_simple_limit_grid(const SimpleModel& model, double tail_mass) {
  LimitGrid g;
  const double lo = model.quantile(0.5 * tail_mass);
  const double hi = model.quantile(1.0 - 0.5 * tail_mass);
  g.half_width = 0.5 * (hi - lo);
  g.dz = 0.005 * g.half_width;
  g.m_y = 400;
  return g;
}

// ---------------------------------------------------------------------------
// ParamLimitSampler
// ---------------------------------------------------------------------------

ParamLimitSampler::ParamLimitSampler(double gamma)
    : ParamLimitSampler(gamma, default_param_limit_grid(gamma)) {}

ParamLimitSampler::ParamLimitSampler(double gamma, const LimitGrid& grid)
    : gamma_(gamma), regime_(classify_gamma(gamma)), grid_(grid) {
  if (regime_ == GammaRegime::unsupported) {
    throw validation_error("limit sampler: unsupported regime gamma=0.5");
  }
  if (!(grid_.half_width > 0.0) || !(grid_.dz > 0.0) || grid_.m_y < 2) {
    throw validation_error("limit sampler: invalid grid");
  }

  const StationaryMoments mom = stationary_moments(gamma_);
  a_ = mom.a;
  b_ = mom.b;

  // Even cell count: z = 0 is a cell edge, midpoints avoid the Pi singularity.
  std::size_t half_cells =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(grid_.half_width / grid_.dz - 1e-9)));
  const std::size_t n = 2 * half_cells;
  const double dz = grid_.half_width / static_cast<double>(half_cells);
  grid_.dz = dz;

  z_mid_.resize(n);
  f0_cell_.resize(n);
  cdf_cell_.resize(n);
  inv_sqrt_f0_.resize(n);
  psi_weight_.resize(n);
  const bool high = regime_ == GammaRegime::high_gamma;
  if (high) pi_weight_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = -grid_.half_width + dz * (static_cast<double>(i) + 0.5);
    const double f0 = standard_density(gamma_, z);
    z_mid_[i] = z;
    f0_cell_[i] = f0;
    cdf_cell_[i] = standard_cdf(gamma_, z);
    inv_sqrt_f0_[i] = 1.0 / std::sqrt(f0);
    const double sqrt_f0 = std::sqrt(f0);
    psi_weight_[i] = sgn(z) * pow_abs(z, gamma_) * sqrt_f0;
    if (high) pi_weight_[i] = pow_abs(z, gamma_ - 1.0) * sqrt_f0;
  }

  y_grid_.resize(grid_.m_y);
  f0_y_.resize(grid_.m_y);
  cdf_y_.resize(grid_.m_y);
  split_.resize(grid_.m_y);
  for (int j = 0; j < grid_.m_y; ++j) {
    const double t = static_cast<double>(j + 1) / (grid_.m_y + 1);
    const double y = standard_quantile(gamma_, t);
    y_grid_[j] = y;
    cdf_y_[j] = t;
    f0_y_[j] = standard_density(gamma_, y);
    split_[j] = static_cast<std::size_t>(
        std::upper_bound(z_mid_.begin(), z_mid_.end(), y) - z_mid_.begin());
  }
}

LimitField ParamLimitSampler::field_from_increments(std::span<const double> dw) const {
  const std::size_t n = z_mid_.size();
  if (dw.size() != n) throw validation_error("field_from_increments: increment count mismatch");

  // Split the white-noise integrals into bounded pieces:
  //   P(y) = sum_{z<=y} F0(z)/sqrt(f0(z)) dW,  Q(y) = sum_{z>y} (F0(z)-1)/sqrt(f0(z)) dW,
  // so that Phi(y) = 2[(F0(y)-1) P(y) + F0(y) Q(y)] and Phi~(y) = 2[P(y)+Q(y)].
  // Each running sum only ever visits its own decaying tail, so the grid can
  // be widened without catastrophic cancellation from the 1/sqrt(f0) weights.
  std::vector<double> pref_p(n + 1, 0.0), suf_q(n + 1, 0.0);
  double pi = 0.0, psi = 0.0;
  const bool high = regime_ == GammaRegime::high_gamma;
  for (std::size_t i = 0; i < n; ++i) {
    pref_p[i + 1] = pref_p[i] + cdf_cell_[i] * inv_sqrt_f0_[i] * dw[i];
    psi += psi_weight_[i] * dw[i];
    if (high) pi += pi_weight_[i] * dw[i];
  }
  for (std::size_t i = n; i-- > 0;) {
    suf_q[i] = suf_q[i + 1] + (cdf_cell_[i] - 1.0) * inv_sqrt_f0_[i] * dw[i];
  }

  LimitField field;
  field.gamma = gamma_;
  field.regime = regime_;
  field.psi = psi;
  field.pi = high ? pi : 0.0;
  field.y_grid = y_grid_;
  field.phi.resize(y_grid_.size());
  field.phi_tilde.resize(y_grid_.size());
  field.eta0.resize(y_grid_.size());
  field.zeta0.resize(y_grid_.size());

  const double gp1 = gamma_ + 1.0;
  const double pi_coeff = high ? pi / (gamma_ * a_) : 0.0;
  const double psi_coeff = psi / (gp1 * b_);
  for (std::size_t j = 0; j < y_grid_.size(); ++j) {
    const std::size_t s = split_[j];
    const double y = y_grid_[j];
    const double f0y = f0_y_[j];
    const double cdf_y = cdf_y_[j];
    const double phi = 2.0 * ((cdf_y - 1.0) * pref_p[s] + cdf_y * suf_q[s]);
    const double phi_tilde = 2.0 * (pref_p[s] + suf_q[s]);
    field.phi[j] = phi;
    field.phi_tilde[j] = phi_tilde;
    field.eta0[j] = phi + pi_coeff * f0y + y * psi_coeff * f0y;
    // The alpha-hat term enters the density field with a minus sign:
    // d f(theta,x)/d alpha = +2 sgn(y)|y|^gamma f0(y) at theta0 (check: moving
    // alpha right raises the density right of the mode), so the plug-in
    // expansion subtracts the Pi contribution.
    double z_bracket = phi_tilde + (1.0 - 2.0 * pow_abs(y, gp1)) * psi_coeff;
    if (high) z_bracket -= 2.0 * sgn(y) * pow_abs(y, gamma_) * pi_coeff;
    field.zeta0[j] = z_bracket * f0y;
  }
  return field;
}

LimitField ParamLimitSampler::draw_field(RngStream& rng) const {
  const std::size_t n = z_mid_.size();
  std::vector<double> dw(n);
  const double sd = std::sqrt(grid_.dz);
  for (std::size_t i = 0; i < n; ++i) dw[i] = sd * rng.normal();
  return field_from_increments(dw);
}

double ParamLimitSampler::reduce(const LimitField& field, StatFamily family,
                                 StatNorm norm) const {
  const std::vector<double>* values = nullptr;
  if (family == StatFamily::param_edf) {
    values = &field.eta0;
  } else if (family == StatFamily::param_density) {
    values = &field.zeta0;
  } else {
    throw validation_error("param limit sampler: statistic family has no composite limit here");
  }
  if (norm == StatNorm::cvm) {
    // int (.)^2 dF0 on the uniform probability grid (endpoint values vanish).
    double acc = 0.0;
    for (double v : *values) acc += v * v;
    return acc / static_cast<double>(values->size() + 1);
  }
  double m = 0.0;
  for (double v : *values) m = std::max(m, std::abs(v));
  return m;
}

double ParamLimitSampler::draw(StatFamily family, StatNorm norm, RngStream& rng) const {
  return reduce(draw_field(rng), family, norm);
}

// ---------------------------------------------------------------------------
// SimpleLimitSampler
// ---------------------------------------------------------------------------

SimpleLimitSampler::SimpleLimitSampler(const SimpleModel& model)
    : SimpleLimitSampler(model, default_simple_limit_grid(model)) {}

SimpleLimitSampler::SimpleLimitSampler(const SimpleModel& model, const LimitGrid& grid)
    : grid_(grid) {
  if (!(grid_.half_width > 0.0) || !(grid_.dz > 0.0) || grid_.m_y < 2) {
    throw validation_error("limit sampler: invalid grid");
  }
  const double center = 0.5 * (model.truncation().lo + model.truncation().hi);
  double z_lo = center - grid_.half_width;
  double z_hi = center + grid_.half_width;
  // The field lives on the model's support.
  z_lo = std::max(z_lo, model.truncation().lo);
  z_hi = std::min(z_hi, model.truncation().hi);
  const std::size_t n =
      std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil((z_hi - z_lo) / grid_.dz - 1e-9)));
  dz_ = (z_hi - z_lo) / static_cast<double>(n);

  z_mid_.resize(n);
  cdf_cell_.resize(n);
  weight_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = z_lo + dz_ * (static_cast<double>(i) + 0.5);
    z_mid_[i] = z;
    cdf_cell_[i] = model.cdf(z);
    weight_[i] = 1.0 / (model.diffusion(z) * std::sqrt(model.density(z)));
  }

  x_grid_.resize(grid_.m_y);
  f_x_.resize(grid_.m_y);
  split_.resize(grid_.m_y);
  for (int j = 0; j < grid_.m_y; ++j) {
    const double t = static_cast<double>(j + 1) / (grid_.m_y + 1);
    const double x = model.quantile(t);
    x_grid_[j] = x;
    f_x_[j] = model.density(x);
    split_[j] = static_cast<std::size_t>(
        std::upper_bound(z_mid_.begin(), z_mid_.end(), x) - z_mid_.begin());
  }
}

std::vector<double> SimpleLimitSampler::field_from_increments(
    std::span<const double> dw) const {
  const std::size_t n = z_mid_.size();
  if (dw.size() != n) throw validation_error("field_from_increments: increment count mismatch");
  // Same bounded prefix/suffix split as the composite sampler:
  // zeta(x) = 2 f(x) [P(x) + Q(x)].
  std::vector<double> pref_p(n + 1, 0.0), suf_q(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    pref_p[i + 1] = pref_p[i] + cdf_cell_[i] * weight_[i] * dw[i];
  }
  for (std::size_t i = n; i-- > 0;) {
    suf_q[i] = suf_q[i + 1] + (cdf_cell_[i] - 1.0) * weight_[i] * dw[i];
  }
  std::vector<double> zeta(x_grid_.size());
  for (std::size_t j = 0; j < x_grid_.size(); ++j) {
    const std::size_t s = split_[j];
    zeta[j] = 2.0 * f_x_[j] * (pref_p[s] + suf_q[s]);
  }
  return zeta;
}

double SimpleLimitSampler::reduce(std::span<const double> zeta, StatNorm norm) const {
  if (norm == StatNorm::cvm) {
    double acc = 0.0;
    for (double v : zeta) acc += v * v;
    return acc / static_cast<double>(zeta.size() + 1);
  }
  double m = 0.0;
  for (double v : zeta) m = std::max(m, std::abs(v));
  return m;
}

double SimpleLimitSampler::draw(StatNorm norm, RngStream& rng) const {
  const std::size_t n = z_mid_.size();
  std::vector<double> dw(n);
  const double sd = std::sqrt(dz_);
  for (std::size_t i = 0; i < n; ++i) dw[i] = sd * rng.normal();
  return reduce(field_from_increments(dw), norm);
}

// ---------------------------------------------------------------------------
// Wiener functionals
// ---------------------------------------------------------------------------

WienerFunctionalSampler::WienerFunctionalSampler(Kind kind, int n_steps)
    : kind_(kind), n_steps_(n_steps) {
  if (n_steps_ < 100) throw validation_error("w functional sampler: need n_steps >= 100");
}

double WienerFunctionalSampler::draw(RngStream& rng) const {
  const double h = 1.0 / n_steps_;
  const double sd = std::sqrt(h);
  double w = 0.0;
  if (kind_ == Kind::int_sq) {
    double acc = 0.0;  // trapezoid of w^2 with w(0) = 0
    for (int k = 1; k <= n_steps_; ++k) {
      const double prev = w;
      w += sd * rng.normal();
      acc += 0.5 * (prev * prev + w * w);
    }
    return acc * h;
  }
  double m = 0.0;
  for (int k = 1; k <= n_steps_; ++k) {
    w += sd * rng.normal();
    m = std::max(m, std::abs(w));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Law registry
// ---------------------------------------------------------------------------

std::string param_law_id(StatFamily family, StatNorm norm, double gamma) {
  std::string base;
  if (family == StatFamily::param_edf) {
    base = norm == StatNorm::cvm ? "Delta" : "Delta_sup";
  } else if (family == StatFamily::param_density) {
    base = norm == StatNorm::cvm ? "delta" : "delta_sup";
  } else {
    throw validation_error("param_law_id: not a composite statistic family");
  }
  return base + ":gamma=" + format_double_short(gamma);
}

std::string simple_law_id(const SimpleModel& model, StatNorm norm) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(model.law_hash()));
  return std::string(norm == StatNorm::cvm ? "delta_S0:" : "delta_S0_sup:") + buf;
}

std::string w_functional_law_id(WienerFunctionalSampler::Kind kind) {
  return kind == WienerFunctionalSampler::Kind::int_sq ? "int_w2" : "sup_abs_w";
}

namespace {

class ParamLaw final : public LimitLaw {
 public:
  ParamLaw(std::string id, double gamma, StatFamily family, StatNorm norm,
           const LimitGrid& grid)
      : LimitLaw(std::move(id)), sampler_(gamma, grid), family_(family), norm_(norm) {}
  double draw(RngStream& rng) const override { return sampler_.draw(family_, norm_, rng); }
  GridMeta grid_meta() const override { return GridMeta{sampler_.grid(), std::nullopt}; }

 private:
  ParamLimitSampler sampler_;
  StatFamily family_;
  StatNorm norm_;
};

class SimpleLaw final : public LimitLaw {
 public:
  SimpleLaw(std::string id, const SimpleModel& model, StatNorm norm, const LimitGrid& grid)
      : LimitLaw(std::move(id)), sampler_(model, grid), norm_(norm) {}
  double draw(RngStream& rng) const override { return sampler_.draw(norm_, rng); }
  GridMeta grid_meta() const override { return GridMeta{sampler_.grid(), std::nullopt}; }

 private:
  SimpleLimitSampler sampler_;
  StatNorm norm_;
};

class WLaw final : public LimitLaw {
 public:
  WLaw(std::string id, WienerFunctionalSampler::Kind kind, int n_steps)
      : LimitLaw(std::move(id)), sampler_(kind, n_steps) {}
  double draw(RngStream& rng) const override { return sampler_.draw(rng); }
  GridMeta grid_meta() const override { return GridMeta{std::nullopt, sampler_.n_steps()}; }

 private:
  WienerFunctionalSampler sampler_;
};

struct ParsedParamLaw {
  StatFamily family;
  StatNorm norm;
  double gamma;
};

std::optional<ParsedParamLaw> parse_param_law(const std::string& id) {
  const auto colon = id.find(":gamma=");
  if (colon == std::string::npos) return std::nullopt;
  const std::string base = id.substr(0, colon);
  ParsedParamLaw p{};
  if (base == "Delta") {
    p.family = StatFamily::param_edf;
    p.norm = StatNorm::cvm;
  } else if (base == "Delta_sup") {
    p.family = StatFamily::param_edf;
    p.norm = StatNorm::ks;
  } else if (base == "delta") {
    p.family = StatFamily::param_density;
    p.norm = StatNorm::cvm;
  } else if (base == "delta_sup") {
    p.family = StatFamily::param_density;
    p.norm = StatNorm::ks;
  } else {
    return std::nullopt;
  }
  p.gamma = parse_double(id.substr(colon + 7));
  return p;
}

}  // namespace

std::unique_ptr<LimitLaw> make_limit_law(const std::string& law_id, const LimitGrid& grid) {
  if (const auto p = parse_param_law(law_id)) {
    return std::make_unique<ParamLaw>(law_id, p->gamma, p->family, p->norm, grid);
  }
  throw validation_error("law '" + law_id + "' does not take a spatial grid");
}

std::unique_ptr<LimitLaw> make_limit_law(const std::string& law_id, int w_n_steps) {
  if (law_id == "int_w2") {
    return std::make_unique<WLaw>(law_id, WienerFunctionalSampler::Kind::int_sq, w_n_steps);
  }
  if (law_id == "sup_abs_w") {
    return std::make_unique<WLaw>(law_id, WienerFunctionalSampler::Kind::sup_abs, w_n_steps);
  }
  throw validation_error("law '" + law_id + "' does not take n_steps");
}

std::unique_ptr<LimitLaw> make_limit_law(const std::string& law_id) {
  if (law_id == "int_w2" || law_id == "sup_abs_w") return make_limit_law(law_id, 1000);
  if (const auto p = parse_param_law(law_id)) {
    return make_limit_law(law_id, default_param_limit_grid(p->gamma));
  }
  if (law_id.rfind("delta_S0", 0) == 0) {
    throw validation_error("law '" + law_id + "' requires the simple model (pass --model)");
  }
  throw validation_error("unknown law_id: '" + law_id + "'");
}

std::unique_ptr<LimitLaw> make_simple_limit_law(const SimpleModel& model, StatNorm norm) {
  return make_simple_limit_law(model, norm, default_simple_limit_grid(model));
}

std::unique_ptr<LimitLaw> make_simple_limit_law(const SimpleModel& model, StatNorm norm,
                                                const LimitGrid& grid) {
  return std::make_unique<SimpleLaw>(simple_law_id(model, norm), model, norm, grid);
}

std::vector<double> draw_limit_samples(const LimitLaw& law, int n, std::uint64_t seed) {
  if (n <= 0) throw validation_error("draw_limit_samples: n must be positive");
  std::vector<double> out(static_cast<std::size_t>(n));
  parallel_for(out.size(), [&](std::size_t i) {
    RngStream rng(seed, i);
    out[i] = law.draw(rng);
  });
  return out;
}

}  // namespace ergofit
