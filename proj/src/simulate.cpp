// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#include "ergofit/simulate.hpp"

#include <cmath>
#include <string>

#include "ergofit/errors.hpp"
#include "ergofit/numerics.hpp"
#include "ergofit/text_io.hpp"

namespace ergofit {

namespace {

std::size_t step_count(double total_time, double dt) {
  if (!(dt > 0.0)) throw validation_error("simulate: dt must be > 0");
  if (!(total_time > 0.0)) throw validation_error("simulate: horizon must be > 0");
  const double ratio = total_time / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-6 * std::max(1.0, ratio)) {
    throw validation_error("simulate: T/dt is not integral");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

Trajectory simulate_path(const std::function<double(double)>& drift,
                         const std::function<double(double)>& diffusion,
                         double x0, double total_time, double dt, RngStream& rng) {
  const std::size_t n = step_count(total_time, dt);
  Trajectory traj;
  traj.dt = dt;
  traj.values.resize(n + 1);
  const double sqrt_dt = std::sqrt(dt);
  double x = x0;
  traj.values[0] = x;
  for (std::size_t k = 0; k < n; ++k) {
    x += drift(x) * dt + diffusion(x) * sqrt_dt * rng.normal();
    if (!std::isfinite(x)) {
      throw numerical_error("simulate: state became non-finite at step " + std::to_string(k + 1));
    }
    traj.values[k + 1] = x;
  }
  return traj;
}

Trajectory simulate_family_path(const ParametricModel& model, const Theta& theta,
                                double x0, double total_time, double dt,
                                RngStream& rng) {
  const double gamma = model.gamma();
  const double sigma = model.sigma();
  const double alpha = theta.alpha;
  const double beta = theta.beta;
  // Specialized steppers: pow() dominates the generic path for gamma not in
  // {0, 1} and the family is the hot loop of every study.
  const std::size_t n = step_count(total_time, dt);
  Trajectory traj;
  traj.dt = dt;
  traj.values.resize(n + 1);
  const double sqrt_dt = std::sqrt(dt);
  double x = x0;
  traj.values[0] = x;
  if (gamma == 1.0) {
    const double decay = 1.0 - beta * dt;
    for (std::size_t k = 0; k < n; ++k) {
      x = alpha + (x - alpha) * decay + sigma * sqrt_dt * rng.normal();
      traj.values[k + 1] = x;
    }
  } else if (gamma == 0.0) {
    const double kick = beta * dt;
    for (std::size_t k = 0; k < n; ++k) {
      x += -sgn(x - alpha) * kick + sigma * sqrt_dt * rng.normal();
      traj.values[k + 1] = x;
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      x += family_trend(gamma, theta, x) * dt + sigma * sqrt_dt * rng.normal();
      if (!std::isfinite(x)) {
        throw numerical_error("simulate: state became non-finite at step " + std::to_string(k + 1));
      }
      traj.values[k + 1] = x;
    }
  }
  if (!std::isfinite(x)) throw numerical_error("simulate: state became non-finite");
  return traj;
}

Trajectory simulate_simple_path(const SimpleModel& model, double x0,
                                double total_time, double dt, RngStream& rng) {
  return simulate_path([&model](double x) { return model.drift(x); },
                       [&model](double x) { return model.diffusion(x); }, x0,
                       total_time, dt, rng);
}

double sample_stationary_init(const ParametricModel& model, const Theta& theta,
                              RngStream& rng) {
  return model.invariant_quantile(theta, rng.uniform01());
}

double sample_stationary_init(const SimpleModel& model, RngStream& rng) {
  return model.quantile(rng.uniform01());
}

WienerGrid wiener_increments(double half_width, double dz, RngStream& rng) {
  if (!(half_width > 0.0)) throw validation_error("wiener_increments: L must be > 0");
  if (!(dz > 0.0 && dz <= half_width)) throw validation_error("wiener_increments: need 0 < dz <= L");
  // Even cell count so that z = 0 is a cell boundary and no midpoint is 0.
  std::size_t half_cells = static_cast<std::size_t>(std::ceil(half_width / dz - 1e-9));
  half_cells = std::max<std::size_t>(1, half_cells);
  const std::size_t n = 2 * half_cells;
  WienerGrid grid;
  grid.dz = half_width / static_cast<double>(half_cells);
  grid.z_grid.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    grid.z_grid[i] = -half_width + grid.dz * static_cast<double>(i);
  }
  grid.increments.resize(n);
  const double sd = std::sqrt(grid.dz);
  for (std::size_t i = 0; i < n; ++i) grid.increments[i] = sd * rng.normal();
  return grid;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  std::string out = "t,x\n";
  out.reserve(traj.values.size() * 44 + 4);
  for (std::size_t k = 0; k < traj.values.size(); ++k) {
    out += format_double(traj.dt * static_cast<double>(k));
    out += ',';
    out += format_double(traj.values[k]);
    out += '\n';
  }
  write_text_file(path, out);
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const int tcol = table.column("t");
  const int xcol = table.column("x");
  if (tcol < 0 || xcol < 0) throw validation_error("trajectory csv: need header t,x");
  if (table.rows.size() < 2) throw validation_error("trajectory csv: need at least 2 rows");
  Trajectory traj;
  traj.values.reserve(table.rows.size());
  double t1 = 0.0;
  double t_last = 0.0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (static_cast<int>(row.size()) <= std::max(tcol, xcol)) {
      throw validation_error("trajectory csv: short row " + std::to_string(i + 2));
    }
    if (i == 1) t1 = parse_double(row[tcol]);
    if (i + 1 == table.rows.size()) t_last = parse_double(row[tcol]);
    traj.values.push_back(parse_double(row[xcol]));
  }
  traj.dt = t1;
  if (!(traj.dt > 0.0)) throw validation_error("trajectory csv: non-positive dt");
  const double expected_last = traj.dt * static_cast<double>(traj.values.size() - 1);
  if (std::abs(t_last - expected_last) > 1e-6 * std::max(1.0, expected_last)) {
    throw validation_error("trajectory csv: time column is not a uniform grid");
  }
  return traj;
}

}  // namespace ergofit
