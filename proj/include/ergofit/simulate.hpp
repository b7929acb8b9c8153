// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include "ergofit/model.hpp"
#include "ergofit/rng.hpp"

namespace ergofit {

// A diffusion path sampled on the uniform grid t_k = k*dt, k = 0..n.
struct Trajectory {
  double dt = 0.0;
  std::vector<double> values;  // length n+1

  double t0() const { return 0.0; }
  std::size_t n_steps() const { return values.empty() ? 0 : values.size() - 1; }
  double horizon() const { return dt * static_cast<double>(n_steps()); }
};

// Euler-Maruyama: X_{k+1} = X_k + S(X_k) dt + sigma(X_k) sqrt(dt) xi_k.
Trajectory simulate_path(const std::function<double(double)>& drift,
                         const std::function<double(double)>& diffusion,
                         double x0, double total_time, double dt, RngStream& rng);

// Convenience overloads for the two model kinds.
Trajectory simulate_family_path(const ParametricModel& model, const Theta& theta,
                                double x0, double total_time, double dt,
                                RngStream& rng);
Trajectory simulate_simple_path(const SimpleModel& model, double x0,
                                double total_time, double dt, RngStream& rng);

// One draw from the invariant law via the quantile transform.
double sample_stationary_init(const ParametricModel& model, const Theta& theta,
                              RngStream& rng);
double sample_stationary_init(const SimpleModel& model, RngStream& rng);

// Two-sided Wiener increments on a uniform spatial grid over [-L, L].
// Cell i covers [z_grid[i], z_grid[i+1]] and carries an N(0, dz) increment.
struct WienerGrid {
  std::vector<double> z_grid;      // n_cells + 1 edges, z_grid[0] = -L
  std::vector<double> increments;  // n_cells values
  double dz = 0.0;

  std::size_t n_cells() const { return increments.size(); }
  double midpoint(std::size_t i) const { return z_grid[i] + 0.5 * dz; }
};

WienerGrid wiener_increments(double half_width, double dz, RngStream& rng);

// Trajectory CSV: header "t,x", 17-significant-digit decimal text.
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

}  // namespace ergofit
