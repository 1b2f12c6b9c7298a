#pragma once

#include <span>
#include <vector>

#include "topowork/field.hpp"
#include "topowork/geometry.hpp"

namespace topowork {

struct TrajectorySample {
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;
};

/// Equally spaced samples of one classical atom in the positive-energy band.
struct Trajectory {
  double mass = 1.0;
  FieldParams params;
  double dt = 0.0;
  std::vector<TrajectorySample> samples;
};

struct IntegratorOptions {
  /// |v| above this aborts with BlowUpError: the atom is too fast for the
  /// adiabatic force law to hold.
  double velocity_bound = 1e3;
};

/// Fixed-step classical RK4 for m x'' = ForceSample::total from t0 to t_end.
/// The step is adjusted down to land exactly on t_end; every step is
/// recorded, including the initial state. Requires dt <= T / 200.
Trajectory integrate_trajectory(const FieldParams& params, double mass, double t0, double x0,
                                double v0, double t_end, double dt,
                                const IntegratorOptions& options = {});

struct AccelerationSample {
  double t = 0.0;
  double x = 0.0;
  double a = 0.0;
};

/// Map (t, x) into [0, T) x [0, lambda).
SpaceTimePoint fold_to_cell(const FieldParams& params, double t, double x);

/// Central second differences of each trajectory's positions, attached to the
/// folded (t, x) of the middle sample. Trajectories shorter than 3 samples
/// contribute nothing.
std::vector<AccelerationSample> acceleration_profile(std::span<const Trajectory> trajectories);

/// Uniform grid of release points over the unit cell, v0 = 0, one period each.
struct EnsembleSpec {
  int n_t_init = 32;
  int n_x_init = 32;
  double dt_fraction = 1.0 / 2000.0;  // dt = dt_fraction * T
  double mass = 1.0;
};

std::vector<Trajectory> release_ensemble(const FieldParams& params, const EnsembleSpec& spec,
                                         const IntegratorOptions& options = {});

/// Three-sample quadratic trajectories centred on the cell-centred nodes of an
/// n_t x n_x grid, with curvature equal to the analytic total force / m. Their
/// second differences reproduce the force exactly.
std::vector<Trajectory> synthetic_trajectories(const FieldParams& params, double mass, int n_t,
                                               int n_x, double dt);

struct BinSpec {
  int n_t = 32;
  int n_x = 32;
};

struct ReconstructionOptions {
  /// Subtract -d eps/dx and the metric term from m a. Disabling this is the
  /// negative control.
  bool subtract_known_forces = true;
  double min_coverage = 0.9;
};

struct ReconstructionReport {
  int n_trajectories = 0;
  double estimated_flux = 0.0;  // iint E dt dx / 2pi hbar
  long rounded = 0;
  double residual = 0.0;
  double coverage = 0.0;        // populated bins / all bins
  bool sufficient_coverage = false;
};

/// Estimate the Chern number from measured trajectories: per sample
/// E_est = m a + d eps_1/dx + (hbar^2/2m) d g_11/dx at the folded point,
/// averaged per bin; empty bins take the analytic E at the bin centre.
ReconstructionReport reconstruct_flux(std::span<const Trajectory> trajectories,
                                      const FieldParams& params, double mass, const BinSpec& bins,
                                      const ReconstructionOptions& options = {});

}  // namespace topowork
