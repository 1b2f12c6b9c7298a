#include "topowork/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "topowork/errors.hpp"
#include "topowork/summation.hpp"
#include "topowork/topology.hpp"

namespace topowork {

namespace {

double wrap(double value, double period) {
  double r = value - period * std::floor(value / period);
  if (r >= period || r < 0.0) r = 0.0;
  return r;
}

}  // namespace

Trajectory integrate_trajectory(const FieldParams& params, double mass, double t0, double x0,
                                double v0, double t_end, double dt,
                                const IntegratorOptions& options) {
  params.validate();
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (dt > params.period() / 200.0 * (1.0 + 1e-12))
    throw std::invalid_argument(fmt::format("dt = {:.6g} exceeds T/200 = {:.6g}", dt, params.period() / 200.0));
  if (!(t_end >= t0)) throw std::invalid_argument("t_end must be >= t0");

  const double span = t_end - t0;
  const long steps = span == 0.0 ? 0 : std::max(1L, static_cast<long>(std::ceil(span / dt - 1e-9)));
  const double h = steps == 0 ? dt : span / static_cast<double>(steps);
  const double max_hop = params.wavelength() / 10.0;

  Trajectory traj;
  traj.mass = mass;
  traj.params = params;
  traj.dt = h;
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  traj.samples.push_back({t0, x0, v0});

  auto accel = [&](double t, double x) { return force_components(params, t, x, mass).total / mass; };

  double x = x0;
  double v = v0;
  for (long n = 0; n < steps; ++n) {
    const double t = t0 + static_cast<double>(n) * h;
    const double k1x = v;
    const double k1v = accel(t, x);
    const double k2x = v + 0.5 * h * k1v;
    const double k2v = accel(t + 0.5 * h, x + 0.5 * h * k1x);
    const double k3x = v + 0.5 * h * k2v;
    const double k3v = accel(t + 0.5 * h, x + 0.5 * h * k2x);
    const double k4x = v + h * k3v;
    const double k4v = accel(t + h, x + h * k3x);
    const double x_next = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    const double v_next = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!std::isfinite(v_next) || std::abs(v_next) > options.velocity_bound)
      throw BlowUpError(fmt::format("|v| = {:.4g} exceeds bound {:.4g} at t = {:.6g}", std::abs(v_next),
                                    options.velocity_bound, t + h));
    if (std::abs(x_next - x) >= max_hop)
      throw BlowUpError(fmt::format("position jumped by {:.4g} >= lambda/10 in one step at t = {:.6g}",
                                    std::abs(x_next - x), t + h));
    x = x_next;
    v = v_next;
    traj.samples.push_back({n + 1 == steps ? t_end : t0 + static_cast<double>(n + 1) * h, x, v});
  }
  return traj;
}

SpaceTimePoint fold_to_cell(const FieldParams& params, double t, double x) {
  return {wrap(t, params.period()), wrap(x, params.wavelength())};
}

std::vector<AccelerationSample> acceleration_profile(std::span<const Trajectory> trajectories) {
  std::vector<AccelerationSample> out;
  for (const Trajectory& traj : trajectories) {
    const auto& s = traj.samples;
    if (s.size() < 3) continue;
    const double inv_h2 = 1.0 / (traj.dt * traj.dt);
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      const SpaceTimePoint p = fold_to_cell(traj.params, s[i].t, s[i].x);
      out.push_back({p.t, p.x, (s[i + 1].x - 2.0 * s[i].x + s[i - 1].x) * inv_h2});
    }
  }
  return out;
}

std::vector<Trajectory> release_ensemble(const FieldParams& params, const EnsembleSpec& spec,
                                         const IntegratorOptions& options) {
  if (spec.n_t_init < 1 || spec.n_x_init < 1)
    throw std::invalid_argument("ensemble needs at least one release point per axis");
  if (!(spec.dt_fraction > 0.0)) throw std::invalid_argument("dt_fraction must be > 0");
  const double period = params.period();
  const double dt = spec.dt_fraction * period;
  std::vector<Trajectory> out;
  out.reserve(static_cast<std::size_t>(spec.n_t_init) * spec.n_x_init);
  for (int i = 0; i < spec.n_t_init; ++i)
    for (int j = 0; j < spec.n_x_init; ++j) {
      const double t0 = i * period / spec.n_t_init;
      const double x0 = j * params.wavelength() / spec.n_x_init;
      out.push_back(integrate_trajectory(params, spec.mass, t0, x0, 0.0, t0 + period, dt, options));
    }
  return out;
}

std::vector<Trajectory> synthetic_trajectories(const FieldParams& params, double mass, int n_t,
                                               int n_x, double dt) {
  if (n_t < 1 || n_x < 1) throw std::invalid_argument("synthetic grid must be non-empty");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  std::vector<Trajectory> out;
  out.reserve(static_cast<std::size_t>(n_t) * n_x);
  const double cell_t = params.period() / n_t;
  const double cell_x = params.wavelength() / n_x;
  for (int i = 0; i < n_t; ++i)
    for (int j = 0; j < n_x; ++j) {
      const double t = (i + 0.5) * cell_t;
      const double x = (j + 0.5) * cell_x;
      const double a = force_components(params, t, x, mass).total / mass;
      const double rise = 0.5 * a * dt * dt;
      Trajectory traj;
      traj.mass = mass;
      traj.params = params;
      traj.dt = dt;
      traj.samples = {{t - dt, x + rise, -a * dt}, {t, x, 0.0}, {t + dt, x + rise, a * dt}};
      out.push_back(std::move(traj));
    }
  return out;
}

ReconstructionReport reconstruct_flux(std::span<const Trajectory> trajectories,
                                      const FieldParams& params, double mass, const BinSpec& bins,
                                      const ReconstructionOptions& options) {
  params.validate();
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be > 0");
  if (bins.n_t < 1 || bins.n_x < 1) throw std::invalid_argument("bins must be positive");
  const double period = params.period();
  const double wavelength = params.wavelength();
  const std::size_t n_bins = static_cast<std::size_t>(bins.n_t) * bins.n_x;
  std::vector<CompensatedSum> sums(n_bins);
  std::vector<long> counts(n_bins, 0);

  for (const AccelerationSample& s : acceleration_profile(trajectories)) {
    double estimate = mass * s.a;
    if (options.subtract_known_forces) {
      const ForceSample f = force_components(params, s.t, s.x, mass);
      estimate -= f.grad_eps + f.grad_metric;
    }
    const int bi = std::min(bins.n_t - 1, static_cast<int>(s.t / period * bins.n_t));
    const int bj = std::min(bins.n_x - 1, static_cast<int>(s.x / wavelength * bins.n_x));
    const std::size_t idx = static_cast<std::size_t>(bi) * bins.n_x + bj;
    sums[idx] += estimate;
    ++counts[idx];
  }

  CompensatedSum mean_sum;
  std::size_t populated = 0;
  for (int i = 0; i < bins.n_t; ++i)
    for (int j = 0; j < bins.n_x; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * bins.n_x + j;
      if (counts[idx] > 0) {
        ++populated;
        mean_sum += sums[idx].value() / static_cast<double>(counts[idx]);
      } else {
        mean_sum += electric_field(params, (i + 0.5) * period / bins.n_t,
                                   (j + 0.5) * wavelength / bins.n_x);
      }
    }

  ReconstructionReport report;
  report.n_trajectories = static_cast<int>(trajectories.size());
  const double mean = mean_sum.value() / static_cast<double>(n_bins);
  const FluxResult flux = FluxResult::from_raw(period * wavelength * mean / (2.0 * std::numbers::pi));
  report.estimated_flux = flux.raw;
  report.rounded = flux.rounded;
  report.residual = flux.residual;
  report.coverage = static_cast<double>(populated) / static_cast<double>(n_bins);
  report.sufficient_coverage = report.coverage >= options.min_coverage;
  return report;
}

}  // namespace topowork
