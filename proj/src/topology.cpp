#include "topowork/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "topowork/errors.hpp"
#include "topowork/geometry.hpp"
#include "topowork/summation.hpp"

namespace topowork {

namespace {

constexpr double kPi = std::numbers::pi;

// Sum of the Wilson-loop phases over a periodic-in-columns lattice of states.
// rows_wrap selects whether the last row links back to the first.
double lattice_phase_sum(const std::vector<CVector>& states, int rows, int cols, bool rows_wrap) {
  auto at = [&](int i, int j) -> const CVector& {
    return states[static_cast<std::size_t>(i % rows) * cols + (j % cols)];
  };
  CompensatedSum total;
  const int row_cells = rows_wrap ? rows : rows - 1;
  for (int i = 0; i < row_cells; ++i)
    for (int j = 0; j < cols; ++j) {
      const double phase = wilson_loop_phase(at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
      if (std::abs(phase) >= 0.5 * kPi)
        throw RefineGridError(fmt::format(
            "plaquette ({}, {}) carries Berry phase {:.3f} >= pi/2; refine the grid", i, j, phase));
      total += phase;
    }
  return total.value();
}

}  // namespace

void GridSpec::validate() const {
  if (n_t < 8 || n_x < 8) throw std::invalid_argument("grid must be at least 8 x 8");
}

FluxResult FluxResult::from_raw(double raw) {
  FluxResult r;
  r.raw = raw;
  r.rounded = std::lround(raw);
  r.residual = std::abs(raw - static_cast<double>(r.rounded));
  return r;
}

FluxResult winding_number(const FieldParams& params, const GridSpec& grid) {
  params.validate();
  grid.validate();
  const double dt = params.period() / grid.n_t;
  const double dx = params.wavelength() / grid.n_x;
  CompensatedSum sum;
  for (int i = 0; i < grid.n_t; ++i)
    for (int j = 0; j < grid.n_x; ++j) {
      const double t = i * dt;
      const double x = j * dx;
      const BVector b = sample_B(params, t, x);
      const double mag = b.norm();
      if (!(mag >= params.degeneracy_threshold()) || mag == 0.0)
        throw DegeneratePointError(t, x, mag);
      const FieldDerivatives d = sample_B_derivatives(params, t, x);
      sum += b.dot(d.dBdt.cross(d.dBdx)) / (mag * mag * mag);
    }
  return FluxResult::from_raw(sum.value() * dt * dx / (4.0 * kPi));
}

FluxResult chern_from_flux(const FieldParams& params, const GridSpec& grid) {
  params.validate();
  grid.validate();
  const double dt = params.period() / grid.n_t;
  const double dx = params.wavelength() / grid.n_x;
  CompensatedSum sum;
  for (int i = 0; i < grid.n_t; ++i)
    for (int j = 0; j < grid.n_x; ++j) sum += electric_field(params, i * dt, j * dx);
  return FluxResult::from_raw(sum.value() * dt * dx / (2.0 * kPi));
}

FluxResult lattice_flux(const HermitianField& field, int two_m, const GridSpec& grid) {
  grid.validate();
  band_position(field.rep(), two_m);
  const FieldParams& params = field.params();
  const double dt = params.period() / grid.n_t;
  const double dx = params.wavelength() / grid.n_x;
  std::vector<CVector> states;
  states.reserve(static_cast<std::size_t>(grid.n_t) * grid.n_x);
  for (int i = 0; i < grid.n_t; ++i)
    for (int j = 0; j < grid.n_x; ++j) states.push_back(band_at(field, i * dt, j * dx, two_m).state);
  return FluxResult::from_raw(lattice_phase_sum(states, grid.n_t, grid.n_x, true) / (2.0 * kPi));
}

int chern_lattice(const HermitianField& field, int two_m, const GridSpec& grid) {
  return static_cast<int>(lattice_flux(field, two_m, grid).rounded);
}

std::vector<PhaseRow> phase_diagram(const FieldParams& params_base,
                                    std::span<const double> gamma_over_nu, const GridSpec& grid) {
  params_base.validate();
  grid.validate();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<PhaseRow> rows;
  rows.reserve(gamma_over_nu.size());
  for (const double ratio : gamma_over_nu) {
    PhaseRow row;
    row.gamma_over_nu = ratio;
    FieldParams params = params_base;
    params.gamma = ratio * params_base.nu;
    const double distance = std::min({std::abs(ratio + 1.0), std::abs(ratio), std::abs(ratio - 1.0)});
    if (distance < kPhaseBoundaryMargin) {
      row.status = PhaseRowStatus::near_boundary;
      row.c1_raw = row.residual = row.min_gap = nan;
      rows.push_back(row);
      continue;
    }
    row.min_gap = min_gap(params, std::max({16, grid.n_t, grid.n_x}));
    try {
      const FluxResult c1 = chern_from_flux(params, grid);
      row.c1_raw = c1.raw;
      row.c1_rounded = c1.rounded;
      row.residual = c1.residual;
    } catch (const DegeneratePointError&) {
      row.status = PhaseRowStatus::degenerate;
      row.c1_raw = row.residual = nan;
    }
    rows.push_back(row);
  }
  return rows;
}

int monopole_sphere_chern(int n_theta, int n_phi, bool upper) {
  if (n_theta < 16 || n_phi < 16) throw std::invalid_argument("sphere grid must be at least 16 x 16");
  // n.sigma = 2 n.J in the spin-1/2 representation.
  const SpinRep rep = spin_generators(1);
  const int two_m = upper ? 1 : -1;
  const double dtheta = kPi / n_theta;
  const double dphi = 2.0 * kPi / n_phi;
  std::vector<CVector> states;
  states.reserve(static_cast<std::size_t>(n_theta + 1) * n_phi);
  for (int i = 0; i <= n_theta; ++i) {
    // Pin the poles exactly so every node of a polar row carries the same state.
    const double theta = i == n_theta ? kPi : i * dtheta;
    const double st = i == 0 || i == n_theta ? 0.0 : std::sin(theta);
    const double ct = i == 0 ? 1.0 : (i == n_theta ? -1.0 : std::cos(theta));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = j * dphi;
      const BVector n{st * std::cos(phi), st * std::sin(phi), ct};
      states.push_back(band_for(rep, 2.0 * n, two_m).state);
    }
  }
  // (theta, phi) is positively oriented with respect to the outward normal.
  const double flux = lattice_phase_sum(states, n_theta + 1, n_phi, false);
  return static_cast<int>(std::lround(flux / (2.0 * kPi)));
}

}  // namespace topowork
