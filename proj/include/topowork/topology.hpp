#pragma once

#include <span>
#include <vector>

#include "topowork/field.hpp"
#include "topowork/spin.hpp"

namespace topowork {

/// Uniform periodic discretisation of the unit cell [0, T) x [0, lambda).
/// Node (i, j) sits at (i T / n_t, j lambda / n_x); t is the row index.
struct GridSpec {
  int n_t = 256;
  int n_x = 256;

  void validate() const;  // n_t, n_x >= 8
};

/// Default tolerance on |raw - rounded| for accepting a value as quantized.
inline constexpr double kQuantizationTolerance = 1e-3;

/// A topological integral and its nearest integer.
struct FluxResult {
  double raw = 0.0;
  long rounded = 0;
  double residual = 0.0;

  static FluxResult from_raw(double raw);
  bool quantized(double tolerance = kQuantizationTolerance) const { return residual < tolerance; }
};

/// Degree of (t, x) -> B/|B| on the sphere,
///   W = (1/4pi) iint B.(dB/dt x dB/dx) / |B|^3 dt dx,
/// by the trapezoid rule on the periodic grid.
/// Throws DegeneratePointError if |B| vanishes at a node.
FluxResult winding_number(const FieldParams& params, const GridSpec& grid);

/// c1 = (1/2pi hbar) iint E dt dx for the positive-energy spin-1 band.
/// Same integrand as winding_number with opposite orientation, so c1 = -2 W.
FluxResult chern_from_flux(const FieldParams& params, const GridSpec& grid);

/// Sum of plaquette Berry phases of band two_m over the cell, divided by 2pi.
/// The raw value is an integer up to roundoff for any gapped band.
/// Throws RefineGridError if a plaquette phase reaches pi/2.
FluxResult lattice_flux(const HermitianField& field, int two_m, const GridSpec& grid);

/// lattice_flux(...).rounded.
int chern_lattice(const HermitianField& field, int two_m, const GridSpec& grid);

/// Chern number -2 m W of the J3 = m sector, with m = two_m / 2.
constexpr int sector_chern(int two_m, int winding) { return -two_m * winding; }

enum class PhaseRowStatus { ok, near_boundary, degenerate };

struct PhaseRow {
  double gamma_over_nu = 0.0;
  double c1_raw = 0.0;
  long c1_rounded = 0;
  double residual = 0.0;
  double min_gap = 0.0;
  PhaseRowStatus status = PhaseRowStatus::ok;
};

/// Points closer than this to a gap-closing ratio gamma/nu in {-1, 0, 1}
/// are flagged rather than computed.
inline constexpr double kPhaseBoundaryMargin = 0.05;

/// One row per entry of gamma_over_nu, in input order. Each row uses
/// params_base with gamma = ratio * nu. A bad row never aborts the scan.
std::vector<PhaseRow> phase_diagram(const FieldParams& params_base,
                                    std::span<const double> gamma_over_nu, const GridSpec& grid);

/// Chern number of an eigenband of H(n) = n.sigma over the unit sphere,
/// sampled on an n_theta x n_phi (theta, phi) grid with outward orientation.
/// upper = true selects the +1 eigenvalue band.
int monopole_sphere_chern(int n_theta, int n_phi, bool upper = true);

}  // namespace topowork
