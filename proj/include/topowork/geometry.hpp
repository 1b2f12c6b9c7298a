#pragma once

#include <array>

#include "topowork/field.hpp"
#include "topowork/spin.hpp"

namespace topowork {

struct SpaceTimePoint {
  double t = 0.0;
  double x = 0.0;
};

/// Right-hand side of the adiabatic classical equation of motion, split into
/// its three contributions. total == e_field + grad_eps + grad_metric.
struct ForceSample {
  double t = 0.0;
  double x = 0.0;
  double e_field = 0.0;
  double grad_eps = 0.0;     // -d eps_1 / dx
  double grad_metric = 0.0;  // -(hbar^2 / 2m) d g_11 / dx
  double total = 0.0;
};

/// Synthetic electric force on a unit charge in the positive-energy spin-1
/// band: E = hbar B.(dB/dx x dB/dt) / |B|^3 with hbar = 1.
double electric_field(const FieldParams& params, double t, double x);

/// Minimum link overlap modulus accepted by the plaquette routines.
inline constexpr double kMinLinkOverlap = 1e-6;

/// Berry phase -arg(<a|b><b|c><c|d><d|a>) around the loop a -> b -> c -> d.
/// Invariant under independent phase changes of the four states.
/// Result lies in (-pi, pi]. Throws ZeroOverlapError if any |<.|.>| < 1e-6.
double wilson_loop_phase(const CVector& a, const CVector& b, const CVector& c, const CVector& d);

/// Berry phase of band two_m around the plaquette with the given corners,
/// traversed in order. For corners (t,x), (t+dt,x), (t+dt,x+dx), (t,x+dx)
/// the phase approximates E(t,x) dt dx for the top spin-1 band.
double plaquette_curvature(const HermitianField& field, int two_m,
                           const std::array<SpaceTimePoint, 4>& corners);

/// Fubini-Study metric component g_xx of band two_m:
///   sum_{j != m} |<eta_m| dM/dx |eta_j>|^2 / (eps_j - eps_m)^2.
double quantum_metric_g11(const HermitianField& field, double t, double x, int two_m);

/// g_xx of the positive-energy band of the spin-1 field.
double quantum_metric_g11(const FieldParams& params, double t, double x);

/// V_eff = (hbar^2 / 2m) g_11 + eps_1, eps_1 = |B|.
double effective_potential(const FieldParams& params, double t, double x, double mass);

/// Step used for the x-derivative of g_11, relative to the wavelength.
inline constexpr double kMetricGradientStep = 1e-5;

/// -d g_11 / dx by central differences with one Richardson level.
double metric_gradient(const FieldParams& params, double t, double x);

ForceSample force_components(const FieldParams& params, double t, double x, double mass);

}  // namespace topowork
