#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls the library routine it is meant to check.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

#include "topowork/field.hpp"

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

inline topowork::BVector central_dt(const topowork::FieldParams& p, double t, double x, double h) {
  using topowork::sample_B;
  return (1.0 / (2.0 * h)) * (sample_B(p, t + h, x) - sample_B(p, t - h, x));
}

inline topowork::BVector central_dx(const topowork::FieldParams& p, double t, double x, double h) {
  using topowork::sample_B;
  return (1.0 / (2.0 * h)) * (sample_B(p, t, x + h) - sample_B(p, t, x - h));
}

/// E from finite-difference derivatives of the sampled field.
inline double electric_field_fd(const topowork::FieldParams& p, double t, double x, double h = 1e-6) {
  const auto b = topowork::sample_B(p, t, x);
  const auto dx = central_dx(p, t, x, h);
  const auto dt = central_dt(p, t, x, h);
  const double mag = b.norm();
  return b.dot(dx.cross(dt)) / (mag * mag * mag);
}

/// Dense brute-force minimum of |B| over the cell.
inline double min_gap_scan(const topowork::FieldParams& p, int n) {
  double best = 1e300;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      best = std::min(best, topowork::sample_B(p, i * p.period() / n, j * p.wavelength() / n).norm());
  return best;
}

/// Spin-1 matrices written out by hand in the (+1, 0, -1) basis.
inline Eigen::Matrix3cd spin1_matrix(double b1, double b2, double b3) {
  const double s = 1.0 / std::sqrt(2.0);
  const std::complex<double> i(0.0, 1.0);
  Eigen::Matrix3cd m;
  m << b3, s * (b1 - i * b2), 0.0,
       s * (b1 + i * b2), 0.0, s * (b1 - i * b2),
       0.0, s * (b1 + i * b2), -b3;
  return m;
}

/// Top eigenvector of the hand-written spin-1 matrix, via a generic
/// (non-Hermitian) complex eigensolver.
inline Eigen::Vector3cd spin1_top_state(const topowork::FieldParams& p, double t, double x) {
  const auto b = topowork::sample_B(p, t, x);
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(spin1_matrix(b.b1, b.b2, b.b3));
  int best = 0;
  for (int k = 1; k < 3; ++k)
    if (es.eigenvalues()[k].real() > es.eigenvalues()[best].real()) best = k;
  Eigen::Vector3cd v = es.eigenvectors().col(best);
  return v / v.norm();
}

/// g_xx = Re <d eta|(1 - |eta><eta|)|d eta> by central differences of
/// phase-aligned normalised eigenvectors.
inline double metric_projector_fd(const topowork::FieldParams& p, double t, double x, double h = 1e-5) {
  const Eigen::Vector3cd eta = spin1_top_state(p, t, x);
  auto aligned = [&](double xs) {
    Eigen::Vector3cd v = spin1_top_state(p, t, xs);
    const std::complex<double> ov = eta.dot(v);
    return Eigen::Vector3cd(v * std::conj(ov) / std::abs(ov));
  };
  const Eigen::Vector3cd d = (aligned(x + h) - aligned(x - h)) / (2.0 * h);
  const std::complex<double> proj = eta.dot(d);
  return (d.squaredNorm() - std::norm(proj));
}

/// Closed-form spin-J metric of level m: (J(J+1) - m^2)/2 |dn/dx|^2.
inline double metric_closed_form(const topowork::FieldParams& p, double t, double x, double spin = 1.0,
                                 double m = 1.0) {
  const auto b = topowork::sample_B(p, t, x);
  const auto d = topowork::sample_B_derivatives(p, t, x).dBdx;
  const double mag = b.norm();
  const double along = b.dot(d) / mag;
  const double perp2 = d.dot(d) - along * along;
  return 0.5 * (spin * (spin + 1.0) - m * m) * perp2 / (mag * mag);
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20190417);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

/// Random parameter set away from gap closures: alpha/nu in [0.5, 2],
/// gamma/nu in +-[0.1, 0.9] or +-[1.1, 3].
inline topowork::FieldParams random_gapped_params() {
  topowork::FieldParams p;
  p.nu = 1.0;
  p.alpha = uniform(0.5, 2.0);
  const bool inner = uniform(0.0, 1.0) < 0.5;
  const double mag = inner ? uniform(0.1, 0.9) : uniform(1.1, 3.0);
  p.gamma = uniform(0.0, 1.0) < 0.5 ? -mag : mag;
  return p;
}

}  // namespace oracle
