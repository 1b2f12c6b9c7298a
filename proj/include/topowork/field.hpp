#pragma once

#include <numbers>

namespace topowork {

/// Physical parameters of the space-time periodic coupling field
///
///   B1 = alpha cos(k x) cos(w t)
///   B2 = alpha sin(k x) sin(w t)
///   B3 = gamma + nu cos(w t)
///
/// in units with hbar = 1. The unit cell is [0, T) x [0, lambda).
struct FieldParams {
  double alpha = 1.0;
  double nu = 1.0;
  double gamma = 0.5;
  double omega_tilde = 1.0;
  double k = 1.0;

  double period() const { return 2.0 * std::numbers::pi / omega_tilde; }
  double wavelength() const { return 2.0 * std::numbers::pi / k; }

  /// Natural energy scale used for relative thresholds.
  double energy_scale() const;
  /// |B| below this value is treated as a band touching.
  double degeneracy_threshold() const;

  /// Throws std::invalid_argument unless alpha, nu >= 0 and omega_tilde, k > 0.
  void validate() const;
};

struct BVector {
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;

  double norm() const;
  double dot(const BVector& o) const { return b1 * o.b1 + b2 * o.b2 + b3 * o.b3; }
  BVector cross(const BVector& o) const {
    return {b2 * o.b3 - b3 * o.b2, b3 * o.b1 - b1 * o.b3, b1 * o.b2 - b2 * o.b1};
  }
};

BVector operator+(const BVector& a, const BVector& b);
BVector operator-(const BVector& a, const BVector& b);
BVector operator*(double s, const BVector& a);

struct FieldDerivatives {
  BVector dBdt;
  BVector dBdx;
};

BVector sample_B(const FieldParams& params, double t, double x);

/// Closed-form partial derivatives of sample_B.
FieldDerivatives sample_B_derivatives(const FieldParams& params, double t, double x);

/// Minimum of |B| over an n_grid x n_grid uniform sampling of the unit cell.
/// Only a lower-bound indicator: the true minimum may fall between nodes.
double min_gap(const FieldParams& params, int n_grid = 256);

/// min_gap(params, n_grid) above the degeneracy threshold.
bool is_gapped(const FieldParams& params, int n_grid = 256);

}  // namespace topowork
