#include "topowork/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace topowork {

double FieldParams::energy_scale() const {
  if (alpha > 0.0) return alpha;
  return std::max(nu, std::abs(gamma));
}

double FieldParams::degeneracy_threshold() const { return 1e-12 * energy_scale(); }

void FieldParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(alpha) || !finite(nu) || !finite(gamma) || !finite(omega_tilde) || !finite(k))
    throw std::invalid_argument("field parameters must be finite");
  if (alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
  if (nu < 0.0) throw std::invalid_argument("nu must be >= 0");
  if (omega_tilde <= 0.0) throw std::invalid_argument("omega_tilde must be > 0");
  if (k <= 0.0) throw std::invalid_argument("k must be > 0");
}

double BVector::norm() const { return std::sqrt(b1 * b1 + b2 * b2 + b3 * b3); }

BVector operator+(const BVector& a, const BVector& b) {
  return {a.b1 + b.b1, a.b2 + b.b2, a.b3 + b.b3};
}
BVector operator-(const BVector& a, const BVector& b) {
  return {a.b1 - b.b1, a.b2 - b.b2, a.b3 - b.b3};
}
BVector operator*(double s, const BVector& a) { return {s * a.b1, s * a.b2, s * a.b3}; }

BVector sample_B(const FieldParams& p, double t, double x) {
  const double ct = std::cos(p.omega_tilde * t);
  const double st = std::sin(p.omega_tilde * t);
  const double cx = std::cos(p.k * x);
  const double sx = std::sin(p.k * x);
  return {p.alpha * cx * ct, p.alpha * sx * st, p.gamma + p.nu * ct};
}

FieldDerivatives sample_B_derivatives(const FieldParams& p, double t, double x) {
  const double w = p.omega_tilde;
  const double ct = std::cos(w * t);
  const double st = std::sin(w * t);
  const double cx = std::cos(p.k * x);
  const double sx = std::sin(p.k * x);
  FieldDerivatives d;
  d.dBdt = {-p.alpha * w * cx * st, p.alpha * w * sx * ct, -p.nu * w * st};
  d.dBdx = {-p.alpha * p.k * sx * ct, p.alpha * p.k * cx * st, 0.0};
  return d;
}

double min_gap(const FieldParams& params, int n_grid) {
  if (n_grid < 16) throw std::invalid_argument("min_gap needs n_grid >= 16");
  const double dt = params.period() / n_grid;
  const double dx = params.wavelength() / n_grid;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_grid; ++i)
    for (int j = 0; j < n_grid; ++j) best = std::min(best, sample_B(params, i * dt, j * dx).norm());
  return best;
}

bool is_gapped(const FieldParams& params, int n_grid) {
  return min_gap(params, n_grid) > params.degeneracy_threshold();
}

}  // namespace topowork
