#include "topowork/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "topowork/errors.hpp"

namespace topowork {

namespace {

void require_gap(const FieldParams& params, const BVector& b, double t, double x) {
  const double mag = b.norm();
  if (!(mag >= params.degeneracy_threshold()) || mag == 0.0) throw DegeneratePointError(t, x, mag);
}

Complex link(const CVector& from, const CVector& to) {
  const Complex overlap = from.dot(to);  // conjugates `from`
  if (std::abs(overlap) < kMinLinkOverlap)
    throw ZeroOverlapError(
        fmt::format("link overlap {:.3g} below {:.0e}; refine the grid", std::abs(overlap),
                    kMinLinkOverlap));
  return overlap;
}

}  // namespace

double electric_field(const FieldParams& params, double t, double x) {
  const BVector b = sample_B(params, t, x);
  require_gap(params, b, t, x);
  const FieldDerivatives d = sample_B_derivatives(params, t, x);
  const double mag = b.norm();
  return b.dot(d.dBdx.cross(d.dBdt)) / (mag * mag * mag);
}

double wilson_loop_phase(const CVector& a, const CVector& b, const CVector& c, const CVector& d) {
  const Complex loop = link(a, b) * link(b, c) * link(c, d) * link(d, a);
  const double phase = -std::arg(loop);
  // arg is in [-pi, pi]; map -pi onto +pi so the range is (-pi, pi].
  return phase == -std::numbers::pi ? std::numbers::pi : phase;
}

double plaquette_curvature(const HermitianField& field, int two_m,
                           const std::array<SpaceTimePoint, 4>& corners) {
  std::array<CVector, 4> states;
  for (std::size_t i = 0; i < 4; ++i)
    states[i] = band_at(field, corners[i].t, corners[i].x, two_m).state;
  return wilson_loop_phase(states[0], states[1], states[2], states[3]);
}

double quantum_metric_g11(const HermitianField& field, double t, double x, int two_m) {
  const auto bands = eigensystem_at(field, t, x);
  const int pos = band_position(field.rep(), two_m);
  const FieldDerivatives d = sample_B_derivatives(field.params(), t, x);
  const CMatrix dm = coupling_matrix(field.rep(), d.dBdx);
  const CVector dm_eta = dm * bands[pos].state;
  double g = 0.0;
  for (std::size_t j = 0; j < bands.size(); ++j) {
    if (static_cast<int>(j) == pos) continue;
    const double gap = bands[j].energy - bands[pos].energy;
    g += std::norm(bands[j].state.dot(dm_eta)) / (gap * gap);
  }
  return g;
}

double quantum_metric_g11(const FieldParams& params, double t, double x) {
  // Fixed-size spin-1 path; this runs four times per force evaluation.
  static const SpinRep spin1 = spin_generators(2);
  static const Eigen::Matrix3cd j1 = spin1.j1;
  static const Eigen::Matrix3cd j2 = spin1.j2;
  static const Eigen::Matrix3cd j3 = spin1.j3;
  const BVector b = sample_B(params, t, x);
  require_gap(params, b, t, x);
  const FieldDerivatives d = sample_B_derivatives(params, t, x);
  const Eigen::Matrix3cd m = b.b1 * j1 + b.b2 * j2 + b.b3 * j3;
  const Eigen::Matrix3cd dm = d.dBdx.b1 * j1 + d.dBdx.b2 * j2 + d.dBdx.b3 * j3;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(m);
  if (solver.info() != Eigen::Success) throw Error("eigensolver failed to converge");
  // Ascending order: column 2 is the positive-energy band.
  const auto& vecs = solver.eigenvectors();
  const auto& vals = solver.eigenvalues();
  const Eigen::Vector3cd dm_eta = dm * vecs.col(2);
  double g = 0.0;
  for (int j = 0; j < 2; ++j) {
    const double gap = vals[j] - vals[2];
    g += std::norm(vecs.col(j).dot(dm_eta)) / (gap * gap);
  }
  return g;
}

double effective_potential(const FieldParams& params, double t, double x, double mass) {
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be > 0");
  const double g = quantum_metric_g11(params, t, x);
  return g / (2.0 * mass) + sample_B(params, t, x).norm();
}

double metric_gradient(const FieldParams& params, double t, double x) {
  const double h = kMetricGradientStep * params.wavelength();
  auto central = [&](double step) {
    return (quantum_metric_g11(params, t, x + step) - quantum_metric_g11(params, t, x - step)) /
           (2.0 * step);
  };
  const double coarse = central(h);
  const double fine = central(0.5 * h);
  return -(4.0 * fine - coarse) / 3.0;
}

ForceSample force_components(const FieldParams& params, double t, double x, double mass) {
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be > 0");
  const BVector b = sample_B(params, t, x);
  require_gap(params, b, t, x);
  const FieldDerivatives d = sample_B_derivatives(params, t, x);
  const double mag = b.norm();
  ForceSample f;
  f.t = t;
  f.x = x;
  f.e_field = b.dot(d.dBdx.cross(d.dBdt)) / (mag * mag * mag);
  f.grad_eps = -b.dot(d.dBdx) / mag;
  f.grad_metric = metric_gradient(params, t, x) / (2.0 * mass);
  f.total = f.e_field + f.grad_eps + f.grad_metric;
  return f;
}

}  // namespace topowork
