#include "topowork/spin.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "topowork/errors.hpp"

namespace topowork {

namespace {

// Multiply v by a unit phase so that its largest-magnitude entry is real
// positive. Entries within a relative 1e-9 of the maximum count as tied and
// the first of them wins, so symmetric states get a stable choice.
void fix_phase(CVector& v) {
  const double largest = v.cwiseAbs().maxCoeff();
  if (largest == 0.0) return;
  Eigen::Index pick = 0;
  while (std::abs(v[pick]) < largest * (1.0 - 1e-9)) ++pick;
  v *= std::conj(v[pick]) / std::abs(v[pick]);
}

template <typename Solver>
std::vector<BandState> collect(const Solver& solver, int two_j) {
  // Eigen returns ascending eigenvalues.
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  const int dim = static_cast<int>(values.size());
  std::vector<BandState> bands;
  bands.reserve(dim);
  for (int i = 0; i < dim; ++i) {
    const int col = dim - 1 - i;
    BandState s;
    s.two_m = two_j - 2 * i;
    s.energy = values[col];
    s.state = vectors.col(col);
    fix_phase(s.state);
    bands.push_back(std::move(s));
  }
  return bands;
}

}  // namespace

SpinRep spin_generators(int two_j) {
  if (two_j < 1) throw std::invalid_argument("spin_generators: two_j must be >= 1");
  const int dim = two_j + 1;
  const double j = 0.5 * two_j;
  CMatrix raise = CMatrix::Zero(dim, dim);
  CMatrix j3 = CMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double m = j - i;
    j3(i, i) = m;
    // J+ |m> = sqrt(J(J+1) - m(m+1)) |m+1>, and |m+1> sits one row up.
    if (i > 0) raise(i - 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const CMatrix lower = raise.adjoint();
  SpinRep rep;
  rep.two_j = two_j;
  rep.dim = dim;
  rep.j1 = 0.5 * (raise + lower);
  rep.j2 = Complex(0.0, -0.5) * (raise - lower);
  rep.j3 = std::move(j3);
  return rep;
}

CMatrix coupling_matrix(const SpinRep& rep, const BVector& b) {
  return b.b1 * rep.j1 + b.b2 * rep.j2 + b.b3 * rep.j3;
}

std::vector<BandState> eigensystem_for(const SpinRep& rep, const BVector& b,
                                       double degeneracy_threshold) {
  const double mag = b.norm();
  if (!(mag >= degeneracy_threshold) || mag == 0.0)
    throw DegeneratePointError(std::numeric_limits<double>::quiet_NaN(),
                               std::numeric_limits<double>::quiet_NaN(), mag);
  if (rep.dim == 3) {
    // Fixed-size path: this is the hot loop for the dressed-atom field.
    const Eigen::Matrix3cd m = coupling_matrix(rep, b);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(m);
    if (solver.info() != Eigen::Success) throw Error("eigensolver failed to converge");
    return collect(solver, rep.two_j);
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(coupling_matrix(rep, b));
  if (solver.info() != Eigen::Success) throw Error("eigensolver failed to converge");
  return collect(solver, rep.two_j);
}

int band_position(const SpinRep& rep, int two_m) {
  if (two_m > rep.two_j || two_m < -rep.two_j || (rep.two_j - two_m) % 2 != 0)
    throw std::out_of_range("band 2m = " + std::to_string(two_m) + " is not a level of spin " +
                            std::to_string(rep.two_j) + "/2");
  return (rep.two_j - two_m) / 2;
}

BandState band_for(const SpinRep& rep, const BVector& b, int two_m, double degeneracy_threshold) {
  const int pos = band_position(rep, two_m);
  auto bands = eigensystem_for(rep, b, degeneracy_threshold);
  return std::move(bands[pos]);
}

HermitianField::HermitianField(SpinRep rep, FieldParams params)
    : rep_(std::move(rep)), params_(params) {
  params_.validate();
}

HermitianField spin1_field(const FieldParams& params) {
  return HermitianField(spin_generators(2), params);
}

CMatrix hamiltonian_at(const HermitianField& field, double t, double x) {
  return coupling_matrix(field.rep(), sample_B(field.params(), t, x));
}

std::vector<BandState> eigensystem_at(const HermitianField& field, double t, double x) {
  const BVector b = sample_B(field.params(), t, x);
  const double threshold = field.params().degeneracy_threshold();
  if (!(b.norm() >= threshold) || b.norm() == 0.0) throw DegeneratePointError(t, x, b.norm());
  return eigensystem_for(field.rep(), b, threshold);
}

BandState band_at(const HermitianField& field, double t, double x, int two_m) {
  const int pos = band_position(field.rep(), two_m);
  auto bands = eigensystem_at(field, t, x);
  return std::move(bands[pos]);
}

BandState dressed_state_spin1(const BVector& b, double pole_threshold) {
  const double mag = b.norm();
  if (mag == 0.0)
    throw DegeneratePointError(std::numeric_limits<double>::quiet_NaN(),
                               std::numeric_limits<double>::quiet_NaN(), mag);
  const double denom = mag + b.b3;
  if (denom <= pole_threshold * mag)
    throw PoleError("dressed_state_spin1: B is at the south pole of the z-patch");
  const Complex z = Complex(b.b1, b.b2) / denom;
  const double norm = 1.0 + std::norm(z);
  BandState s;
  s.two_m = 2;
  s.energy = mag;
  s.state.resize(3);
  s.state << 1.0 / norm, std::sqrt(2.0) * z / norm, z * z / norm;
  return s;
}

}  // namespace topowork
