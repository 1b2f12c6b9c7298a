#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "topowork/field.hpp"

namespace topowork {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Spin-J irreducible representation of su(2).
///
/// Basis vectors are ordered m = +J, J-1, ..., -J, so j3 is
/// diag(J, J-1, ..., -J). For J = 1 this is the |1>, |0>, |2> ordering of
/// the F = 1 hyperfine sublevels (m_F = +1, 0, -1).
struct SpinRep {
  int two_j = 1;
  int dim = 2;
  CMatrix j1;
  CMatrix j2;
  CMatrix j3;

  double spin() const { return 0.5 * two_j; }
};

/// Ladder-operator construction of the spin-J generators. two_j >= 1.
SpinRep spin_generators(int two_j);

/// One eigenpair of B.J. The band label is stored as 2m so half-integer
/// spins stay exact; the eigenvalue is m |B|.
struct BandState {
  int two_m = 0;
  double energy = 0.0;
  CVector state;

  double m() const { return 0.5 * two_m; }
};

/// M = B1 J1 + B2 J2 + B3 J3.
CMatrix coupling_matrix(const SpinRep& rep, const BVector& b);

/// Eigenpairs of B.J sorted by descending energy, with each eigenvector
/// rotated so that its largest-magnitude component is real and positive.
/// Throws DegeneratePointError if |B| < degeneracy_threshold.
std::vector<BandState> eigensystem_for(const SpinRep& rep, const BVector& b,
                                       double degeneracy_threshold = 1e-12);

/// Eigenpair with label two_m (throws std::out_of_range if not a level of rep).
BandState band_for(const SpinRep& rep, const BVector& b, int two_m,
                   double degeneracy_threshold = 1e-12);

/// Position of level two_m in the descending-energy ordering.
int band_position(const SpinRep& rep, int two_m);

/// M(t,x) = sum_mu B^mu(t,x) J_mu for a given representation.
class HermitianField {
 public:
  HermitianField(SpinRep rep, FieldParams params);

  const SpinRep& rep() const { return rep_; }
  const FieldParams& params() const { return params_; }

 private:
  SpinRep rep_;
  FieldParams params_;
};

/// The three-level dressed-atom field (spin 1) for the given parameters.
HermitianField spin1_field(const FieldParams& params);

CMatrix hamiltonian_at(const HermitianField& field, double t, double x);

std::vector<BandState> eigensystem_at(const HermitianField& field, double t, double x);

BandState band_at(const HermitianField& field, double t, double x, int two_m);

/// Positive-energy spin-1 dressed state from the stereographic coordinate
/// z = (B1 + i B2) / (|B| + B3):
///
///   |eta> = (|+1> + sqrt(2) z |0> + z^2 |-1>) / (1 + |z|^2)
///
/// Throws PoleError when |B| + B3 <= pole_threshold * |B|.
BandState dressed_state_spin1(const BVector& b, double pole_threshold = 1e-9);

}  // namespace topowork
