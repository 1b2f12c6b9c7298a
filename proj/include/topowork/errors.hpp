#pragma once

#include <stdexcept>
#include <string>

namespace topowork {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |B| fell below the degeneracy threshold: bands touch and geometric
/// quantities are undefined at this point.
class DegeneratePointError : public Error {
 public:
  DegeneratePointError(double t, double x, double magnitude);
  double t() const noexcept { return t_; }
  double x() const noexcept { return x_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  double t_;
  double x_;
  double magnitude_;
};

/// The stereographic z-patch is singular (B points at the south pole).
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Two neighbouring states on a lattice link are (nearly) orthogonal.
class ZeroOverlapError : public Error {
 public:
  using Error::Error;
};

/// A plaquette phase is too large for the lattice sum to be trusted.
class RefineGridError : public Error {
 public:
  using Error::Error;
};

/// Velocity exceeded the configured bound during integration.
class BlowUpError : public Error {
 public:
  using Error::Error;
};

}  // namespace topowork
