#include "topowork/errors.hpp"

#include <fmt/format.h>

namespace topowork {

DegeneratePointError::DegeneratePointError(double t, double x, double magnitude)
    : Error(fmt::format("gap closure: |B| = {:.3g} at (t, x) = ({:.6g}, {:.6g})", magnitude, t, x)),
      t_(t),
      x_(x),
      magnitude_(magnitude) {}

}  // namespace topowork
