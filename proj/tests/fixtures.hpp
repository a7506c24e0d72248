#pragma once

#include <cmath>

#include "hyperorbit/group.hpp"

namespace fixtures {

// Hyperbolic generators with traces 3 and 5; axes are the imaginary axis and
// the geodesic from -1 to 1, crossing at the base point i.
inline hyperorbit::Presentation schottky_3_5() {
  using hyperorbit::Matrix2;
  const double mu = (3.0 + std::sqrt(5.0)) / 2.0;
  const double lam = (5.0 + std::sqrt(21.0)) / 2.0;
  Matrix2 a;
  a << mu, 0, 0, 1 / mu;
  Matrix2 r;
  r << 1, -1, 1, 1;
  r /= std::sqrt(2.0);
  Matrix2 d;
  d << lam, 0, 0, 1 / lam;
  Matrix2 r_inv;
  r_inv << r(1, 1), -r(0, 1), -r(1, 0), r(0, 0);
  Matrix2 b = r * d * r_inv;
  return hyperorbit::Presentation::matrix_model({'a', 'b'}, {a, b});
}

}  // namespace fixtures
