#pragma once

#include <cmath>

#include "gaussk/kahler.hpp"
#include "gaussk/types.hpp"

namespace gaussk::testing {

// Single bosonic mode, QP basis: metric and complex structure of the
// squeezed family parametrized by (rho, phi).
inline Mat boson1_G(double rho, double phi) {
  Mat G(2, 2);
  G << std::cosh(rho) + std::cos(phi) * std::sinh(rho), std::sin(phi) * std::sinh(rho),
      std::sin(phi) * std::sinh(rho), std::cosh(rho) - std::cos(phi) * std::sinh(rho);
  return G;
}

inline Mat boson1_J(double rho, double phi) {
  Mat J(2, 2);
  J << -std::sin(phi) * std::sinh(rho), std::cos(phi) * std::sinh(rho) + std::cosh(rho),
      std::cos(phi) * std::sinh(rho) - std::cosh(rho), std::sin(phi) * std::sinh(rho);
  return J;
}

// Two fermionic modes, QP basis (q1, q2, p1, p2): the even-parity family
// J_plus(theta, phi); theta = 0 is the standard structure.
inline Mat fermion1_Jplus(double theta, double phi) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  Mat J(4, 4);
  J << 0, -st * sp, ct, st * cp,
      st * sp, 0, -st * cp, ct,
      -ct, st * cp, 0, st * sp,
      -st * cp, -ct, -st * sp, 0;
  return J;
}

inline Mat fermion1_Jminus(double theta, double phi) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  Mat J(4, 4);
  J << 0, st * sp, -ct, -st * cp,
      -st * sp, 0, -st * cp, ct,
      ct, st * cp, 0, st * sp,
      st * cp, -ct, -st * sp, 0;
  return J;
}

}  // namespace gaussk::testing
