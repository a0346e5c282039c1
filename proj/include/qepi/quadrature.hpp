#pragma once

#include "qepi/types.hpp"

namespace qepi {

struct QuadratureRule {
  RealVec nodes;
  RealVec weights;
};

// Nodes/weights for \int_{-inf}^{inf} e^{-x^2} f(x) dx, by Golub-Welsch.
QuadratureRule gauss_hermite(int n);

// Nodes/weights for \int_a^b f(x) dx.
QuadratureRule gauss_legendre(int n, double a, double b);

}  // namespace qepi
