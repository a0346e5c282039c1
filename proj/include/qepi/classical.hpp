#pragma once

#include <vector>

#include "qepi/types.hpp"

namespace qepi {

// A C^m-valued random vector (v1: m = 1). Gaussian variables carry a scalar
// scale h; the symplectic characteristic function is chi(z) = e^{-h|z|^2}
// at mean zero, which makes h = 1 the heat-semigroup kernel e^{-t|z|^2}
// after the sqrt(t) rescaling of the convolution.
struct ClassicalRV {
  enum class Kind { gaussian, finite };
  Kind kind = Kind::gaussian;
  int mode_count = 1;

  // gaussian
  Complex mean{0.0, 0.0};
  double h = 0.0;

  // finite support
  std::vector<Complex> points;
  std::vector<double> probs;
};

ClassicalRV gaussian_rv(double h, Complex mean = {0.0, 0.0});
ClassicalRV point_mass_rv(Complex x0);
ClassicalRV finite_rv(std::vector<Complex> points, std::vector<double> probs);
// Uniform on {+x, -x}.
ClassicalRV two_point_rv(Complex x);

// chi_X(z) = E[e^{z conj(x) - conj(z) x}], the t-free convention; the sqrt(t)
// scale is applied by the convolution at the call site.
Complex classical_char(const ClassicalRV& X, Complex z);

// X boxplus_lambda Y = sqrt(lambda) X + sqrt(1-lambda) Y.
ClassicalRV cconv(const ClassicalRV& X, const ClassicalRV& Y, double lambda);

ClassicalRV symmetric_cconv(const std::vector<ClassicalRV>& xs);

// c * X for real c >= 0 (multiplies h by c^2, support points by c).
ClassicalRV scale_rv(const ClassicalRV& X, double c);

}  // namespace qepi
