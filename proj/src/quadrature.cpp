#include "qepi/quadrature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qepi {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights are
// mu0 * (first eigenvector component)^2.
QuadratureRule golub_welsch(const RealVec& beta, double mu0) {
  const int n = static_cast<int>(beta.size()) + 1;
  RealMat J = RealMat::Zero(n, n);
  for (int k = 0; k < n - 1; ++k) {
    J(k, k + 1) = beta[k];
    J(k + 1, k) = beta[k];
  }
  Eigen::SelfAdjointEigenSolver<RealMat> es(J);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::ConvergenceFailure, "golub_welsch: eigensolver failed");
  QuadratureRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    double v0 = es.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "gauss_hermite: n < 1");
  RealVec beta(n - 1);
  for (int k = 1; k < n; ++k) beta[k - 1] = std::sqrt(k / 2.0);
  return golub_welsch(beta, std::sqrt(M_PI));
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "gauss_legendre: n < 1");
  if (!(b > a)) throw Error(ErrorCode::InvalidParameter, "gauss_legendre: b <= a");
  RealVec beta(n - 1);
  for (int k = 1; k < n; ++k) beta[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  QuadratureRule rule = golub_welsch(beta, 2.0);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = mid + half * rule.nodes[k];
    rule.weights[k] *= half;
  }
  return rule;
}

}  // namespace qepi
