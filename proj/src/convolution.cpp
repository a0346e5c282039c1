#include "qepi/convolution.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "qepi/quadrature.hpp"

namespace qepi {

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw Error(ErrorCode::InvalidParameter, "eta outside [0,1]");
}

Mat BeamSplitterUnitary::full() const {
  Mat U = Mat::Zero(graded_dim(cutoff), graded_dim(cutoff));
  for (int s = 0; s <= cutoff; ++s) {
    int o = s * (s + 1) / 2;
    U.block(o, o, s + 1, s + 1) = blocks[s];
  }
  return U;
}

BeamSplitterUnitary beam_splitter_unitary(double eta, int cutoff) {
  check_eta(eta);
  if (cutoff < 1)
    throw Error(ErrorCode::InvalidParameter, "beam_splitter_unitary: cutoff < 1");
  const double theta = std::acos(std::sqrt(eta));
  BeamSplitterUnitary U;
  U.cutoff = cutoff;
  U.eta = eta;
  U.blocks.reserve(cutoff + 1);
  for (int s = 0; s <= cutoff; ++s) {
    // Sector generator a1^dag a2 - a1 a2^dag on basis |n1, s-n1>, n1 = 0..s.
    // Real skew-symmetric, so the exponential is real orthogonal.
    RealMat G = RealMat::Zero(s + 1, s + 1);
    for (int n1 = 0; n1 <= s; ++n1) {
      const int n2 = s - n1;
      if (n1 + 1 <= s) G(n1 + 1, n1) += std::sqrt(double(n1 + 1)) * std::sqrt(double(n2));
      if (n1 - 1 >= 0) G(n1 - 1, n1) -= std::sqrt(double(n1)) * std::sqrt(double(n2 + 1));
    }
    U.blocks.push_back(((theta * G).exp()).cast<Complex>());
  }
  return U;
}

GradedTwoModeState apply_beam_splitter(const BeamSplitterUnitary& U,
                                       const GradedTwoModeState& T) {
  if (U.cutoff != T.cutoff)
    throw Error(ErrorCode::DimensionMismatch, "apply_beam_splitter: cutoff mismatch");
  const int N = T.cutoff;
  GradedTwoModeState out;
  out.cutoff = N;
  out.entries = Mat(T.entries.rows(), T.entries.cols());
  for (int s = 0; s <= N; ++s) {
    const int os = s * (s + 1) / 2;
    for (int sp = 0; sp <= N; ++sp) {
      const int op = sp * (sp + 1) / 2;
      out.entries.block(os, op, s + 1, sp + 1) =
          U.blocks[s] * T.entries.block(os, op, s + 1, sp + 1) *
          U.blocks[sp].adjoint();
    }
  }
  return out;
}

Mat qconv_op(const Mat& A, const Mat& B, double eta, int cutoff) {
  check_eta(eta);
  BeamSplitterUnitary U = beam_splitter_unitary(eta, cutoff);
  GradedTwoModeState T = graded_tensor(A, B, cutoff);
  return partial_trace(apply_beam_splitter(U, T), 2);
}

DensityMatrix qconv(const DensityMatrix& rho, const DensityMatrix& sigma,
                    double eta) {
  if (rho.cutoff != sigma.cutoff)
    throw Error(ErrorCode::DimensionMismatch, "qconv: cutoffs differ");
  Mat out = qconv_op(rho.entries, sigma.entries, eta, rho.cutoff);
  out = hermitize(out);
  double tr = out.trace().real();
  DensityMatrix result;
  result.entries = std::move(out);
  result.cutoff = rho.cutoff;
  result.trace_deficit = std::max(0.0, 1.0 - tr);
  return result;
}

DensityMatrix symmetric_qconv(const std::vector<DensityMatrix>& states) {
  if (states.empty())
    throw Error(ErrorCode::EmptySubset, "symmetric_qconv: empty state list");
  DensityMatrix cur = states[0];
  for (size_t k = 1; k < states.size(); ++k)
    cur = qconv(cur, states[k], 1.0 - 1.0 / double(k + 1));
  return cur;
}

namespace {

Mat displaced(const Mat& A, Complex z, int cutoff) {
  Mat D = displacement(z, cutoff).entries;
  return D * A * D.adjoint();
}

}  // namespace

Mat qcconv_op(const Mat& A, const ClassicalRV& X, double t, int cutoff,
              const QuadratureBudget& budget) {
  if (t < 0) throw Error(ErrorCode::InvalidParameter, "qcconv: t < 0");
  if (t == 0.0) return A;
  const double st = std::sqrt(t);
  if (X.kind == ClassicalRV::Kind::finite) {
    Mat out = Mat::Zero(A.rows(), A.cols());
    for (size_t i = 0; i < X.points.size(); ++i)
      out += X.probs[i] * displaced(A, st * X.points[i], cutoff);
    return out;
  }
  // Gaussian with scale h: density (1/(pi h)) e^{-|x|^2/h}; substituting
  // x = sqrt(h) (u + i v) gives the plain Gauss-Hermite kernel e^{-u^2-v^2}.
  const int n = budget.gauss_hermite_nodes;
  if (n * n > budget.max_terms)
    throw Error(ErrorCode::QuadratureBudgetExceeded,
                "qcconv: Gauss-Hermite node budget exceeded");
  if (X.h == 0.0) {
    return displaced(A, st * X.mean, cutoff);
  }
  QuadratureRule rule = gauss_hermite(n);
  const double scale = st * std::sqrt(X.h);
  Mat out = Mat::Zero(A.rows(), A.cols());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex z = st * X.mean + scale * Complex(rule.nodes[i], rule.nodes[j]);
      out += (rule.weights[i] * rule.weights[j] / M_PI) * displaced(A, z, cutoff);
    }
  return out;
}

DensityMatrix qcconv(const DensityMatrix& rho, const ClassicalRV& X, double t,
                     const QuadratureBudget& budget) {
  Mat out = hermitize(qcconv_op(rho.entries, X, t, rho.cutoff, budget));
  double tr = out.trace().real();
  DensityMatrix result;
  result.entries = std::move(out);
  result.cutoff = rho.cutoff;
  result.trace_deficit = std::max(0.0, 1.0 - tr);
  return result;
}

Complex char_function_at(const Mat& T, Complex z) {
  int n = require_square(T, "char_function_at");
  return (T * displacement(z, n - 1).entries).trace();
}

CharGrid char_function(const Mat& T, const std::vector<Complex>& grid,
                       std::string provenance) {
  CharGrid out;
  out.points = grid;
  out.provenance = std::move(provenance);
  out.values.reserve(grid.size());
  for (Complex z : grid) out.values.push_back(char_function_at(T, z));
  return out;
}

std::vector<Complex> standard_char_grid() {
  std::vector<Complex> grid;
  for (double r : {0.25, 0.5, 1.0, 1.5, 2.0})
    for (int k = 0; k < 5; ++k) {
      double phi = k * M_PI / 4.0;
      grid.push_back(r * Complex(std::cos(phi), std::sin(phi)));
    }
  return grid;
}

MixedConvResidual mixed_conv_identity_check(
    const DensityMatrix& rho, const DensityMatrix& sigma, const ClassicalRV& X,
    const ClassicalRV& Y, double eta, double t1, double t2,
    const QuadratureBudget& budget) {
  check_eta(eta);
  if (t1 < 0 || t2 < 0)
    throw Error(ErrorCode::InvalidParameter, "mixed_conv: negative t");
  MixedConvResidual r;
  r.s = t1 * eta + t2 * (1.0 - eta);
  DensityMatrix lhs = qconv(qcconv(rho, X, t1, budget),
                            qcconv(sigma, Y, t2, budget), eta);
  if (r.s == 0.0) {
    // Both sides reduce to rho boxplus sigma.
    r.degenerate = true;
    r.lambda = 0.0;
    r.residual = trace_norm(lhs.entries - qconv(rho, sigma, eta).entries);
    return r;
  }
  r.lambda = t1 * eta / r.s;
  DensityMatrix rhs =
      qcconv(qconv(rho, sigma, eta), cconv(X, Y, r.lambda), r.s, budget);
  r.residual = trace_norm(lhs.entries - rhs.entries);
  return r;
}

}  // namespace qepi
