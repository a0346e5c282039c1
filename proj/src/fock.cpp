#include "qepi/fock.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace qepi {

namespace {

constexpr double kTailBound = 1e-10;

void check_cutoff(int cutoff, const char* who) {
  if (cutoff < 1)
    throw Error(ErrorCode::InvalidParameter,
                std::string(who) + ": cutoff must be >= 1");
}

DensityMatrix from_diagonal_weights(RealVec w, int cutoff, const char* who) {
  double tail = 1.0 - w.sum();
  if (tail > kTailBound)
    throw Error(ErrorCode::CutoffTooSmall,
                std::string(who) + ": truncation tail mass exceeds 1e-10");
  Mat m = Mat::Zero(cutoff + 1, cutoff + 1);
  m.diagonal() = w.cast<Complex>();
  return make_density_matrix(std::move(m), cutoff, std::max(tail, 0.0));
}

DensityMatrix from_pure_vector(Vec psi, int cutoff, const char* who) {
  double tail = 1.0 - psi.squaredNorm();
  if (tail > kTailBound)
    throw Error(ErrorCode::CutoffTooSmall,
                std::string(who) + ": truncation tail mass exceeds 1e-10");
  Mat m = psi * psi.adjoint();
  return make_density_matrix(std::move(m), cutoff, std::max(tail, 0.0));
}

}  // namespace

DensityMatrix make_density_matrix(Mat entries, int cutoff,
                                  double trace_deficit) {
  if (entries.rows() != cutoff + 1 || entries.cols() != cutoff + 1)
    throw Error(ErrorCode::DimensionMismatch,
                "make_density_matrix: entries do not match cutoff");
  if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw Error(ErrorCode::InvalidParameter,
                "make_density_matrix: input is not Hermitian");
  entries = hermitize(entries);
  Eigen::SelfAdjointEigenSolver<Mat> es(entries, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw Error(ErrorCode::InvalidParameter,
                "make_density_matrix: negative eigenvalue beyond tolerance");
  double tr = entries.trace().real();
  if (std::abs(tr - (1.0 - trace_deficit)) > 1e-8)
    throw Error(ErrorCode::InvalidParameter,
                "make_density_matrix: trace inconsistent with trace_deficit");
  DensityMatrix rho;
  rho.entries = std::move(entries);
  rho.cutoff = cutoff;
  rho.trace_deficit = trace_deficit;
  return rho;
}

Mat annihilation_matrix(int cutoff) {
  Mat a = Mat::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

Mat creation_matrix(int cutoff) { return annihilation_matrix(cutoff).adjoint(); }

Mat number_matrix(int cutoff) {
  Mat n = Mat::Zero(cutoff + 1, cutoff + 1);
  for (int k = 0; k <= cutoff; ++k) n(k, k) = double(k);
  return n;
}

FockOperator annihilation_op(int cutoff) {
  check_cutoff(cutoff, "annihilation_op");
  return {annihilation_matrix(cutoff), cutoff, OperatorKind::annihilation, 0.0};
}

FockOperator creation_op(int cutoff) {
  check_cutoff(cutoff, "creation_op");
  return {creation_matrix(cutoff), cutoff, OperatorKind::creation, 0.0};
}

FockOperator displacement(Complex z, int cutoff, int defect_pad) {
  check_cutoff(cutoff, "displacement");
  Mat gen = z * creation_matrix(cutoff) - std::conj(z) * annihilation_matrix(cutoff);
  FockOperator d;
  d.entries = gen.exp();
  d.cutoff = cutoff;
  d.kind = OperatorKind::displacement;
  int sub = std::max(1, cutoff + 1 - defect_pad);
  Mat gram = d.entries.adjoint() * d.entries;
  d.unitarity_defect =
      (gram.topLeftCorner(sub, sub) - Mat::Identity(sub, sub)).norm();
  d.truncation_warning = std::norm(z) > cutoff / 4.0;
  return d;
}

DensityMatrix vacuum_state(int cutoff) {
  check_cutoff(cutoff, "vacuum_state");
  RealVec w = RealVec::Zero(cutoff + 1);
  w[0] = 1.0;
  return from_diagonal_weights(w, cutoff, "vacuum_state");
}

DensityMatrix fock_state(int n, int cutoff) {
  check_cutoff(cutoff, "fock_state");
  if (n < 0 || n > cutoff)
    throw Error(ErrorCode::CutoffTooSmall, "fock_state: n exceeds cutoff");
  RealVec w = RealVec::Zero(cutoff + 1);
  w[n] = 1.0;
  return from_diagonal_weights(w, cutoff, "fock_state");
}

DensityMatrix thermal_state(double nbar, int cutoff) {
  check_cutoff(cutoff, "thermal_state");
  if (nbar < 0)
    throw Error(ErrorCode::InvalidParameter, "thermal_state: nbar < 0");
  RealVec w(cutoff + 1);
  const double q = nbar / (nbar + 1.0);
  double p = 1.0 / (nbar + 1.0);
  for (int n = 0; n <= cutoff; ++n) {
    w[n] = p;
    p *= q;
  }
  return from_diagonal_weights(w, cutoff, "thermal_state");
}

DensityMatrix coherent_state(Complex alpha, int cutoff) {
  check_cutoff(cutoff, "coherent_state");
  Vec psi(cutoff + 1);
  const double x = std::norm(alpha);
  Complex amp = std::exp(-x / 2.0);
  for (int n = 0; n <= cutoff; ++n) {
    psi[n] = amp;
    amp *= alpha / std::sqrt(double(n + 1));
  }
  return from_pure_vector(psi, cutoff, "coherent_state");
}

DensityMatrix cat_state(Complex alpha, int cutoff) {
  check_cutoff(cutoff, "cat_state");
  const double x = std::norm(alpha);
  const double norm2 = 2.0 * (1.0 + std::exp(-2.0 * x));
  Vec psi(cutoff + 1);
  Complex ap = std::exp(-x / 2.0), am = std::exp(-x / 2.0);
  for (int n = 0; n <= cutoff; ++n) {
    psi[n] = (ap + am) / std::sqrt(norm2);
    ap *= alpha / std::sqrt(double(n + 1));
    am *= -alpha / std::sqrt(double(n + 1));
  }
  return from_pure_vector(psi, cutoff, "cat_state");
}

DensityMatrix fock_mixture_state(const std::vector<double>& weights,
                                 int cutoff) {
  check_cutoff(cutoff, "fock_mixture_state");
  if (weights.empty())
    throw Error(ErrorCode::InvalidParameter, "fock_mixture_state: no weights");
  if (static_cast<int>(weights.size()) > cutoff + 1)
    throw Error(ErrorCode::CutoffTooSmall,
                "fock_mixture_state: weights extend beyond cutoff");
  RealVec w = RealVec::Zero(cutoff + 1);
  for (size_t n = 0; n < weights.size(); ++n) {
    if (weights[n] < 0)
      throw Error(ErrorCode::InvalidParameter,
                  "fock_mixture_state: negative weight");
    w[static_cast<int>(n)] = weights[n];
  }
  double s = w.sum();
  if (std::abs(s - 1.0) > 1e-10)
    throw Error(ErrorCode::InvalidParameter,
                "fock_mixture_state: weights must sum to 1");
  w /= s;
  return from_diagonal_weights(w, cutoff, "fock_mixture_state");
}

DensityMatrix random_full_support_state(std::uint64_t seed, int cutoff) {
  check_cutoff(cutoff, "random_full_support_state");
  const int dim = cutoff + 1;
  std::mt19937_64 rng(seed);
  auto unit = [&rng]() {
    // 53-bit uniform in [0,1); pinned so reports are reproducible per seed.
    return (rng() >> 11) * 0x1.0p-53;
  };
  auto gauss = [&]() {
    double u1 = unit(), u2 = unit();
    while (u1 <= 1e-300) u1 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };

  // Jittered geometric spectrum: full support, well separated levels, so the
  // state behaves smoothly under the heat semigroup.
  const double q = 0.75, jitter = 0.05;
  RealVec lam(dim);
  double g = 1.0;
  for (int n = 0; n < dim; ++n) {
    lam[n] = g * (1.0 + jitter * (2.0 * unit() - 1.0));
    g *= q;
  }
  lam /= lam.sum();

  // Banded random rotation keeps eigenvectors photon-number local.
  const int band = 3;
  const double eps_rot = 0.2;
  Mat H = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    H(i, i) = gauss();
    for (int j = i + 1; j <= std::min(dim - 1, i + band); ++j) {
      Complex g2(gauss(), gauss());
      H(i, j) = g2;
      H(j, i) = std::conj(g2);
    }
  }
  Mat U = (Complex(0, eps_rot) * H).exp();
  Mat rho = U * lam.cast<Complex>().asDiagonal() * U.adjoint();
  rho = hermitize(rho);
  rho /= rho.trace().real();
  return make_density_matrix(std::move(rho), cutoff, 0.0);
}

DensityMatrix embed(const DensityMatrix& rho, int new_cutoff) {
  if (new_cutoff < rho.cutoff)
    throw Error(ErrorCode::InvalidParameter, "embed: new cutoff smaller");
  Mat m = Mat::Zero(new_cutoff + 1, new_cutoff + 1);
  m.topLeftCorner(rho.dim(), rho.dim()) = rho.entries;
  DensityMatrix out;
  out.entries = std::move(m);
  out.cutoff = new_cutoff;
  out.trace_deficit = rho.trace_deficit;
  return out;
}

DensityMatrix truncate(const DensityMatrix& rho, int new_cutoff) {
  if (new_cutoff > rho.cutoff)
    throw Error(ErrorCode::InvalidParameter, "truncate: new cutoff larger");
  DensityMatrix out;
  out.entries = rho.entries.topLeftCorner(new_cutoff + 1, new_cutoff + 1);
  out.cutoff = new_cutoff;
  double lost = rho.entries.trace().real() - out.entries.trace().real();
  out.trace_deficit = rho.trace_deficit + std::max(lost, 0.0);
  return out;
}

DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double w_a) {
  if (a.cutoff != b.cutoff)
    throw Error(ErrorCode::DimensionMismatch, "mix: cutoffs differ");
  if (w_a < 0 || w_a > 1)
    throw Error(ErrorCode::InvalidParameter, "mix: weight outside [0,1]");
  Mat m = w_a * a.entries + (1.0 - w_a) * b.entries;
  double deficit = w_a * a.trace_deficit + (1.0 - w_a) * b.trace_deficit;
  return make_density_matrix(std::move(m), a.cutoff, deficit);
}

DensityMatrix normalized(const DensityMatrix& rho) {
  double tr = rho.entries.trace().real();
  if (tr <= 0)
    throw Error(ErrorCode::ZeroState, "normalized: nonpositive trace");
  DensityMatrix out;
  out.entries = rho.entries / tr;
  out.cutoff = rho.cutoff;
  out.trace_deficit = 0.0;
  return out;
}

double SpectralDecomposition::reconstruction_error(const Mat& A) const {
  Mat rec = eigenvectors * eigenvalues.cast<Complex>().asDiagonal() *
            eigenvectors.adjoint();
  return (rec - A).norm();
}

SpectralDecomposition spectral(const Mat& A, double floor) {
  int n = require_square(A, "spectral");
  if ((A - A.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw Error(ErrorCode::InvalidParameter, "spectral: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(A));
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::ConvergenceFailure, "spectral: eigensolver failed");
  SpectralDecomposition d;
  d.eigenvalues = es.eigenvalues();
  d.eigenvectors = es.eigenvectors();
  d.floor = floor;
  for (int i = 0; i < n; ++i) {
    if (d.eigenvalues[i] > floor) ++d.support_dim;
    else if (d.eigenvalues[i] > 0) d.support_deficient = true;
  }
  if (d.support_dim < n) d.support_deficient = true;
  return d;
}

MatrixLogResult matrix_log_on_support(const DensityMatrix& rho, double floor) {
  SpectralDecomposition d = spectral(rho.entries, floor);
  if (d.support_dim == 0)
    throw Error(ErrorCode::ZeroState, "matrix_log_on_support: no support");
  const int n = rho.dim();
  MatrixLogResult out;
  out.support_deficient = d.support_deficient;
  out.support_dim = d.support_dim;
  Mat logd = Mat::Zero(n, n), proj = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (d.eigenvalues[i] > floor) {
      logd(i, i) = std::log(d.eigenvalues[i]);
      proj(i, i) = 1.0;
    }
  }
  out.log = d.eigenvectors * logd * d.eigenvectors.adjoint();
  out.support_projector = d.eigenvectors * proj * d.eigenvectors.adjoint();
  out.log = hermitize(out.log);
  out.support_projector = hermitize(out.support_projector);
  return out;
}

GradedTwoModeState graded_tensor(const Mat& A, const Mat& B, int cutoff) {
  if (A.rows() != cutoff + 1 || B.rows() != cutoff + 1 ||
      A.cols() != cutoff + 1 || B.cols() != cutoff + 1)
    throw Error(ErrorCode::DimensionMismatch, "graded_tensor: cutoff mismatch");
  GradedTwoModeState T;
  T.cutoff = cutoff;
  T.entries = Mat::Zero(graded_dim(cutoff), graded_dim(cutoff));
  for (int s = 0; s <= cutoff; ++s)
    for (int n1 = 0; n1 <= s; ++n1) {
      const int row = graded_index(n1, s - n1);
      for (int sp = 0; sp <= cutoff; ++sp)
        for (int m1 = 0; m1 <= sp; ++m1)
          T.entries(row, graded_index(m1, sp - m1)) =
              A(n1, m1) * B(s - n1, sp - m1);
    }
  return T;
}

GradedTwoModeState tensor(const DensityMatrix& rho,
                          const DensityMatrix& sigma) {
  if (rho.cutoff != sigma.cutoff)
    throw Error(ErrorCode::DimensionMismatch, "tensor: cutoffs differ");
  return graded_tensor(rho.entries, sigma.entries, rho.cutoff);
}

Mat partial_trace(const GradedTwoModeState& T, int which) {
  if (which != 1 && which != 2)
    throw Error(ErrorCode::InvalidParameter, "partial_trace: which must be 1 or 2");
  const int N = T.cutoff;
  Mat r = Mat::Zero(N + 1, N + 1);
  for (int n = 0; n <= N; ++n)
    for (int m = 0; m <= N; ++m) {
      Complex acc = 0.0;
      for (int k = 0; k + std::max(n, m) <= N; ++k) {
        if (which == 2)
          acc += T.entries(graded_index(n, k), graded_index(m, k));
        else
          acc += T.entries(graded_index(k, n), graded_index(k, m));
      }
      r(n, m) = acc;
    }
  return r;
}

double tail_mass(const RealVec& diag_weights, int cutoff) {
  double kept = 0.0;
  for (int n = 0; n <= cutoff && n < diag_weights.size(); ++n)
    kept += diag_weights[n];
  return 1.0 - kept;
}

}  // namespace qepi
