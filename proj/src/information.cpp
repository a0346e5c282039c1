#include "qepi/information.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace qepi {

InnerProductSpec kmb_spec() { return {InnerProductSpec::Kind::kmb, 1, 0.0}; }

InnerProductSpec linear_spec(int k, double t) {
  if (k != 1 && k != 2)
    throw Error(ErrorCode::InvalidParameter, "linear_spec: k must be 1 or 2");
  if (t < 0.0 || t > 1.0)
    throw Error(ErrorCode::InvalidParameter, "linear_spec: t outside [0,1]");
  return {InnerProductSpec::Kind::linear, k, t};
}

namespace {

// Logarithmic mean (x - y)/(ln x - ln y), stable near x = y.
double log_mean(double x, double y) {
  if (x == y) return x;
  double u = std::log(y / x);
  if (std::abs(u) < 1e-8) return x * (1.0 + u / 2.0 + u * u / 6.0);
  return x * std::expm1(u) / u;
}

}  // namespace

double PiFunction::operator()(double x, double y) const {
  switch (type) {
    case Type::psi_kmb:
      return log_mean(x, y);
    case Type::phi_kmb:
      return 1.0 / log_mean(x, y);
    case Type::psi_linear:
      return (k == 1) ? (x + t * y) / (1.0 + t) : (t * x + y) / (1.0 + t);
    case Type::phi_linear:
      return (1.0 + t) / ((k == 1) ? (x + t * y) : (t * x + y));
  }
  return 0.0;
}

PiFunction psi_of(const InnerProductSpec& spec) {
  if (spec.kind == InnerProductSpec::Kind::kmb)
    return {PiFunction::Type::psi_kmb, 1, 0.0};
  return {PiFunction::Type::psi_linear, spec.k, spec.t};
}

PiFunction phi_of(const InnerProductSpec& spec) {
  if (spec.kind == InnerProductSpec::Kind::kmb)
    return {PiFunction::Type::phi_kmb, 1, 0.0};
  return {PiFunction::Type::phi_linear, spec.k, spec.t};
}

Mat pi_superop(const SpectralDecomposition& d, const PiFunction& f,
               const Mat& A) {
  const int n = static_cast<int>(d.eigenvalues.size());
  if (A.rows() != n || A.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "pi_superop: dimension mismatch");
  Mat At = d.eigenvectors.adjoint() * A * d.eigenvectors;
  const double floor = d.floor;
  if (f.is_phi()) {
    // phi is singular at zero eigenvalues; A may only carry negligible
    // weight off the support.
    double off = 0.0, total = At.norm();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d.eigenvalues[i] <= floor || d.eigenvalues[j] <= floor)
          off += std::norm(At(i, j));
    if (std::sqrt(off) > 1e-8 * std::max(total, 1e-300))
      throw Error(ErrorCode::SupportDeficient,
                  "pi_superop: operator has weight off the support of rho");
  }
  Mat out = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      bool on_support = d.eigenvalues[i] > floor && d.eigenvalues[j] > floor;
      if (f.is_phi() && !on_support) continue;  // projected out
      double xi = std::max(d.eigenvalues[i], 0.0);
      double yj = std::max(d.eigenvalues[j], 0.0);
      out(i, j) = f(xi, yj) * At(i, j);
    }
  return d.eigenvectors * out * d.eigenvectors.adjoint();
}

Mat pi_superop(const DensityMatrix& rho, const PiFunction& f, const Mat& A) {
  return pi_superop(spectral(rho.entries), f, A);
}

double entropy_of(const Mat& rho_like) {
  SpectralDecomposition d = spectral(rho_like);
  double s = 0.0;
  for (int i = 0; i < d.eigenvalues.size(); ++i) {
    double lam = d.eigenvalues[i];
    if (lam > d.floor) s -= lam * std::log(lam);
  }
  return s;
}

double entropy(const DensityMatrix& rho) { return entropy_of(rho.entries); }

Mat lindbladian_op(const Mat& rho) {
  int n = require_square(rho, "lindbladian_op");
  Mat a = annihilation_matrix(n - 1);
  Mat inner = a * rho - rho * a;
  Mat ad = a.adjoint();
  return ad * inner - inner * ad;
}

Mat lindbladian(const DensityMatrix& rho) {
  // Support must stay below cutoff - 2 so boundary rows do not contaminate
  // the double commutator.
  const int N = rho.cutoff;
  for (int n = N - 1; n <= N; ++n)
    if (rho.entries(n, n).real() > 1e-12)
      throw Error(ErrorCode::SupportTooHigh,
                  "lindbladian: state has weight at photon number > cutoff-2");
  return hermitize(lindbladian_op(rho.entries));
}

Mat heat_action(const Mat& rho, double t) {
  int n = require_square(rho, "heat_action");
  if (t == 0.0) return rho;
  // Step-split so each per-step generator norm stays O(1); the alternating
  // series then converges without cancellation.
  int steps = std::max(1, static_cast<int>(std::ceil(t * 8.0 * n)));
  const double dt = t / steps;
  Mat out = rho;
  for (int s = 0; s < steps; ++s) {
    Mat term = out, acc = out;
    for (int k = 1; k < 400; ++k) {
      term = (-dt / k) * lindbladian_op(term);
      acc += term;
      if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    out = std::move(acc);
  }
  return hermitize(out);
}

DensityMatrix heat_semigroup(const DensityMatrix& rho, double t,
                             HeatMethod method, const HeatOptions& opts) {
  if (t < 0) throw Error(ErrorCode::InvalidParameter, "heat_semigroup: t < 0");
  if (t == 0.0) return rho;
  const int N = rho.cutoff;
  if (method == HeatMethod::gauss_hermite)
    return qcconv(rho, gaussian_rv(1.0), t, opts.quadrature);
  if (N > opts.max_expm_cutoff)
    throw Error(ErrorCode::ExpmDimensionLimit,
                "heat_semigroup: cutoff exceeds superoperator exponential limit");
  const int d = N + 1;
  Mat a = annihilation_matrix(N), ad = creation_matrix(N);
  Mat I = Mat::Identity(d, d);
  // vec is column-major: vec(A X B) = (B^T (x) A) vec(X).
  Mat L = Eigen::kroneckerProduct(I, (ad * a).eval()).eval() +
          Eigen::kroneckerProduct((a * ad).transpose().eval(), I).eval() -
          Eigen::kroneckerProduct(a.transpose().eval(), ad).eval() -
          Eigen::kroneckerProduct(ad.transpose().eval(), a).eval();
  Mat P = (-t * L).exp();
  Vec v = Eigen::Map<const Vec>(rho.entries.data(), d * d);
  Vec w = P * v;
  Mat out = Eigen::Map<const Mat>(w.data(), d, d);
  out = hermitize(out);
  DensityMatrix result;
  result.entries = std::move(out);
  result.cutoff = N;
  result.trace_deficit = rho.trace_deficit;
  return result;
}

ScoreOperator score(const DensityMatrix& rho, int mode,
                    const InnerProductSpec& spec, SupportPolicy policy) {
  if (mode != 0)
    throw Error(ErrorCode::InvalidParameter, "score: v1 computes mode 0 only");
  const int N = rho.cutoff;
  Mat a = annihilation_matrix(N);
  Mat comm = a * rho.entries - rho.entries * a;
  SpectralDecomposition d = spectral(rho.entries);
  ScoreOperator s;
  s.mode = mode;
  s.spec = spec;
  if (spec.kind == InnerProductSpec::Kind::kmb) {
    MatrixLogResult lg = matrix_log_on_support(rho);
    Mat via_log = a * lg.log - lg.log * a;
    if (!lg.support_deficient) {
      Mat via_pi = pi_superop(d, phi_of(spec), comm);
      if ((via_log - via_pi).cwiseAbs().maxCoeff() > 1e-9)
        throw Error(ErrorCode::ConvergenceFailure,
                    "score: the two KMB score routes disagree beyond 1e-9");
      s.entries = std::move(via_pi);
      return s;
    }
    if (policy == SupportPolicy::error) {
      // Raises SupportDeficient when [a,rho] genuinely leaves the support;
      // harmless tail deficiency passes through.
      s.entries = pi_superop(d, phi_of(spec), comm);
      return s;
    }
    s.entries = std::move(via_log);
    return s;
  }
  s.entries = pi_superop(d, phi_of(spec), comm);
  return s;
}

Complex linear_inner(const Mat& rho_like, const InnerProductSpec& spec,
                     const Mat& A, const Mat& B) {
  if (spec.kind != InnerProductSpec::Kind::linear)
    throw Error(ErrorCode::InvalidParameter, "linear_inner: spec is not linear");
  Complex term1 = (A.adjoint() * rho_like * B).trace();
  Complex term2 = (rho_like * A.adjoint() * B).trace();
  if (spec.k == 1) return (term1 + spec.t * term2) / (1.0 + spec.t);
  return (spec.t * term1 + term2) / (1.0 + spec.t);
}

Complex kmb_inner(const DensityMatrix& rho, const Mat& A, const Mat& B) {
  SpectralDecomposition d = spectral(rho.entries);
  Mat pb = pi_superop(d, PiFunction{PiFunction::Type::psi_kmb, 1, 0.0}, B);
  return (A.adjoint() * pb).trace();
}

FisherValue fisher(const DensityMatrix& rho, const InnerProductSpec& spec) {
  FisherValue out;
  out.spec = spec;
  const int N = rho.cutoff;
  Mat a = annihilation_matrix(N);
  SpectralDecomposition d = spectral(rho.entries);
  Mat comm = a * rho.entries - rho.entries * a;

  // Divergence gate: [a, rho] weight off the numerical support.
  if (d.support_deficient) {
    Mat ct = d.eigenvectors.adjoint() * comm * d.eigenvectors;
    double off = 0.0;
    for (int i = 0; i <= N; ++i)
      for (int j = 0; j <= N; ++j)
        if (d.eigenvalues[i] <= d.floor || d.eigenvalues[j] <= d.floor)
          off += std::norm(ct(i, j));
    if (std::sqrt(off) > 1e-8 * std::max(ct.norm(), 1e-300)) {
      out.divergent = true;
      return out;
    }
  }

  if (spec.kind == InnerProductSpec::Kind::linear) {
    Mat At = d.eigenvectors.adjoint() * comm * d.eigenvectors;
    PiFunction phi = phi_of(spec);
    double acc = 0.0;
    for (int i = 0; i <= N; ++i)
      for (int j = 0; j <= N; ++j) {
        if (d.eigenvalues[i] <= d.floor || d.eigenvalues[j] <= d.floor) continue;
        // ||S||^2 = sum phi(l_i,l_j) |[a,rho]_{ij}|^2.
        acc += phi(d.eigenvalues[i], d.eigenvalues[j]) * std::norm(At(i, j));
      }
    out.value = acc;
    return out;
  }

  // KMB, route 1: eigenbasis double sum
  //   sum |a_{ij}|^2 (l_i - l_j)(ln l_i - ln l_j).
  Mat at = d.eigenvectors.adjoint() * a * d.eigenvectors;
  double route1 = 0.0;
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j) {
      if (i == j) continue;
      double li = d.eigenvalues[i], lj = d.eigenvalues[j];
      if (li <= d.floor || lj <= d.floor) continue;
      route1 += std::norm(at(i, j)) * (li - lj) * (std::log(li) - std::log(lj));
    }

  // Route 2: tr(rho [a^dag, [a, log rho]]) with the support log.
  MatrixLogResult lg = matrix_log_on_support(rho);
  Mat s = a * lg.log - lg.log * a;
  Mat dbl = a.adjoint() * s - s * a.adjoint();
  double route2 = (rho.entries * dbl).trace().real();

  out.cross_residual =
      std::abs(route1 - route2) / std::max(1.0, std::abs(route1));
  if (out.cross_residual > 1e-8)
    throw Error(ErrorCode::ConvergenceFailure,
                "fisher: KMB evaluation routes disagree beyond 1e-8");
  if (route1 < -1e-9)
    throw Error(ErrorCode::ConvergenceFailure, "fisher: negative value");
  out.value = route1;
  return out;
}

DebruijnResult debruijn_check(const DensityMatrix& rho, double dt_base) {
  if (dt_base <= 0)
    throw Error(ErrorCode::InvalidParameter, "debruijn_check: dt <= 0");
  FisherValue I = fisher(rho, kmb_spec());
  if (I.divergent)
    throw Error(ErrorCode::SupportDeficient,
                "debruijn_check: Fisher information divergent");
  const double s0 = entropy(rho);
  // One-sided (t >= 0 only) differences, Richardson-extrapolated.
  double d1 = (entropy_of(heat_action(rho.entries, dt_base)) - s0) / dt_base;
  double d2 =
      (entropy_of(heat_action(rho.entries, dt_base / 2)) - s0) / (dt_base / 2);
  DebruijnResult r;
  r.derivative = 2.0 * d2 - d1;
  r.fisher_value = I.value;
  r.residual_rel = std::abs(r.derivative - I.value) /
                   std::max(std::abs(I.value), 1e-300);
  return r;
}

}  // namespace qepi
