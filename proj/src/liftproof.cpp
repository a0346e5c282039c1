#include "qepi/liftproof.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "qepi/quadrature.hpp"

namespace qepi {

namespace {

// Associated Laguerre L_n^{(k)}(x) by the three-term recurrence.
double laguerre(int n, int k, double x) {
  if (n == 0) return 1.0;
  double lm1 = 1.0, l = 1.0 + k - x;
  for (int i = 1; i < n; ++i) {
    double next = ((2.0 * i + 1.0 + k - x) * l - (i + k) * lm1) / (i + 1.0);
    lm1 = l;
    l = next;
  }
  return l;
}

double sqrt_fact_ratio(int lo, int hi) {
  // sqrt(lo! / hi!) for lo <= hi.
  double r = 1.0;
  for (int i = lo + 1; i <= hi; ++i) r /= std::sqrt(double(i));
  return r;
}

}  // namespace

Complex displacement_entry(int m, int n, Complex z) {
  const double x = std::norm(z);
  const double gauss = std::exp(-x / 2.0);
  if (m >= n) {
    const int k = m - n;
    return sqrt_fact_ratio(n, m) * std::pow(z, k) * gauss * laguerre(n, k, x);
  }
  const int k = n - m;
  return sqrt_fact_ratio(m, n) * std::pow(-std::conj(z), k) * gauss *
         laguerre(m, k, x);
}

Mat displacement_entries(int cutoff, Complex z) {
  Mat D(cutoff + 1, cutoff + 1);
  for (int m = 0; m <= cutoff; ++m)
    for (int n = 0; n <= cutoff; ++n) D(m, n) = displacement_entry(m, n, z);
  return D;
}

Complex char_exact(const Mat& T, Complex z) {
  int N = require_square(T, "char_exact") - 1;
  Complex acc = 0.0;
  for (int n = 0; n <= N; ++n)
    for (int m = 0; m <= N; ++m) acc += T(n, m) * displacement_entry(m, n, z);
  return acc;
}

RadiusChoice choose_lift_radius(const Mat& T, const LiftBudget& budget) {
  // Full circle: chi of a non-Hermitian operator has no conjugation symmetry.
  constexpr int kPhases = 8;
  double best = std::numeric_limits<double>::infinity();
  double best_r = budget.r_max;
  for (double r = 0.25; r <= budget.r_max + 1e-9; r += 0.25) {
    double ring_max = 0.0;
    for (int k = 0; k < kPhases; ++k) {
      double phi = k * 2.0 * M_PI / kPhases;
      ring_max = std::max(ring_max, std::abs(char_exact(
                                        T, r * Complex(std::cos(phi),
                                                       std::sin(phi)))));
    }
    if (ring_max < budget.target) return {r, ring_max};
    if (ring_max < best) {
      best = ring_max;
      best_r = r;
    }
  }
  if (best > 1e-6)
    throw Error(ErrorCode::SlowDecay,
                "choose_lift_radius: characteristic function does not decay "
                "within the radius budget");
  return {best_r, best};
}

LiftedOperator lift(const Mat& T, const std::vector<int>& v,
                    const LiftBudget& budget) {
  const int N = require_square(T, "lift") - 1;
  if (v.empty() || v.size() > 2)
    throw Error(ErrorCode::InvalidParameter, "lift: v must be {1},{2} or {1,2}");
  for (int k : v)
    if (k != 1 && k != 2)
      throw Error(ErrorCode::InvalidParameter, "lift: register index not in {1,2}");
  if (budget.nodes < 2 || budget.nodes > 512)
    throw Error(ErrorCode::QuadratureBudgetExceeded, "lift: node budget");

  RadiusChoice rc = choose_lift_radius(T, budget);
  QuadratureRule gl = gauss_legendre(budget.nodes, -rc.radius, rc.radius);

  const int d = N + 1, d2 = d * d;
  const double sv = std::sqrt(double(v.size()));
  const bool on1 = std::find(v.begin(), v.end(), 1) != v.end();
  const bool on2 = std::find(v.begin(), v.end(), 2) != v.end();

  LiftedOperator out;
  out.entries = Mat::Zero(d2, d2);
  out.subset = v;
  out.cutoff = N;
  out.radius = rc.radius;
  // Boundary level times the integration area over pi.
  out.quad_error_estimate =
      rc.boundary_value * (2 * rc.radius) * (2 * rc.radius) / M_PI;

  Mat I = Mat::Identity(d, d);
  for (int i = 0; i < budget.nodes; ++i) {
    for (int j = 0; j < budget.nodes; ++j) {
      const Complex z(gl.nodes[i], gl.nodes[j]);
      const Complex chi = char_exact(T, z);
      const double w = gl.weights[i] * gl.weights[j] / M_PI;
      if (std::abs(chi) * w < 1e-18) continue;
      Mat D = displacement_entries(N, -z / sv);
      const Mat& F1 = on1 ? D : I;
      const Mat& F2 = on2 ? D : I;
      // Accumulate chi * w * (F1 (x) F2) without forming the Kronecker
      // product afresh each node.
      for (int r1 = 0; r1 < d; ++r1)
        for (int c1 = 0; c1 < d; ++c1) {
          Complex f = chi * w * F1(r1, c1);
          if (std::abs(f) < 1e-18) continue;
          out.entries.block(r1 * d, c1 * d, d, d) += f * F2;
        }
    }
  }
  return out;
}

Complex classical_lift_factor(const std::vector<Complex>& xs,
                              const std::vector<int>& w, Complex z) {
  if (w.empty()) return Complex(1.0, 0.0);
  const double sw = std::sqrt(double(w.size()));
  Complex acc(0.0, 0.0);
  for (int ell : w) {
    if (ell < 1 || ell > static_cast<int>(xs.size()))
      throw Error(ErrorCode::InvalidParameter, "classical_lift_factor: index");
    const Complex& x = xs[ell - 1];
    acc += (z / sw) * std::conj(x) - std::conj(z / sw) * x;
  }
  return std::exp(acc);
}

namespace {

Complex lifted_inner(const Mat& rho_product, const InnerProductSpec& spec,
                     const Mat& A, const Mat& B) {
  return linear_inner(rho_product, spec, A, B);
}

std::vector<int> complement_of(const std::vector<int>& v) {
  std::vector<int> c;
  for (int k : {1, 2})
    if (std::find(v.begin(), v.end(), k) == v.end()) c.push_back(k);
  return c;
}

DensityMatrix conv_of_subset(const DensityMatrix& rho1,
                             const DensityMatrix& rho2,
                             const std::vector<int>& v) {
  if (v.size() == 2) return qconv(rho1, rho2, 0.5);
  return (v[0] == 1) ? rho1 : rho2;
}

}  // namespace

TwoPathResidual lift_pairing_check(const Mat& T, const Mat& R,
                            const DensityMatrix& rho1,
                            const DensityMatrix& rho2,
                            const std::vector<int>& v,
                            const InnerProductSpec& spec,
                            const LiftBudget& budget) {
  if (spec.kind != InnerProductSpec::Kind::linear)
    throw Error(ErrorCode::InvalidParameter, "lift_pairing_check: spec must be linear");
  if (rho1.cutoff != rho2.cutoff)
    throw Error(ErrorCode::DimensionMismatch, "lift_pairing_check: cutoffs differ");
  const int N = rho1.cutoff;

  LiftedOperator LT = lift(T, v, budget);
  LiftedOperator LR = lift(R, {1, 2}, budget);
  Mat rho_prod = Eigen::kroneckerProduct(rho1.entries, rho2.entries).eval();
  TwoPathResidual out;
  out.lhs = lifted_inner(rho_prod, spec, LT.entries, LR.entries);

  DensityMatrix rho_v = conv_of_subset(rho1, rho2, v);
  Mat piT = pi_superop(rho_v, psi_of(spec), T);
  if (v.size() == 2) {
    // v = [2]: eta = 1 and the complement factor drops out.
    out.rhs = (piT.adjoint() * R).trace();
  } else {
    const std::vector<int> vc = complement_of(v);
    const DensityMatrix& rho_c = (vc[0] == 1) ? rho1 : rho2;
    Mat conv = qconv_op(piT.adjoint(), rho_c.entries, v.size() / 2.0, N);
    out.rhs = (conv * R).trace();
  }
  out.residual_rel =
      std::abs(out.lhs - out.rhs) / std::max(std::abs(out.rhs), 1e-300);
  return out;
}

TwoPathResidual score_lift_check(const DensityMatrix& rho1,
                             const DensityMatrix& rho2, const Mat& R,
                             const std::vector<int>& v,
                             const InnerProductSpec& spec,
                             const LiftBudget& budget) {
  if (spec.kind != InnerProductSpec::Kind::linear)
    throw Error(ErrorCode::InvalidParameter, "score_lift_check: spec must be linear");
  DensityMatrix rho_v = conv_of_subset(rho1, rho2, v);
  ScoreOperator Sv = score(rho_v, 0, spec);

  LiftedOperator LS = lift(Sv.entries, v, budget);
  LiftedOperator LR = lift(R, {1, 2}, budget);
  Mat rho_prod = Eigen::kroneckerProduct(rho1.entries, rho2.entries).eval();

  TwoPathResidual out;
  out.lhs = lifted_inner(rho_prod, spec, LS.entries, LR.entries);

  DensityMatrix rho_full = qconv(rho1, rho2, 0.5);
  ScoreOperator Sfull = score(rho_full, 0, spec);
  out.rhs = std::sqrt(v.size() / 2.0) *
            linear_inner(rho_full.entries, spec, Sfull.entries, R);
  out.residual_rel =
      std::abs(out.lhs - out.rhs) / std::max(std::abs(out.rhs), 1e-300);
  return out;
}

Mat kron_all(const std::vector<Mat>& factors) {
  Mat out = factors.at(0);
  for (size_t i = 1; i < factors.size(); ++i)
    out = Eigen::kroneckerProduct(out, factors[i]).eval();
  return out;
}

Mat op_on_slot(const Mat& A, int slot, int n_regs, int dim) {
  std::vector<Mat> factors(n_regs, Mat::Identity(dim, dim));
  factors.at(slot) = A;
  return kron_all(factors);
}

Mat partial_trace_slot(const Mat& M, int slot, int n_regs, int dim) {
  // Index decomposition (row-major over slots with slot 0 leftmost in the
  // Kronecker product): i = i_left * dim * right + i_slot * right + i_right.
  int left = 1, right = 1;
  for (int s = 0; s < slot; ++s) left *= dim;
  for (int s = slot + 1; s < n_regs; ++s) right *= dim;
  const int dout = left * right;
  Mat out = Mat::Zero(dout, dout);
  for (int il = 0; il < left; ++il)
    for (int ir = 0; ir < right; ++ir)
      for (int jl = 0; jl < left; ++jl)
        for (int jr = 0; jr < right; ++jr) {
          Complex acc = 0.0;
          for (int k = 0; k < dim; ++k)
            acc += M((il * dim + k) * right + ir, (jl * dim + k) * right + jr);
          out(il * right + ir, jl * right + jr) = acc;
        }
  return out;
}

Mat project_Ek(const Mat& A, const Mat& rho_k, int k, int n_regs, int dim) {
  Mat weighted = op_on_slot(rho_k, k, n_regs, dim) * A;
  Mat traced = partial_trace_slot(weighted, k, n_regs, dim);
  // Re-embed identity in slot k.
  int left = 1, right = 1;
  for (int s = 0; s < k; ++s) left *= dim;
  for (int s = k + 1; s < n_regs; ++s) right *= dim;
  const int dtot = left * dim * right;
  Mat out = Mat::Zero(dtot, dtot);
  for (int il = 0; il < left; ++il)
    for (int jl = 0; jl < left; ++jl)
      for (int ir = 0; ir < right; ++ir)
        for (int jr = 0; jr < right; ++jr) {
          Complex val = traced(il * right + ir, jl * right + jr);
          if (val == Complex(0.0, 0.0)) continue;
          for (int m = 0; m < dim; ++m)
            out((il * dim + m) * right + ir, (jl * dim + m) * right + jr) = val;
        }
  return out;
}

Mat project_Pv(const Mat& A, const std::vector<Mat>& rhos,
               const std::vector<int>& v, int dim) {
  const int n = static_cast<int>(rhos.size());
  Mat cur = A;
  for (int k = 0; k < n; ++k) {
    bool in_v = std::find(v.begin(), v.end(), k) != v.end();
    Mat ek = project_Ek(cur, rhos[k], k, n, dim);
    cur = in_v ? (cur - ek).eval() : ek;
  }
  return cur;
}

ProjectorReport projector_decomposition_check(
    const std::vector<DensityMatrix>& states, const std::vector<Mat>& test_ops,
    const InnerProductSpec& spec) {
  if (states.empty() || states.size() > 3)
    throw Error(ErrorCode::InvalidParameter,
                "projector_decomposition_check: v1 handles n <= 3");
  const int n = static_cast<int>(states.size());
  const int dim = states[0].dim();
  std::vector<Mat> rhos;
  for (const auto& s : states) {
    if (s.dim() != dim)
      throw Error(ErrorCode::DimensionMismatch, "projector check: cutoffs differ");
    rhos.push_back(s.entries);
  }
  std::vector<Mat> prod_factors = rhos;
  Mat rho_prod = kron_all(prod_factors);

  // All subsets of [n].
  std::vector<std::vector<int>> subsets;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> v;
    for (int k = 0; k < n; ++k)
      if (mask & (1 << k)) v.push_back(k);
    subsets.push_back(std::move(v));
  }

  ProjectorReport rep;
  for (const Mat& A : test_ops) {
    std::vector<Mat> pv;
    Mat sum = Mat::Zero(A.rows(), A.cols());
    for (const auto& v : subsets) {
      pv.push_back(project_Pv(A, rhos, v, dim));
      sum += pv.back();
    }
    rep.identity_residual =
        std::max(rep.identity_residual, (sum - A).cwiseAbs().maxCoeff());

    double norm2_A =
        std::real(linear_inner(rho_prod, spec, A, A));
    double acc = 0.0;
    for (size_t i = 0; i < subsets.size(); ++i) {
      acc += std::real(linear_inner(rho_prod, spec, pv[i], pv[i]));
      Mat again = project_Pv(pv[i], rhos, subsets[i], dim);
      rep.idempotent_residual = std::max(
          rep.idempotent_residual, (again - pv[i]).cwiseAbs().maxCoeff());
      for (size_t j = 0; j < subsets.size(); ++j) {
        if (i == j) continue;
        Mat cross = project_Pv(pv[i], rhos, subsets[j], dim);
        rep.orthogonality_residual = std::max(rep.orthogonality_residual,
                                              cross.cwiseAbs().maxCoeff());
      }
    }
    rep.pythagoras_residual =
        std::max(rep.pythagoras_residual, std::abs(norm2_A - acc));
  }

  // Self-adjointness of each E_k on pairs of test operators.
  for (size_t i = 0; i + 1 < test_ops.size(); i += 2) {
    const Mat& A = test_ops[i];
    const Mat& B = test_ops[i + 1];
    for (int k = 0; k < n; ++k) {
      Mat ekA = project_Ek(A, rhos[k], k, n, dim);
      Mat ekB = project_Ek(B, rhos[k], k, n, dim);
      Complex left = linear_inner(rho_prod, spec, ekA, B);
      Complex right = linear_inner(rho_prod, spec, A, ekB);
      rep.selfadjoint_residual =
          std::max(rep.selfadjoint_residual, std::abs(left - right));
    }
  }
  return rep;
}

}  // namespace qepi
