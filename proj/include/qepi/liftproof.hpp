#pragma once

#include <vector>

#include "qepi/information.hpp"

namespace qepi {

// Exact matrix element <m|D_z|n> of the displacement operator (associated
// Laguerre closed form). The lifting integral needs the true kernel out to
// radii where the truncated exponential is no longer faithful.
Complex displacement_entry(int m, int n, Complex z);
Mat displacement_entries(int cutoff, Complex z);

// chi_T(z) = tr(T D_z) with the exact kernel: the true characteristic
// function of the (finite-rank) truncated operator T.
Complex char_exact(const Mat& T, Complex z);

struct LiftBudget {
  int nodes = 80;        // per real dimension, tensor Gauss-Legendre
  double r_max = 24.0;   // radius scan limit
  double target = 1e-12; // |chi| level defining the quadrature radius
};

struct RadiusChoice {
  double radius = 0.0;
  double boundary_value = 0.0;  // ring max of |chi| at the chosen radius
};

// Smallest ring radius with max_phi |chi_T(r e^{i phi})| below target.
// SlowDecay if no ring under 1e-6 exists within r_max.
RadiusChoice choose_lift_radius(const Mat& T, const LiftBudget& budget = {});

struct LiftedOperator {
  Mat entries;              // on the two-register tensor space, (N+1)^2
  std::vector<int> subset;  // v, subset of {1,2}
  int cutoff = 0;
  double radius = 0.0;
  double quad_error_estimate = 0.0;
};

// (1/pi) int chi_T(z) W_v(-z) d^2 z with W_v(z) acting as D_{z/sqrt|v|} on
// registers in v and identity elsewhere. v1: n = 2 registers, no classical
// registers.
LiftedOperator lift(const Mat& T, const std::vector<int>& v,
                    const LiftBudget& budget = {});

// F_w factor of the lifting kernel for classical registers (unit-tested
// against the symplectic-displacement algebra; not wired into v1 lifts).
Complex classical_lift_factor(const std::vector<Complex>& xs,
                              const std::vector<int>& w, Complex z);

struct TwoPathResidual {
  Complex lhs{0.0, 0.0};
  Complex rhs{0.0, 0.0};
  double residual_rel = 0.0;
};

// <lift(T,v), lift(R,[2])>_{rho1 (x) rho2, psi}
//   vs tr( (pi^psi_{rho^{boxplus v}}(T)^dag boxplus_{|v|/2} rho^{boxplus v^c}) R ),
// the right side entirely in single-mode arithmetic.
TwoPathResidual lift_pairing_check(const Mat& T, const Mat& R,
                            const DensityMatrix& rho1,
                            const DensityMatrix& rho2,
                            const std::vector<int>& v,
                            const InnerProductSpec& spec,
                            const LiftBudget& budget = {});

// <lift(S_{rho^{boxplus v}}, v), lift(R,[2])> = sqrt(|v|/2) <S_{rho^{boxplus [2]}}, R>.
TwoPathResidual score_lift_check(const DensityMatrix& rho1,
                             const DensityMatrix& rho2, const Mat& R,
                             const std::vector<int>& v,
                             const InnerProductSpec& spec,
                             const LiftBudget& budget = {});

// --- subset projector decomposition on n <= 3 registers ---

// E_k A = tr_k(rho_k A) (x) I_k; P_v = prod_{k not in v} E_k prod_{k in v} (I - E_k).
Mat project_Ek(const Mat& A, const Mat& rho_k, int k, int n_regs, int dim);
Mat project_Pv(const Mat& A, const std::vector<Mat>& rhos,
               const std::vector<int>& v, int dim);

struct ProjectorReport {
  double identity_residual = 0.0;      // || sum_v P_v A - A ||
  double orthogonality_residual = 0.0; // max || P_v P_v' A || for v != v'
  double selfadjoint_residual = 0.0;   // max |<P_v A, B> - <A, P_v B>|
  double idempotent_residual = 0.0;    // max || P_v P_v A - P_v A ||
  double pythagoras_residual = 0.0;    // | ||A||^2 - sum_v ||P_v A||^2 |
};

ProjectorReport projector_decomposition_check(
    const std::vector<DensityMatrix>& states, const std::vector<Mat>& test_ops,
    const InnerProductSpec& spec);

// --- multi-register tensor helpers ---

Mat kron_all(const std::vector<Mat>& factors);
Mat op_on_slot(const Mat& A, int slot, int n_regs, int dim);
// tr_k(M) over slot k (0-based), M on dim^n_regs.
Mat partial_trace_slot(const Mat& M, int slot, int n_regs, int dim);

}  // namespace qepi
