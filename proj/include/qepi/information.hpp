#pragma once

#include "qepi/classical.hpp"
#include "qepi/convolution.hpp"
#include "qepi/fock.hpp"

namespace qepi {

// Selects the inner product: KMB, or one of the rho-linear family
// psi_{k,t}(x,y) = (x + t y)/(1 + t) (k = 1) / (t x + y)/(1 + t) (k = 2).
struct InnerProductSpec {
  enum class Kind { kmb, linear };
  Kind kind = Kind::kmb;
  int k = 1;       // 1 or 2 (linear only)
  double t = 0.0;  // in [0,1] (linear only)
};

InnerProductSpec kmb_spec();
InnerProductSpec linear_spec(int k, double t);

// Multiplier f for pi_rho^f. psi-type multipliers stay finite at zero
// eigenvalues; phi-type ones diverge there.
struct PiFunction {
  enum class Type { psi_kmb, phi_kmb, psi_linear, phi_linear };
  Type type = Type::psi_kmb;
  int k = 1;
  double t = 0.0;

  double operator()(double x, double y) const;
  bool is_phi() const {
    return type == Type::phi_kmb || type == Type::phi_linear;
  }
};

PiFunction psi_of(const InnerProductSpec& spec);
PiFunction phi_of(const InnerProductSpec& spec);

// (pi_rho^f A)_{ij} = f(lambda_i, lambda_j) A_{ij} in the eigenbasis of rho.
// For phi-type f, entries with an eigenvalue <= floor are allowed only when A
// carries negligible weight there (else SupportDeficient).
Mat pi_superop(const SpectralDecomposition& d, const PiFunction& f,
               const Mat& A);
Mat pi_superop(const DensityMatrix& rho, const PiFunction& f, const Mat& A);

// -sum lambda ln lambda over eigenvalues > floor, in nats.
double entropy(const DensityMatrix& rho);
double entropy_of(const Mat& rho_like);

// L(rho) = [a^dag, [a, rho]].
Mat lindbladian_op(const Mat& rho);
// Public form with the support precondition (SupportTooHigh otherwise).
Mat lindbladian(const DensityMatrix& rho);

enum class HeatMethod { superoperator_expm, gauss_hermite };

struct HeatOptions {
  int max_expm_cutoff = 40;       // superoperator is (N+1)^2-dimensional
  QuadratureBudget quadrature{};  // for the Gauss-Hermite path
};

DensityMatrix heat_semigroup(const DensityMatrix& rho, double t,
                             HeatMethod method, const HeatOptions& opts = {});

// Converged series action of e^{-tL} on rho (internally stepped); used for
// the short-time derivatives of the de Bruijn check.
Mat heat_action(const Mat& rho, double t);

struct ScoreOperator {
  Mat entries;
  int mode = 0;
  InnerProductSpec spec;
};

enum class SupportPolicy { error, restrict_to_support };

// KMB: pi^{phi_KMB}([a, rho]) = [a, log rho]; both routes evaluated and
// cross-checked. Linear: pi^{phi_{k,t}}([a, rho]).
ScoreOperator score(const DensityMatrix& rho, int mode,
                    const InnerProductSpec& spec,
                    SupportPolicy policy = SupportPolicy::error);

struct FisherValue {
  double value = 0.0;  // nats per unit t
  InnerProductSpec spec;
  bool divergent = false;
  // KMB only: relative difference between the norm-form and the direct
  // double-commutator form.
  double cross_residual = 0.0;
};

// KMB: both tr(rho [a^dag, [a, log rho]]) and ||S||^2 paths, cross-checked.
FisherValue fisher(const DensityMatrix& rho, const InnerProductSpec& spec);

// <A,B>_{rho,k,t}; works for any square dimension (also multi-register
// product states), since the linear pi needs no eigenbasis.
Complex linear_inner(const Mat& rho_like, const InnerProductSpec& spec,
                     const Mat& A, const Mat& B);

Complex kmb_inner(const DensityMatrix& rho, const Mat& A, const Mat& B);

struct DebruijnResult {
  double derivative = 0.0;   // Richardson-extrapolated one-sided slope at t=0
  double fisher_value = 0.0; // I_KMB(rho)
  double residual_rel = 0.0;
};

DebruijnResult debruijn_check(const DensityMatrix& rho,
                              double dt_base = 1e-3);

}  // namespace qepi
