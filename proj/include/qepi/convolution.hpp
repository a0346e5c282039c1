#pragma once

#include <string>
#include <vector>

#include "qepi/classical.hpp"
#include "qepi/fock.hpp"

namespace qepi {

struct ConvolutionParams {
  double eta = 0.5;   // transmissivity, in [0,1]
  double t = 0.0;     // classical scale, >= 0
  double lambda = 0.5;
};

void check_eta(double eta);

// Block-diagonal over total-photon sectors; exactly unitary per sector.
struct BeamSplitterUnitary {
  std::vector<Mat> blocks;  // blocks[s] is (s+1)x(s+1)
  int cutoff = 0;
  double eta = 0.0;

  Mat full() const;  // dense graded matrix
};

BeamSplitterUnitary beam_splitter_unitary(double eta, int cutoff);

// Conjugate a graded two-mode operator by the beam splitter, sector-blockwise.
GradedTwoModeState apply_beam_splitter(const BeamSplitterUnitary& U,
                                       const GradedTwoModeState& T);

// tr_2( U_eta (A (x) B) U_eta^dag ) for arbitrary matrices (linear extension).
Mat qconv_op(const Mat& A, const Mat& B, double eta, int cutoff);

DensityMatrix qconv(const DensityMatrix& rho, const DensityMatrix& sigma,
                    double eta);

// rho^{boxplus v}: left fold with eta = 1 - 1/k at step k.
DensityMatrix symmetric_qconv(const std::vector<DensityMatrix>& states);

struct QuadratureBudget {
  int gauss_hermite_nodes = 20;  // per real dimension
  int max_terms = 4000;
};

// rho *_t X. Finite X: exact weighted sum of displaced states. Gaussian X:
// tensor Gauss-Hermite over the two real displacement dimensions.
Mat qcconv_op(const Mat& A, const ClassicalRV& X, double t, int cutoff,
              const QuadratureBudget& budget = {});
DensityMatrix qcconv(const DensityMatrix& rho, const ClassicalRV& X, double t,
                     const QuadratureBudget& budget = {});

// chi_T(z) = tr(T D_z) with the truncated-exponential displacement.
Complex char_function_at(const Mat& T, Complex z);

struct CharGrid {
  std::vector<Complex> points;
  std::vector<Complex> values;
  std::string provenance;
};

CharGrid char_function(const Mat& T, const std::vector<Complex>& grid,
                       std::string provenance = "");

// Ring-and-axis pattern: |z| in {0.25, 0.5, 1, 1.5, 2}, phases k*pi/4,
// k = 0..4. 25 points.
std::vector<Complex> standard_char_grid();

struct MixedConvResidual {
  double residual = 0.0;  // trace-norm distance between the two sides
  double s = 0.0;
  double lambda = 0.0;
  bool degenerate = false;  // s == 0; both sides equal rho boxplus sigma
};

// (rho *_{t1} X) boxplus_eta (sigma *_{t2} Y)
//   vs (rho boxplus_eta sigma) *_s (X boxplus_lambda Y),
// s = t1 eta + t2 (1-eta), lambda = t1 eta / s.
MixedConvResidual mixed_conv_identity_check(
    const DensityMatrix& rho, const DensityMatrix& sigma, const ClassicalRV& X,
    const ClassicalRV& Y, double eta, double t1, double t2,
    const QuadratureBudget& budget = {});

}  // namespace qepi
