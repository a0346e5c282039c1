#pragma once

#include <cstdint>
#include <vector>

#include "qepi/types.hpp"

namespace qepi {

// A state in the truncated number basis |0..N>, dim = cutoff+1.
// Hermitian by construction; trace = 1 - trace_deficit where trace_deficit
// is the diagonal mass lost to truncation.
struct DensityMatrix {
  Mat entries;
  int cutoff = 0;
  int mode_count = 1;
  double trace_deficit = 0.0;

  int dim() const { return cutoff + 1; }
};

// Validates Hermiticity/PSD/trace and symmetrizes. Throws InvalidParameter.
DensityMatrix make_density_matrix(Mat entries, int cutoff,
                                  double trace_deficit = 0.0);

enum class OperatorKind { annihilation, creation, displacement, generic };

struct FockOperator {
  Mat entries;
  int cutoff = 0;
  OperatorKind kind = OperatorKind::generic;
  // ||D^dag D - I||_F on the photon block <= cutoff - pad; only meaningful
  // for displacement operators.
  double unitarity_defect = 0.0;
  // |z|^2 > cutoff/4: the displaced content presses against the truncation.
  bool truncation_warning = false;
};

Mat annihilation_matrix(int cutoff);
Mat creation_matrix(int cutoff);
Mat number_matrix(int cutoff);

FockOperator annihilation_op(int cutoff);
FockOperator creation_op(int cutoff);

// exp(z a^dag - conj(z) a) of the truncated generator (scaling and squaring).
FockOperator displacement(Complex z, int cutoff, int defect_pad = 4);

// --- state factories ---

DensityMatrix vacuum_state(int cutoff);
DensityMatrix fock_state(int n, int cutoff);
DensityMatrix thermal_state(double nbar, int cutoff);
DensityMatrix coherent_state(Complex alpha, int cutoff);
// Even cat (|alpha> + |-alpha>)/norm.
DensityMatrix cat_state(Complex alpha, int cutoff);
DensityMatrix fock_mixture_state(const std::vector<double>& weights,
                                 int cutoff);
// Seeded, full support, smooth spectrum: jittered geometric eigenvalues
// conjugated by a banded random rotation. Deterministic per seed.
DensityMatrix random_full_support_state(std::uint64_t seed, int cutoff);

// Zero-pad to a larger cutoff.
DensityMatrix embed(const DensityMatrix& rho, int new_cutoff);

// Cut down to a smaller cutoff; the lost diagonal mass is added to
// trace_deficit. The desk-scale entry point for states whose tails do not
// fit the make_state gate at small cutoffs.
DensityMatrix truncate(const DensityMatrix& rho, int new_cutoff);

// Convex combination; trace deficits combine accordingly.
DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double w_a);

// Rescale to unit trace (e.g. after truncate); the deficit is absorbed.
DensityMatrix normalized(const DensityMatrix& rho);

// --- spectral calculus ---

struct SpectralDecomposition {
  RealVec eigenvalues;   // ascending
  Mat eigenvectors;      // unitary, columns
  double floor = kEigFloor;
  int support_dim = 0;   // count of eigenvalues > floor
  bool support_deficient = false;  // any eigenvalue in (0, floor]

  double reconstruction_error(const Mat& A) const;
};

SpectralDecomposition spectral(const Mat& A, double floor = kEigFloor);

struct MatrixLogResult {
  Mat log;                // log on the support, zero off it
  Mat support_projector;
  bool support_deficient = false;
  int support_dim = 0;
};

MatrixLogResult matrix_log_on_support(const DensityMatrix& rho,
                                      double floor = kEigFloor);

// --- graded two-mode workspace (truncation by total photon number) ---

inline int graded_dim(int cutoff) { return (cutoff + 1) * (cutoff + 2) / 2; }
inline int graded_index(int n1, int n2) {
  int s = n1 + n2;
  return s * (s + 1) / 2 + n1;
}

struct GradedTwoModeState {
  Mat entries;  // graded basis: sectors ascending in s, ascending n1 within
  int cutoff = 0;

  int dim() const { return graded_dim(cutoff); }
};

// P (A (x) B) P with P the projector onto total photon number <= cutoff.
GradedTwoModeState graded_tensor(const Mat& A, const Mat& B, int cutoff);
GradedTwoModeState tensor(const DensityMatrix& rho, const DensityMatrix& sigma);

// Trace out subsystem `which` (1 or 2); result is a single-mode matrix.
Mat partial_trace(const GradedTwoModeState& T, int which);

double tail_mass(const RealVec& diag_weights, int cutoff);

}  // namespace qepi
