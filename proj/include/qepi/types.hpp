#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qepi {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;

// Eigenvalue floor below which a spectral weight counts as numerically zero.
constexpr double kEigFloor = 1e-13;

enum class ErrorCode {
  CutoffTooSmall,
  InvalidParameter,
  DimensionMismatch,
  ConvergenceFailure,
  ZeroState,
  EmptySubset,
  QuadratureBudgetExceeded,
  UnsupportedMix,
  SupportDeficient,
  SupportTooHigh,
  ExpmDimensionLimit,
  DegenerateScale,
  SlowDecay,
  BudgetExceeded,
  ConfigInvalid,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline Mat hermitize(const Mat& A) { return 0.5 * (A + A.adjoint()); }

inline double frobenius_norm(const Mat& A) { return A.norm(); }

// Sum of singular values. For Hermitian A this is the sum of |eigenvalues|.
double trace_norm(const Mat& A);

// (1/2) ||A - B||_1.
inline double trace_distance(const Mat& A, const Mat& B) {
  return 0.5 * trace_norm(A - B);
}

inline int require_square(const Mat& A, const char* who) {
  if (A.rows() != A.cols())
    throw Error(ErrorCode::DimensionMismatch,
                std::string(who) + ": matrix is not square");
  return static_cast<int>(A.rows());
}

}  // namespace qepi
