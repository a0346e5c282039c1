#include "qepi/types.hpp"

#include <Eigen/SVD>

namespace qepi {

double trace_norm(const Mat& A) {
  if (A.rows() == A.cols() && A.isApprox(A.adjoint(), 1e-12)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Mat> svd(A);
  return svd.singularValues().sum();
}

}  // namespace qepi
