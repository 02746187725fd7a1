#include "loogp/loo.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "loogp/errors.hpp"

namespace loogp {

namespace {

// Unblocked Cholesky on a copy, run only after Eigen's LLT reports failure,
// to locate the first non-positive pivot for the error message.
Eigen::Index find_failing_pivot(Eigen::MatrixXd A) {
  const Eigen::Index n = A.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    double pivot = A(k, k);
    for (Eigen::Index j = 0; j < k; ++j) pivot -= A(k, j) * A(k, j);
    if (!(pivot > 0.0) || !std::isfinite(pivot)) return k;
    const double l = std::sqrt(pivot);
    A(k, k) = l;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      double v = A(i, k);
      for (Eigen::Index j = 0; j < k; ++j) v -= A(i, j) * A(k, j);
      A(i, k) = v / l;
    }
  }
  return n - 1;  // LLT failed but the scan did not; blame the last pivot
}

}  // namespace

LooWorkspace precompute(const Eigen::MatrixXd& K, const Eigen::VectorXd& Z,
                        double noise_variance) {
  const Eigen::Index n = K.rows();
  if (K.cols() != n) throw InvalidInputError("covariance matrix must be square");
  if (Z.size() != n) throw InvalidInputError("observation vector length does not match K");
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw InvalidInputError("noise_variance must be non-negative and finite");
  }
  if (!K.allFinite() || !Z.allFinite()) {
    throw InvalidInputError("covariance or observations contain non-finite entries");
  }

  Eigen::MatrixXd regularized = K;
  regularized.diagonal().array() += noise_variance;

  Eigen::LLT<Eigen::MatrixXd> llt(regularized);
  if (llt.info() != Eigen::Success) {
    throw SingularCovarianceError("covariance factorization failed",
                                  find_failing_pivot(regularized));
  }

  LooWorkspace ws;
  ws.chol = llt.matrixL();
  ws.B = llt.solve(Eigen::MatrixXd::Identity(n, n));
  ws.alpha = ws.B * Z;
  ws.kappa = ws.B.diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(ws.kappa[i] > 0.0)) {
      throw SingularCovarianceError("inverse covariance has non-positive diagonal", i);
    }
  }
  ws.kappa_inv = ws.kappa.cwiseInverse();
  ws.chi = ws.alpha.cwiseProduct(ws.kappa_inv);
  return ws;
}

LooMoments loo_moments(const LooWorkspace& ws, const Eigen::VectorXd& Z) {
  if (Z.size() != ws.B.rows()) {
    throw InvalidInputError("observation vector length does not match workspace");
  }
  LooMoments moments;
  moments.mu = Z - ws.chi;
  moments.sigma2 = ws.kappa_inv;
  return moments;
}

}  // namespace loogp
