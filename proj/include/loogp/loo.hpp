#ifndef LOOGP_LOO_HPP
#define LOOGP_LOO_HPP

#include <Eigen/Dense>

namespace loogp {

/// Everything the leave-one-out formulas and their adjoint consume, computed
/// once per covariance matrix: B = (K + noise*I)^-1 plus the derived vectors.
struct LooWorkspace {
  Eigen::MatrixXd B;          // (K + noise*I)^-1
  Eigen::VectorXd alpha;      // B Z
  Eigen::VectorXd kappa;      // diag(B)
  Eigen::VectorXd kappa_inv;  // 1 / kappa
  Eigen::VectorXd chi;        // alpha ∘ kappa_inv
  Eigen::MatrixXd chol;       // lower Cholesky factor of K + noise*I
};

/// Leave-one-out predictive moments: point i predicted from all others.
struct LooMoments {
  Eigen::VectorXd mu;
  Eigen::VectorXd sigma2;
};

/// Factorizes K + noise_variance*I, inverts it, and caches the vectors used
/// by both the forward moment evaluation and the adjoint pass. O(n^3).
/// Throws SingularCovarianceError when the factorization fails, naming the
/// first non-positive pivot.
LooWorkspace precompute(const Eigen::MatrixXd& K, const Eigen::VectorXd& Z,
                        double noise_variance);

/// Closed-form leave-one-out moments: mu_i = Z_i - chi_i, sigma2_i = 1/kappa_i.
/// O(n) given the workspace.
LooMoments loo_moments(const LooWorkspace& ws, const Eigen::VectorXd& Z);

}  // namespace loogp

#endif  // LOOGP_LOO_HPP
