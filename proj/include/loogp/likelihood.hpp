#ifndef LOOGP_LIKELIHOOD_HPP
#define LOOGP_LIKELIHOOD_HPP

#include <Eigen/Dense>

#include "loogp/adjoint.hpp"
#include "loogp/kernels.hpp"

namespace loogp {

/// Zero-mean Gaussian log marginal likelihood
///   l(theta) = -1/2 Z^T B Z - 1/2 log det(K + noise*I) - n/2 log(2 pi),
/// computed through the Cholesky factor.
double log_marginal_likelihood(const KernelParams& params, const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& Z);

/// Likelihood value and gradient. grad_j = 1/2 <alpha alpha^T - B, dK/dtheta_j>
/// through the same slice contraction as the cross-validation path, so both
/// estimators share the O(n^3 + q n^2) budget.
ValueAndGradient lml_gradient(const KernelParams& params, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& Z, bool estimate_noise = false);

}  // namespace loogp

#endif  // LOOGP_LIKELIHOOD_HPP
