#ifndef LOOGP_ADJOINT_HPP
#define LOOGP_ADJOINT_HPP

#include <Eigen/Dense>

#include "loogp/kernels.hpp"
#include "loogp/loo.hpp"
#include "loogp/scoring.hpp"

namespace loogp {

/// Sensitivity of the criterion with respect to the leave-one-out moments,
/// delta_w = (d_mu, d_sigma2).
struct AdjointSeed {
  Eigen::VectorXd d_mu;
  Eigen::VectorXd d_sigma2;
};

struct ValueAndGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

/// Adjoint of the map K -> (mu, sigma2): returns delta_K such that
/// <delta_K, dK> = <seed, d(mu, sigma2)> for any perturbation dK. Two n x n
/// matrix products and O(n^2) extra storage. The result is generally not
/// symmetric (the rank-one term delta_alpha Z^T breaks symmetry), but its
/// contraction against symmetric slices equals that of its symmetrization.
///
/// This overload takes B explicitly so that any linear predictor whose
/// leave-one-out residuals obey the same closed form can reuse it; B need not
/// be symmetric here, which is why the transposes are written out.
Eigen::MatrixXd adjoint_loo(const Eigen::MatrixXd& B, const Eigen::VectorXd& alpha,
                            const Eigen::VectorXd& kappa_inv, const Eigen::VectorXd& Z,
                            const AdjointSeed& seed);

Eigen::MatrixXd adjoint_loo(const LooWorkspace& ws, const Eigen::VectorXd& Z,
                            const AdjointSeed& seed);

/// Criterion value and full gradient in O(n^3 + q n^2): covariance build,
/// factorization, moments, criterion, adjoint pass, then one contraction per
/// parameter. Peak extra storage beyond K and B is O(n^2).
ValueAndGradient criterion_with_gradient(const KernelParams& params, const Eigen::MatrixXd& X,
                                         const Eigen::VectorXd& Z, ScoringRule rule,
                                         bool estimate_noise = false);

/// Reference path: differentiates the moments parameter by parameter through
/// dB = -B (dK/dtheta_j) B, at Theta(q n^3) cost. Kept as the benchmark foil
/// and as an independent cross-check of the adjoint path.
ValueAndGradient naive_gradient(const KernelParams& params, const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& Z, ScoringRule rule,
                                bool estimate_noise = false);

namespace detail {

/// Gradient part of the naive path from an explicit seed; used by tests to
/// exercise degenerate seeds directly.
Eigen::VectorXd naive_gradient_from_seed(const LooWorkspace& ws, const KernelParams& params,
                                         const Eigen::MatrixXd& X, const Eigen::VectorXd& Z,
                                         const AdjointSeed& seed, bool estimate_noise);

}  // namespace detail

}  // namespace loogp

#endif  // LOOGP_ADJOINT_HPP
