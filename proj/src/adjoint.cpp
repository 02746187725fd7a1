#include "loogp/adjoint.hpp"

#include "loogp/errors.hpp"

namespace loogp {

Eigen::MatrixXd adjoint_loo(const Eigen::MatrixXd& B, const Eigen::VectorXd& alpha,
                            const Eigen::VectorXd& kappa_inv, const Eigen::VectorXd& Z,
                            const AdjointSeed& seed) {
  const Eigen::Index n = B.rows();
  if (B.cols() != n || alpha.size() != n || kappa_inv.size() != n || Z.size() != n ||
      seed.d_mu.size() != n || seed.d_sigma2.size() != n) {
    throw InvalidInputError("adjoint_loo: inconsistent dimensions");
  }

  const Eigen::VectorXd kappa_inv2 = kappa_inv.cwiseProduct(kappa_inv);
  const Eigen::VectorXd delta_chi = -seed.d_mu;
  const Eigen::VectorXd delta_alpha = delta_chi.cwiseProduct(kappa_inv);
  const Eigen::VectorXd delta_kappa =
      -delta_chi.cwiseProduct(alpha).cwiseProduct(kappa_inv2) -
      seed.d_sigma2.cwiseProduct(kappa_inv2);

  Eigen::MatrixXd delta_B = delta_alpha * Z.transpose();
  delta_B.diagonal() += delta_kappa;

  Eigen::MatrixXd delta_K = -B.transpose() * delta_B * B.transpose();
  return delta_K;
}

Eigen::MatrixXd adjoint_loo(const LooWorkspace& ws, const Eigen::VectorXd& Z,
                            const AdjointSeed& seed) {
  return adjoint_loo(ws.B, ws.alpha, ws.kappa_inv, Z, seed);
}

ValueAndGradient criterion_with_gradient(const KernelParams& params, const Eigen::MatrixXd& X,
                                         const Eigen::VectorXd& Z, ScoringRule rule,
                                         bool estimate_noise) {
  const Eigen::MatrixXd K = build_covariance(params, X);
  const LooWorkspace ws = precompute(K, Z, params.noise_variance);
  const LooMoments moments = loo_moments(ws, Z);
  const ScoreGradient score = criterion(rule, moments, Z);

  const Eigen::MatrixXd delta_K = adjoint_loo(ws, Z, {score.d_mu, score.d_sigma2});

  ValueAndGradient out;
  out.value = score.value;
  out.gradient = contract_gradient(params, X, delta_K, estimate_noise);
  return out;
}

namespace detail {

Eigen::VectorXd naive_gradient_from_seed(const LooWorkspace& ws, const KernelParams& params,
                                         const Eigen::MatrixXd& X, const Eigen::VectorXd& Z,
                                         const AdjointSeed& seed, bool estimate_noise) {
  const Eigen::Index n = Z.size();
  const Eigen::Index q = params.parameter_count(estimate_noise);
  Eigen::VectorXd grad(q);

  for (Eigen::Index j = 0; j < q; ++j) {
    const Eigen::MatrixXd slice = param_derivative(params, X, j, estimate_noise);
    const Eigen::MatrixXd dB = -ws.B * slice * ws.B;
    const Eigen::VectorXd dBZ = dB * Z;

    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ki = ws.kappa_inv[i];
      const double d_mu_i = -dBZ[i] * ki + ws.alpha[i] * dB(i, i) * ki * ki;
      const double d_sigma2_i = -dB(i, i) * ki * ki;
      acc += seed.d_mu[i] * d_mu_i + seed.d_sigma2[i] * d_sigma2_i;
    }
    grad[j] = acc;
  }
  return grad;
}

}  // namespace detail

ValueAndGradient naive_gradient(const KernelParams& params, const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& Z, ScoringRule rule,
                                bool estimate_noise) {
  const Eigen::MatrixXd K = build_covariance(params, X);
  const LooWorkspace ws = precompute(K, Z, params.noise_variance);
  const LooMoments moments = loo_moments(ws, Z);
  const ScoreGradient score = criterion(rule, moments, Z);

  ValueAndGradient out;
  out.value = score.value;
  out.gradient = detail::naive_gradient_from_seed(ws, params, X, Z,
                                                  {score.d_mu, score.d_sigma2}, estimate_noise);
  return out;
}

}  // namespace loogp
