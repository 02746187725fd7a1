#include "loogp/likelihood.hpp"

#include <cmath>

#include "loogp/loo.hpp"

namespace loogp {

namespace {

constexpr double kLog2Pi = 1.83787706640934548356065947281;

double lml_from_workspace(const LooWorkspace& ws, const Eigen::VectorXd& Z) {
  const Eigen::Index n = Z.size();
  const double quad = Z.dot(ws.alpha);
  const double half_logdet = ws.chol.diagonal().array().log().sum();
  return -0.5 * quad - half_logdet - 0.5 * static_cast<double>(n) * kLog2Pi;
}

}  // namespace

double log_marginal_likelihood(const KernelParams& params, const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& Z) {
  const Eigen::MatrixXd K = build_covariance(params, X);
  const LooWorkspace ws = precompute(K, Z, params.noise_variance);
  return lml_from_workspace(ws, Z);
}

ValueAndGradient lml_gradient(const KernelParams& params, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& Z, bool estimate_noise) {
  const Eigen::MatrixXd K = build_covariance(params, X);
  const LooWorkspace ws = precompute(K, Z, params.noise_variance);

  ValueAndGradient out;
  out.value = lml_from_workspace(ws, Z);
  const Eigen::MatrixXd delta_K = 0.5 * (ws.alpha * ws.alpha.transpose() - ws.B);
  out.gradient = contract_gradient(params, X, delta_K, estimate_noise);
  return out;
}

}  // namespace loogp
