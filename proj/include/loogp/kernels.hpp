#ifndef LOOGP_KERNELS_HPP
#define LOOGP_KERNELS_HPP

#include <Eigen/Dense>
#include <string>

namespace loogp {

enum class KernelFamily { squared_exponential, matern52 };

std::string kernel_family_name(KernelFamily family);
KernelFamily parse_kernel_family(const std::string& name);

/// Covariance parameters theta = (process_variance, rho_1..rho_d, noise_variance).
/// The noise variance is part of the parameter vector only when it is being
/// estimated; otherwise it is a fixed constant carried along.
struct KernelParams {
  KernelFamily family = KernelFamily::squared_exponential;
  double process_variance = 1.0;
  Eigen::VectorXd length_scales;
  double noise_variance = 0.0;

  Eigen::Index input_dim() const { return length_scales.size(); }

  /// d + 1 free parameters with fixed noise, d + 2 when noise is estimated.
  Eigen::Index parameter_count(bool estimate_noise) const {
    return input_dim() + 1 + (estimate_noise ? 1 : 0);
  }

  /// Throws InvalidInputError unless process_variance > 0, every
  /// length_scale > 0 and noise_variance >= 0 (all finite).
  void validate() const;
};

/// Flattens params into the fixed ordering (variance, rho_1..rho_d[, noise]).
Eigen::VectorXd params_to_vector(const KernelParams& params, bool estimate_noise);

/// Rebuilds params from a flat vector; `like` supplies family and, when the
/// noise is not part of the vector, the fixed noise variance.
KernelParams params_from_vector(const KernelParams& like, const Eigen::VectorXd& theta,
                                bool estimate_noise);

/// k_theta(x, y). Symmetric in (x, y); equals process_variance at zero lag.
double kernel_eval(const KernelParams& params, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y);

/// Noise-free covariance matrix K with K(i,j) = kernel_eval(params, x_i, x_j).
Eigen::MatrixXd build_covariance(const KernelParams& params, const Eigen::MatrixXd& X);

/// dK/dtheta_j as a dense symmetric matrix. Index ordering matches
/// params_to_vector; the noise slice (only valid with estimate_noise) is the
/// identity since the noise enters through K + noise*I.
Eigen::MatrixXd param_derivative(const KernelParams& params, const Eigen::MatrixXd& X,
                                 Eigen::Index j, bool estimate_noise = false);

/// Frobenius contraction <delta_K, dK/dtheta_j> for every parameter j.
/// Derivative slices are generated one at a time, so peak extra storage stays
/// O(n^2); total cost O(q n^2). The noise component, when estimated, is
/// trace(delta_K).
Eigen::VectorXd contract_gradient(const KernelParams& params, const Eigen::MatrixXd& X,
                                  const Eigen::MatrixXd& delta_K, bool estimate_noise = false);

}  // namespace loogp

#endif  // LOOGP_KERNELS_HPP
