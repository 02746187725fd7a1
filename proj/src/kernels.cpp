#include "loogp/kernels.hpp"

#include <cmath>

#include "loogp/errors.hpp"

namespace loogp {

namespace {

constexpr double kSqrt5 = 2.23606797749978969640917366873;

// Scaled squared distance r^2 = sum_m ((x_m - y_m) / rho_m)^2.
double scaled_sq_dist(const KernelParams& params, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y) {
  double r2 = 0.0;
  for (Eigen::Index m = 0; m < x.size(); ++m) {
    const double u = (x[m] - y[m]) / params.length_scales[m];
    r2 += u * u;
  }
  return r2;
}

double kernel_from_r2(const KernelParams& params, double r2) {
  switch (params.family) {
    case KernelFamily::squared_exponential:
      return params.process_variance * std::exp(-0.5 * r2);
    case KernelFamily::matern52: {
      const double r = std::sqrt(r2);
      return params.process_variance * (1.0 + kSqrt5 * r + (5.0 / 3.0) * r2) *
             std::exp(-kSqrt5 * r);
    }
  }
  return 0.0;  // unreachable
}

// Multiplier matrix F such that dK/drho_m = F ∘ D_m / rho_m^3, with
// D_m(i,l) = (X(i,m) - X(l,m))^2. For the squared exponential F is K itself;
// for Matern-5/2 it is (5/3) sigma2 (1 + sqrt5 r) exp(-sqrt5 r).
struct SliceCommon {
  Eigen::MatrixXd base;  // K (noise-free); variance slice is base / sigma2
  Eigen::MatrixXd fac;   // length-scale slice multiplier
};

SliceCommon make_slice_common(const KernelParams& params, const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  SliceCommon common;
  common.base.resize(n, n);
  common.fac.resize(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index i = l; i < n; ++i) {
      const double r2 = scaled_sq_dist(params, X.row(i).transpose(), X.row(l).transpose());
      const double k = kernel_from_r2(params, r2);
      double f;
      if (params.family == KernelFamily::squared_exponential) {
        f = k;
      } else {
        const double r = std::sqrt(r2);
        f = (5.0 / 3.0) * params.process_variance * (1.0 + kSqrt5 * r) * std::exp(-kSqrt5 * r);
      }
      common.base(i, l) = k;
      common.base(l, i) = k;
      common.fac(i, l) = f;
      common.fac(l, i) = f;
    }
  }
  return common;
}

void check_design(const KernelParams& params, const Eigen::MatrixXd& X) {
  if (X.cols() != params.input_dim()) {
    throw InvalidInputError("design has " + std::to_string(X.cols()) +
                            " columns but kernel expects " +
                            std::to_string(params.input_dim()));
  }
  if (!X.allFinite()) {
    throw InvalidInputError("design contains non-finite coordinates");
  }
}

}  // namespace

std::string kernel_family_name(KernelFamily family) {
  return family == KernelFamily::squared_exponential ? "se" : "matern52";
}

KernelFamily parse_kernel_family(const std::string& name) {
  if (name == "se" || name == "squared-exponential") return KernelFamily::squared_exponential;
  if (name == "matern52" || name == "matern-5/2") return KernelFamily::matern52;
  throw InvalidInputError("unknown kernel family: " + name);
}

void KernelParams::validate() const {
  if (!(process_variance > 0.0) || !std::isfinite(process_variance)) {
    throw InvalidInputError("process_variance must be positive and finite");
  }
  if (length_scales.size() == 0) {
    throw InvalidInputError("at least one length scale is required");
  }
  for (Eigen::Index m = 0; m < length_scales.size(); ++m) {
    if (!(length_scales[m] > 0.0) || !std::isfinite(length_scales[m])) {
      throw InvalidInputError("length_scales[" + std::to_string(m) +
                              "] must be positive and finite");
    }
  }
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw InvalidInputError("noise_variance must be non-negative and finite");
  }
}

Eigen::VectorXd params_to_vector(const KernelParams& params, bool estimate_noise) {
  Eigen::VectorXd theta(params.parameter_count(estimate_noise));
  theta[0] = params.process_variance;
  theta.segment(1, params.input_dim()) = params.length_scales;
  if (estimate_noise) theta[theta.size() - 1] = params.noise_variance;
  return theta;
}

KernelParams params_from_vector(const KernelParams& like, const Eigen::VectorXd& theta,
                                bool estimate_noise) {
  KernelParams params = like;
  const Eigen::Index d = theta.size() - 1 - (estimate_noise ? 1 : 0);
  if (d < 1) throw InvalidInputError("parameter vector too short");
  params.process_variance = theta[0];
  params.length_scales = theta.segment(1, d);
  if (estimate_noise) params.noise_variance = theta[theta.size() - 1];
  return params;
}

double kernel_eval(const KernelParams& params, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y) {
  params.validate();
  if (x.size() != params.input_dim() || y.size() != params.input_dim()) {
    throw InvalidInputError("point dimension does not match kernel length scales");
  }
  if (!x.allFinite() || !y.allFinite()) {
    throw InvalidInputError("kernel input contains non-finite coordinates");
  }
  return kernel_from_r2(params, scaled_sq_dist(params, x, y));
}

Eigen::MatrixXd build_covariance(const KernelParams& params, const Eigen::MatrixXd& X) {
  params.validate();
  check_design(params, X);
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    K(l, l) = params.process_variance;
    for (Eigen::Index i = l + 1; i < n; ++i) {
      const double k =
          kernel_from_r2(params, scaled_sq_dist(params, X.row(i).transpose(), X.row(l).transpose()));
      K(i, l) = k;
      K(l, i) = k;
    }
  }
  return K;
}

Eigen::MatrixXd param_derivative(const KernelParams& params, const Eigen::MatrixXd& X,
                                 Eigen::Index j, bool estimate_noise) {
  params.validate();
  check_design(params, X);
  const Eigen::Index q = params.parameter_count(estimate_noise);
  if (j < 0 || j >= q) {
    throw InvalidInputError("parameter index " + std::to_string(j) + " out of range [0, " +
                            std::to_string(q) + ")");
  }
  const Eigen::Index n = X.rows();
  if (estimate_noise && j == q - 1) {
    return Eigen::MatrixXd::Identity(n, n);
  }
  const SliceCommon common = make_slice_common(params, X);
  if (j == 0) {
    return common.base / params.process_variance;
  }
  const Eigen::Index m = j - 1;
  const double inv_rho3 = 1.0 / std::pow(params.length_scales[m], 3);
  Eigen::MatrixXd slice(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double diff = X(i, m) - X(l, m);
      slice(i, l) = common.fac(i, l) * diff * diff * inv_rho3;
    }
  }
  return slice;
}

Eigen::VectorXd contract_gradient(const KernelParams& params, const Eigen::MatrixXd& X,
                                  const Eigen::MatrixXd& delta_K, bool estimate_noise) {
  params.validate();
  check_design(params, X);
  const Eigen::Index n = X.rows();
  if (delta_K.rows() != n || delta_K.cols() != n) {
    throw InvalidInputError("delta_K dimensions do not match the design");
  }
  const Eigen::Index q = params.parameter_count(estimate_noise);
  Eigen::VectorXd grad(q);

  const SliceCommon common = make_slice_common(params, X);
  grad[0] = common.base.cwiseProduct(delta_K).sum() / params.process_variance;

  // Length-scale slices are contracted entry by entry without materializing
  // them, keeping the whole pass at O(q n^2) time and O(n^2) storage.
  for (Eigen::Index m = 0; m < params.input_dim(); ++m) {
    const double inv_rho3 = 1.0 / std::pow(params.length_scales[m], 3);
    double acc = 0.0;
    for (Eigen::Index l = 0; l < n; ++l) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double diff = X(i, m) - X(l, m);
        acc += delta_K(i, l) * common.fac(i, l) * diff * diff;
      }
    }
    grad[1 + m] = acc * inv_rho3;
  }

  if (estimate_noise) grad[q - 1] = delta_K.trace();
  return grad;
}

}  // namespace loogp
