// Shared fixtures for the test suites: random well-conditioned instances,
// error metrics, and a general-inverse forward evaluation of the
// leave-one-out map used to finite-difference its Jacobian in arbitrary
// (possibly asymmetric) matrix directions.

#ifndef LOOGP_TESTS_HELPERS_HPP
#define LOOGP_TESTS_HELPERS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "loogp/design.hpp"
#include "loogp/kernels.hpp"
#include "loogp/loo.hpp"
#include "loogp/rng.hpp"

namespace loogp::testing {

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double max_rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) worst = std::max(worst, rel_err(a[i], b[i]));
  return worst;
}

/// Jittered Latin-hypercube design on [0,1]^d. Guarantees per-dimension
/// stratification, which keeps random covariance matrices comfortably
/// conditioned for the tight oracle tolerances.
inline Eigen::MatrixXd random_design(SplitMix64& rng, Eigen::Index n, Eigen::Index d,
                                     double jitter = 0.8) {
  Eigen::MatrixXd X(n, d);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  for (Eigen::Index m = 0; m < d; ++m) {
    for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (Eigen::Index i = n - 1; i > 0; --i) {
      const auto j = static_cast<Eigen::Index>(uniform_below(rng, static_cast<std::uint64_t>(i + 1)));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const double u = 0.5 + jitter * (uniform01(rng) - 0.5);
      X(i, m) = (static_cast<double>(perm[static_cast<std::size_t>(i)]) + u) /
                static_cast<double>(n);
    }
  }
  return X;
}

struct Instance {
  KernelParams params;
  Eigen::MatrixXd X;
  Eigen::VectorXd Z;
};

/// Random instance with length scales and noise drawn to keep
/// cond(K + noise I) low enough for 1e-8-level comparisons. With zero noise
/// the smoother squared-exponential family is swapped for Matern-5/2.
/// Observations are drawn from the instance's own GP so criterion values
/// stay at realistic magnitudes.
inline Instance random_instance(SplitMix64& rng, Eigen::Index n, Eigen::Index d,
                                KernelFamily family, double noise_variance) {
  Instance inst;
  inst.params.family =
      (noise_variance == 0.0 && family == KernelFamily::squared_exponential)
          ? KernelFamily::matern52
          : family;
  inst.params.process_variance = 0.5 + 1.5 * uniform01(rng);
  inst.params.length_scales.resize(d);
  for (Eigen::Index m = 0; m < d; ++m) {
    inst.params.length_scales[m] = 0.2 + 0.6 * uniform01(rng);
  }
  inst.params.noise_variance = noise_variance;
  inst.X = random_design(rng, n, d);
  inst.Z = sample_gp(inst.params, inst.X, rng());
  return inst;
}

/// Forward leave-one-out map for an arbitrary (not necessarily symmetric)
/// regularized covariance: B = Ktilde^-1 by LU, mu_i = Z_i - (BZ)_i / B_ii,
/// sigma2_i = 1 / B_ii. This is the map whose Jacobian the adjoint
/// transposes, defined on all of R^(n x n).
inline LooMoments loo_forward_general(const Eigen::MatrixXd& Ktilde, const Eigen::VectorXd& Z) {
  const Eigen::MatrixXd B = Ktilde.partialPivLu().inverse();
  LooMoments moments;
  moments.mu = Z - (B * Z).cwiseQuotient(B.diagonal());
  moments.sigma2 = B.diagonal().cwiseInverse();
  return moments;
}

}  // namespace loogp::testing

#endif  // LOOGP_TESTS_HELPERS_HPP
