#include <doctest.h>

#include <Eigen/Dense>

#include "helpers.hpp"
#include "loogp/errors.hpp"
#include "loogp/loo.hpp"
#include "oracles.hpp"

using namespace loogp;

TEST_CASE("precompute: scalar case") {
  Eigen::MatrixXd K(1, 1);
  K << 2.0;
  Eigen::VectorXd Z(1);
  Z << 3.0;
  const LooWorkspace ws = precompute(K, Z, 0.5);
  CHECK(ws.B(0, 0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(ws.alpha[0] == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(ws.kappa[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(ws.chi[0] == doctest::Approx(3.0).epsilon(1e-15));

  const LooMoments moments = loo_moments(ws, Z);
  CHECK(moments.mu[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(moments.sigma2[0] == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("precompute: identity covariance") {
  const Eigen::MatrixXd K = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd Z(3);
  Z << 1.0, -2.0, 5.0;
  const LooWorkspace ws = precompute(K, Z, 0.0);
  CHECK((ws.B - K).lpNorm<Eigen::Infinity>() < 1e-15);
  CHECK((ws.alpha - Z).lpNorm<Eigen::Infinity>() < 1e-15);
  CHECK((ws.kappa - Eigen::VectorXd::Ones(3)).lpNorm<Eigen::Infinity>() < 1e-15);
  CHECK((ws.chi - Z).lpNorm<Eigen::Infinity>() < 1e-15);

  const LooMoments moments = loo_moments(ws, Z);
  CHECK(moments.mu.lpNorm<Eigen::Infinity>() < 1e-15);
  CHECK((moments.sigma2 - Eigen::VectorXd::Ones(3)).lpNorm<Eigen::Infinity>() < 1e-15);
}

TEST_CASE("precompute: B matches a generic linear solve") {
  SplitMix64 rng(101);
  const auto inst = testing::random_instance(rng, 6, 2, KernelFamily::matern52, 0.2);
  const Eigen::MatrixXd K = build_covariance(inst.params, inst.X);
  const LooWorkspace ws = precompute(K, inst.Z, inst.params.noise_variance);

  Eigen::MatrixXd regularized = K;
  regularized.diagonal().array() += inst.params.noise_variance;
  const Eigen::MatrixXd B_ref =
      regularized.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(6, 6));
  CHECK((ws.B - B_ref).lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK((ws.B * regularized - Eigen::MatrixXd::Identity(6, 6)).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("precompute: duplicated rows with zero noise fail with a pivot index") {
  KernelParams p;
  p.length_scales = Eigen::VectorXd::Ones(1);
  Eigen::MatrixXd X(3, 1);
  X << 0.2, 0.2, 0.9;  // rows 0 and 1 identical
  const Eigen::MatrixXd K = build_covariance(p, X);
  Eigen::VectorXd Z = Eigen::VectorXd::Zero(3);
  try {
    precompute(K, Z, 0.0);
    FAIL("expected SingularCovarianceError");
  } catch (const SingularCovarianceError& e) {
    CHECK(e.pivot_index() == 1);  // second copy of the point breaks the factorization
  }
}

TEST_CASE("loo_moments: matches brute-force refits on random instances") {
  SplitMix64 rng(103);
  const auto inst = testing::random_instance(rng, 10, 2, KernelFamily::squared_exponential, 0.1);
  const Eigen::MatrixXd K = build_covariance(inst.params, inst.X);
  const LooWorkspace ws = precompute(K, inst.Z, inst.params.noise_variance);
  const LooMoments fast = loo_moments(ws, inst.Z);
  const LooMoments slow = oracles::brute_force_loo(inst.params, inst.X, inst.Z);
  CHECK(testing::max_rel_err(fast.mu, slow.mu) < 1e-10);
  CHECK(testing::max_rel_err(fast.sigma2, slow.sigma2) < 1e-10);
}

TEST_CASE("loo_moments: Dubrule identity across sizes and noise levels") {
  SplitMix64 rng(107);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(uniform_below(rng, 29));
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(uniform_below(rng, 4));
    const double noise = std::vector<double>{0.0, 0.1, 1.0}[trial % 3];
    const auto family =
        trial % 2 == 0 ? KernelFamily::squared_exponential : KernelFamily::matern52;
    const auto inst = testing::random_instance(rng, n, d, family, noise);

    const LooWorkspace ws =
        precompute(build_covariance(inst.params, inst.X), inst.Z, inst.params.noise_variance);
    const LooMoments fast = loo_moments(ws, inst.Z);
    const LooMoments slow = oracles::brute_force_loo(inst.params, inst.X, inst.Z);
    CHECK(testing::max_rel_err(fast.mu, slow.mu) < 1e-8);
    CHECK(testing::max_rel_err(fast.sigma2, slow.sigma2) < 1e-8);
  }
}

TEST_CASE("loo_moments: permutation equivariance") {
  SplitMix64 rng(109);
  const auto inst = testing::random_instance(rng, 12, 2, KernelFamily::matern52, 0.05);

  const LooWorkspace ws =
      precompute(build_covariance(inst.params, inst.X), inst.Z, inst.params.noise_variance);
  const LooMoments base = loo_moments(ws, inst.Z);

  Eigen::VectorXi perm(12);
  perm << 7, 2, 9, 0, 11, 4, 1, 10, 3, 6, 8, 5;
  Eigen::MatrixXd Xp(12, 2);
  Eigen::VectorXd Zp(12);
  for (Eigen::Index i = 0; i < 12; ++i) {
    Xp.row(i) = inst.X.row(perm[i]);
    Zp[i] = inst.Z[perm[i]];
  }
  const LooWorkspace wsp =
      precompute(build_covariance(inst.params, Xp), Zp, inst.params.noise_variance);
  const LooMoments permuted = loo_moments(wsp, Zp);

  for (Eigen::Index i = 0; i < 12; ++i) {
    CHECK(testing::rel_err(permuted.mu[i], base.mu[perm[i]]) < 1e-10);
    CHECK(testing::rel_err(permuted.sigma2[i], base.sigma2[perm[i]]) < 1e-10);
  }
}

TEST_CASE("loo_moments: predictive variance never falls below the noise floor") {
  SplitMix64 rng(113);
  for (double noise : {0.0, 0.1, 1.0}) {
    const auto inst = testing::random_instance(rng, 15, 2, KernelFamily::squared_exponential, noise);
    const LooWorkspace ws =
        precompute(build_covariance(inst.params, inst.X), inst.Z, inst.params.noise_variance);
    const LooMoments moments = loo_moments(ws, inst.Z);
    for (Eigen::Index i = 0; i < 15; ++i) {
      CHECK(moments.sigma2[i] >= noise * (1.0 - 1e-12));
      CHECK(moments.sigma2[i] > 0.0);
    }
  }
}

TEST_CASE("precompute: input validation") {
  Eigen::MatrixXd K(2, 3);
  CHECK_THROWS_AS(precompute(K, Eigen::VectorXd::Zero(2), 0.0), InvalidInputError);
  Eigen::MatrixXd K2 = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(precompute(K2, Eigen::VectorXd::Zero(3), 0.0), InvalidInputError);
  CHECK_THROWS_AS(precompute(K2, Eigen::VectorXd::Zero(2), -0.1), InvalidInputError);
}
