#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace loogp;

TEST_CASE("finite_diff_gradient: quadratic and linear maps") {
  Eigen::VectorXd x0(2);
  x0 << 1.0, 2.0;
  const Eigen::VectorXd g = oracles::finite_diff_gradient(
      [](const Eigen::VectorXd& x) { return x.squaredNorm(); }, x0, 1e-6);
  CHECK(std::abs(g[0] - 2.0) < 1e-8);
  CHECK(std::abs(g[1] - 4.0) < 1e-8);

  Eigen::VectorXd w(3);
  w << 2.0, -1.0, 0.5;
  Eigen::VectorXd x1(3);
  x1 << 0.1, 0.2, 0.3;
  const Eigen::VectorXd gl = oracles::finite_diff_gradient(
      [&](const Eigen::VectorXd& x) { return w.dot(x); }, x1, 1e-6);
  CHECK(testing::max_rel_err(gl, w) < 1e-9);
}

TEST_CASE("finite_diff_gradient: flags non-finite coordinates") {
  Eigen::VectorXd x0(1);
  x0 << 0.0;
  CHECK_THROWS_WITH_AS(
      oracles::finite_diff_gradient(
          [](const Eigen::VectorXd& x) { return std::log(x[0] - 1.0); }, x0, 1e-6),
      doctest::Contains("coordinate 0"), std::runtime_error);
}

TEST_CASE("brute_force_loo: two orthogonal points predict nothing") {
  KernelParams p;
  p.length_scales = Eigen::VectorXd::Constant(1, 1e-3);  // K = I for distant points
  Eigen::MatrixXd X(2, 1);
  X << 0.0, 100.0;
  Eigen::VectorXd Z(2);
  Z << 0.7, -1.1;
  const LooMoments m = oracles::brute_force_loo(p, X, Z);
  CHECK(m.mu[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(m.mu[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(m.sigma2[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.sigma2[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("brute_force_loo: a single point cannot be cross-validated") {
  KernelParams p;
  p.length_scales = Eigen::VectorXd::Ones(1);
  Eigen::MatrixXd X(1, 1);
  X << 0.0;
  Eigen::VectorXd Z(1);
  Z << 1.0;
  CHECK_THROWS_AS(oracles::brute_force_loo(p, X, Z), std::invalid_argument);
}

TEST_CASE("crps_numeric: translation invariance and degenerate variance") {
  SplitMix64 rng(601);
  for (int trial = 0; trial < 10; ++trial) {
    const double mu = standard_normal(rng);
    const double sigma2 = 0.3 + uniform01(rng);
    const double z = mu + standard_normal(rng);
    const double c = 3.0 * standard_normal(rng);
    CHECK(std::abs(oracles::crps_numeric(mu, sigma2, z) -
                   oracles::crps_numeric(mu + c, sigma2, z + c)) < 1e-9);
  }
  CHECK(std::abs(oracles::crps_numeric(0.0, 1e-8, 0.0)) < 1e-4);
}
