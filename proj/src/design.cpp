#include "loogp/design.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "loogp/errors.hpp"
#include "loogp/rng.hpp"

namespace loogp {

namespace {

// Squared-distance matrix maintained across swap proposals so each proposal
// costs O(n) to update plus O(n^2) to rescan the minimum, independent of d.
struct DistanceTable {
  Eigen::MatrixXd D;

  explicit DistanceTable(const Eigen::MatrixXd& X) : D(X.rows(), X.rows()) {
    const double inf = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      D(i, i) = inf;
      for (Eigen::Index l = i + 1; l < X.rows(); ++l) {
        const double d2 = (X.row(i) - X.row(l)).squaredNorm();
        D(i, l) = d2;
        D(l, i) = d2;
      }
    }
  }

  // Adjusts all pairs involving point p after its coordinate in dimension m
  // moved from old_c to new_c.
  void move_coordinate(const Eigen::MatrixXd& X, Eigen::Index p, Eigen::Index m, double old_c,
                       double new_c) {
    for (Eigen::Index k = 0; k < X.rows(); ++k) {
      if (k == p) continue;
      const double before = old_c - X(k, m);
      const double after = new_c - X(k, m);
      const double delta = after * after - before * before;
      D(p, k) += delta;
      D(k, p) += delta;
    }
  }

  double min() const { return D.minCoeff(); }
};

}  // namespace

Eigen::MatrixXd generate_design(Eigen::Index n, Eigen::Index d, std::uint64_t seed,
                                int improvement_steps) {
  if (n < 1 || d < 1) throw InvalidInputError("design needs n >= 1 and d >= 1");

  SplitMix64 rng(derive_seed(seed, 0xDE519ULL));
  Eigen::MatrixXd X(n, d);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  for (Eigen::Index m = 0; m < d; ++m) {
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    for (Eigen::Index i = n - 1; i > 0; --i) {  // Fisher-Yates
      const auto j = static_cast<Eigen::Index>(uniform_below(rng, static_cast<std::uint64_t>(i + 1)));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      X(i, m) = (static_cast<double>(perm[static_cast<std::size_t>(i)]) + uniform01(rng)) /
                static_cast<double>(n);
    }
  }
  if (n == 1) return X;

  DistanceTable table(X);
  double current = table.min();
  for (int step = 0; step < improvement_steps; ++step) {
    const auto m = static_cast<Eigen::Index>(uniform_below(rng, static_cast<std::uint64_t>(d)));
    const auto i = static_cast<Eigen::Index>(uniform_below(rng, static_cast<std::uint64_t>(n)));
    auto l = static_cast<Eigen::Index>(uniform_below(rng, static_cast<std::uint64_t>(n - 1)));
    if (l >= i) ++l;

    const double ci = X(i, m);
    const double cl = X(l, m);
    table.move_coordinate(X, i, m, ci, cl);
    X(i, m) = cl;
    table.move_coordinate(X, l, m, cl, ci);
    X(l, m) = ci;

    const double candidate = table.min();
    if (candidate > current) {
      current = candidate;
    } else {
      table.move_coordinate(X, i, m, cl, ci);  // revert
      X(i, m) = ci;
      table.move_coordinate(X, l, m, ci, cl);
      X(l, m) = cl;
    }
  }
  return X;
}

Eigen::VectorXd sample_gp(const KernelParams& params, const Eigen::MatrixXd& X,
                          std::uint64_t seed) {
  params.validate();
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd K = build_covariance(params, X);
  K.diagonal().array() += 1e-10 * params.process_variance;

  Eigen::LLT<Eigen::MatrixXd> llt(K);
  if (llt.info() != Eigen::Success) {
    throw SingularCovarianceError("sampling covariance not positive definite after jitter", -1);
  }

  SplitMix64 rng(derive_seed(seed, 0x5A3F1ULL));
  Eigen::VectorXd u(n), v(n);
  for (Eigen::Index i = 0; i < n; ++i) u[i] = standard_normal(rng);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = standard_normal(rng);

  const double noise_sd = std::sqrt(params.noise_variance);
  return Eigen::MatrixXd(llt.matrixL()) * u + noise_sd * v;
}

}  // namespace loogp
