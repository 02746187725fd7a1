#ifndef LOOGP_DESIGN_HPP
#define LOOGP_DESIGN_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "loogp/kernels.hpp"

namespace loogp {

/// Maximin-optimized Latin hypercube on [0,1]^d: jittered LHS stratification
/// followed by a fixed number of random coordinate-swap proposals, each
/// accepted when it increases the minimum inter-point distance. Swaps
/// exchange one coordinate between two points, so every column keeps exactly
/// one point per stratum. Deterministic per seed.
Eigen::MatrixXd generate_design(Eigen::Index n, Eigen::Index d, std::uint64_t seed,
                                int improvement_steps = 1000);

/// Draws Z = chol(K + jitter*I) u + noise_sd * v with independent standard
/// normal u, v. The sampling jitter is 1e-10 * process_variance (sampling
/// only; fitting never jitters).
Eigen::VectorXd sample_gp(const KernelParams& params, const Eigen::MatrixXd& X,
                          std::uint64_t seed);

}  // namespace loogp

#endif  // LOOGP_DESIGN_HPP
