#ifndef LOOGP_ESTIMATOR_HPP
#define LOOGP_ESTIMATOR_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "loogp/dataset.hpp"
#include "loogp/kernels.hpp"
#include "loogp/scoring.hpp"

namespace loogp {

/// Objective to maximize: one of the cross-validation scoring rules or the
/// log marginal likelihood baseline.
enum class FitCriterion { press, log_density, crps, mle };

std::string fit_criterion_name(FitCriterion c);
FitCriterion parse_fit_criterion(const std::string& name);

/// The scoring rule behind a cross-validation criterion; throws for mle.
ScoringRule scoring_rule_of(FitCriterion c);

struct EstimatorConfig {
  FitCriterion criterion = FitCriterion::crps;
  KernelFamily kernel = KernelFamily::squared_exponential;
  int n_starts = 5;
  int max_iterations = 200;
  double gradient_tolerance = 1e-5;
  /// Per-parameter (lower, upper) bounds on log(theta). Empty selects the
  /// default [-6.9, 6.9] (theta in [1e-3, 1e3]) for every parameter. A box of
  /// width below 1e-6 freezes the parameter at the midpoint.
  std::vector<std::pair<double, double>> parameter_bounds;
  bool estimate_noise = false;
  /// Fixed noise variance when estimate_noise is false.
  double noise_variance = 0.0;
  std::uint64_t seed = 0;

  void validate(Eigen::Index q) const;
};

struct StartRecord {
  Eigen::VectorXd start_theta;
  double final_value = -std::numeric_limits<double>::infinity();
  bool converged = false;
  std::string error;  // non-empty when the start never produced a finite value
};

struct FitResult {
  KernelParams params;
  double criterion_value = 0.0;
  int n_iterations = 0;
  bool converged = false;
  int start_index = -1;
  std::vector<StartRecord> all_starts;
};

/// Maximizes the configured criterion over theta with a limited-memory
/// quasi-Newton method in eta = log(theta) coordinates, from n_starts points
/// drawn uniformly in the log bounds. Deterministic given config.seed.
/// Throws EstimationFailedError when every start fails to evaluate.
FitResult estimate(const Dataset& data, const EstimatorConfig& config);

}  // namespace loogp

#endif  // LOOGP_ESTIMATOR_HPP
