#ifndef LOOGP_SCORING_HPP
#define LOOGP_SCORING_HPP

#include <Eigen/Dense>
#include <string>

#include "loogp/loo.hpp"

namespace loogp {

/// Scores for a Gaussian predictive law, positively oriented (larger is
/// better): press = -(mu - z)^2, log_density = log N(z; mu, sigma2), crps =
/// negated continuous ranked probability score in its Gaussian closed form.
enum class ScoringRule { press, log_density, crps };

std::string scoring_rule_name(ScoringRule rule);
ScoringRule parse_scoring_rule(const std::string& name);

/// Averaged criterion L together with its exact partials with respect to the
/// predictive means and variances -- the seed of the adjoint pass.
struct ScoreGradient {
  double value = 0.0;
  Eigen::VectorXd d_mu;
  Eigen::VectorXd d_sigma2;
};

struct PointGradient {
  double d_mu = 0.0;
  double d_sigma2 = 0.0;
};

/// S(N(mu, sigma2), z). press ignores sigma2; the other rules require
/// sigma2 > 0 and throw ScoreDomainError otherwise.
double score_point(ScoringRule rule, double mu, double sigma2, double z);

/// Exact analytic partials of score_point with respect to mu and sigma2.
PointGradient score_point_grad(ScoringRule rule, double mu, double sigma2, double z);

/// L = (1/n) sum_i S(N(mu_i, sigma2_i), Z_i) with componentwise partials.
ScoreGradient criterion(ScoringRule rule, const LooMoments& moments, const Eigen::VectorXd& Z);

}  // namespace loogp

#endif  // LOOGP_SCORING_HPP
