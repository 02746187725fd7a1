#include "loogp/scoring.hpp"

#include <cmath>

#include "loogp/errors.hpp"

namespace loogp {

namespace {

constexpr double kInvSqrtPi = 0.564189583547756286948079451561;   // 1/sqrt(pi)
constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;  // 1/sqrt(2 pi)
constexpr double kLog2Pi = 1.83787706640934548356065947281;

double normal_pdf(double u) { return kInvSqrt2Pi * std::exp(-0.5 * u * u); }
double normal_cdf(double u) { return 0.5 * std::erfc(-u * M_SQRT1_2); }

void require_positive_sigma2(double sigma2, std::int64_t index) {
  if (!(sigma2 > 0.0)) {
    throw ScoreDomainError("predictive variance must be positive, got " +
                               std::to_string(sigma2),
                           index);
  }
}

double score_point_checked(ScoringRule rule, double mu, double sigma2, double z,
                           std::int64_t index) {
  switch (rule) {
    case ScoringRule::press: {
      const double e = mu - z;
      return -e * e;
    }
    case ScoringRule::log_density: {
      require_positive_sigma2(sigma2, index);
      const double e = z - mu;
      return -0.5 * (kLog2Pi + std::log(sigma2)) - e * e / (2.0 * sigma2);
    }
    case ScoringRule::crps: {
      require_positive_sigma2(sigma2, index);
      const double sigma = std::sqrt(sigma2);
      const double u = (z - mu) / sigma;
      return -sigma * (u * (2.0 * normal_cdf(u) - 1.0) + 2.0 * normal_pdf(u) - kInvSqrtPi);
    }
  }
  return 0.0;  // unreachable
}

PointGradient score_point_grad_checked(ScoringRule rule, double mu, double sigma2, double z,
                                       std::int64_t index) {
  PointGradient g;
  switch (rule) {
    case ScoringRule::press:
      g.d_mu = -2.0 * (mu - z);
      g.d_sigma2 = 0.0;
      break;
    case ScoringRule::log_density: {
      require_positive_sigma2(sigma2, index);
      const double e = z - mu;
      g.d_mu = e / sigma2;
      g.d_sigma2 = -0.5 / sigma2 + e * e / (2.0 * sigma2 * sigma2);
      break;
    }
    case ScoringRule::crps: {
      require_positive_sigma2(sigma2, index);
      const double sigma = std::sqrt(sigma2);
      const double u = (z - mu) / sigma;
      g.d_mu = 2.0 * normal_cdf(u) - 1.0;
      g.d_sigma2 = -(2.0 * normal_pdf(u) - kInvSqrtPi) / (2.0 * sigma);
      break;
    }
  }
  return g;
}

}  // namespace

std::string scoring_rule_name(ScoringRule rule) {
  switch (rule) {
    case ScoringRule::press: return "press";
    case ScoringRule::log_density: return "log-density";
    case ScoringRule::crps: return "crps";
  }
  return "";
}

ScoringRule parse_scoring_rule(const std::string& name) {
  if (name == "press") return ScoringRule::press;
  if (name == "log-density" || name == "logdensity") return ScoringRule::log_density;
  if (name == "crps") return ScoringRule::crps;
  throw InvalidInputError("unknown scoring rule: " + name);
}

double score_point(ScoringRule rule, double mu, double sigma2, double z) {
  return score_point_checked(rule, mu, sigma2, z, -1);
}

PointGradient score_point_grad(ScoringRule rule, double mu, double sigma2, double z) {
  return score_point_grad_checked(rule, mu, sigma2, z, -1);
}

ScoreGradient criterion(ScoringRule rule, const LooMoments& moments, const Eigen::VectorXd& Z) {
  const Eigen::Index n = Z.size();
  if (moments.mu.size() != n || moments.sigma2.size() != n) {
    throw InvalidInputError("moment vectors do not match observation length");
  }
  if (n == 0) throw InvalidInputError("criterion needs at least one observation");

  ScoreGradient out;
  out.d_mu.resize(n);
  out.d_sigma2.resize(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += score_point_checked(rule, moments.mu[i], moments.sigma2[i], Z[i], i);
    const PointGradient g = score_point_grad_checked(rule, moments.mu[i], moments.sigma2[i], Z[i], i);
    out.d_mu[i] = g.d_mu * inv_n;
    out.d_sigma2[i] = g.d_sigma2 * inv_n;
  }
  out.value = acc * inv_n;
  return out;
}

}  // namespace loogp
