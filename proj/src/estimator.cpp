#include "loogp/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "loogp/adjoint.hpp"
#include "loogp/errors.hpp"
#include "loogp/likelihood.hpp"
#include "loogp/rng.hpp"

namespace loogp {

namespace {

constexpr double kDefaultLogBound = 6.9;  // theta in [1e-3, 1e3]
constexpr double kFrozenWidth = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Objective {
  const Dataset& data;
  const EstimatorConfig& config;
  KernelParams shape;  // family, d, fixed noise

  // Maximized criterion at theta; throws on non-PD covariance.
  ValueAndGradient eval_theta(const Eigen::VectorXd& theta) const {
    const KernelParams params = params_from_vector(shape, theta, config.estimate_noise);
    if (config.criterion == FitCriterion::mle) {
      return lml_gradient(params, data.X, data.Z, config.estimate_noise);
    }
    return criterion_with_gradient(params, data.X, data.Z, scoring_rule_of(config.criterion),
                                   config.estimate_noise);
  }

  // Minimized objective in eta = log(theta): f = -L, df/deta = -theta ∘ dL/dtheta.
  // Evaluation failures and non-finite values come back as +inf so the line
  // search rejects the point.
  bool eval_eta(const Eigen::VectorXd& eta, double& f, Eigen::VectorXd& g,
                std::string* error = nullptr) const {
    const Eigen::VectorXd theta = eta.array().exp();
    try {
      const ValueAndGradient vg = eval_theta(theta);
      if (!std::isfinite(vg.value) || !vg.gradient.allFinite()) {
        if (error) *error = "non-finite criterion value";
        f = kInf;
        return false;
      }
      f = -vg.value;
      g = -(theta.array() * vg.gradient.array()).matrix();
      return true;
    } catch (const std::exception& e) {
      if (error) *error = e.what();
      f = kInf;
      return false;
    }
  }
};

struct Bounds {
  Eigen::VectorXd lower, upper;
  std::vector<bool> frozen;

  Eigen::VectorXd clamp(Eigen::VectorXd eta) const {
    for (Eigen::Index j = 0; j < eta.size(); ++j) {
      if (frozen[static_cast<std::size_t>(j)]) {
        eta[j] = 0.5 * (lower[j] + upper[j]);
      } else {
        eta[j] = std::min(std::max(eta[j], lower[j]), upper[j]);
      }
    }
    return eta;
  }

  // Gradient components that can still produce feasible descent steps; zero
  // at an active bound that blocks the step direction (minimization).
  double projected_grad_norm(const Eigen::VectorXd& eta, const Eigen::VectorXd& g) const {
    double norm = 0.0;
    for (Eigen::Index j = 0; j < eta.size(); ++j) {
      if (frozen[static_cast<std::size_t>(j)]) continue;
      double gj = g[j];
      if (eta[j] <= lower[j] && gj > 0.0) gj = 0.0;
      if (eta[j] >= upper[j] && gj < 0.0) gj = 0.0;
      norm = std::max(norm, std::abs(gj));
    }
    return norm;
  }
};

struct LbfgsMemory {
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs;  // (s, y)
  static constexpr std::size_t kCapacity = 10;

  void push(const Eigen::VectorXd& s, const Eigen::VectorXd& y) {
    const double sy = s.dot(y);
    if (!(sy > 1e-10 * s.norm() * y.norm())) return;  // skip non-curvature pairs
    pairs.emplace_back(s, y);
    if (pairs.size() > kCapacity) pairs.pop_front();
  }

  // Standard two-loop recursion; returns an approximation of H^-1 g.
  Eigen::VectorXd apply(const Eigen::VectorXd& g) const {
    Eigen::VectorXd q = g;
    std::vector<double> alpha(pairs.size());
    for (std::size_t idx = pairs.size(); idx-- > 0;) {
      const auto& [s, y] = pairs[idx];
      alpha[idx] = s.dot(q) / s.dot(y);
      q -= alpha[idx] * y;
    }
    if (!pairs.empty()) {
      const auto& [s, y] = pairs.back();
      q *= s.dot(y) / y.dot(y);
    }
    for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
      const auto& [s, y] = pairs[idx];
      const double beta = y.dot(q) / s.dot(y);
      q += (alpha[idx] - beta) * s;
    }
    return q;
  }
};

struct StartOutcome {
  Eigen::VectorXd eta;
  double f = kInf;
  int iterations = 0;
  bool converged = false;
  std::string error;
};

StartOutcome run_single_start(const Objective& objective, const Bounds& bounds,
                              Eigen::VectorXd eta0) {
  const EstimatorConfig& config = objective.config;
  StartOutcome outcome;

  // Frozen coordinates are excluded from the optimization subspace entirely:
  // their gradient components would otherwise pollute the curvature pairs.
  const auto mask_frozen = [&bounds](Eigen::VectorXd v) {
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (bounds.frozen[static_cast<std::size_t>(j)]) v[j] = 0.0;
    }
    return v;
  };

  Eigen::VectorXd eta = bounds.clamp(std::move(eta0));
  double f;
  Eigen::VectorXd g(eta.size());
  if (!objective.eval_eta(eta, f, g, &outcome.error)) {
    return outcome;  // start failed outright
  }
  g = mask_frozen(std::move(g));

  LbfgsMemory memory;
  for (int it = 0; it < config.max_iterations; ++it) {
    if (bounds.projected_grad_norm(eta, g) <= config.gradient_tolerance) {
      outcome.converged = true;
      break;
    }

    Eigen::VectorXd direction = -memory.apply(g);
    if (!(direction.dot(g) < 0.0)) direction = -g;  // fall back to steepest descent
    if (memory.pairs.empty()) {
      direction *= std::min(1.0, 1.0 / direction.norm());  // cap the first step at unit length
    }

    // Backtracking line search with sufficient decrease on the projected step.
    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd eta_next;
    double f_next = kInf;
    Eigen::VectorXd g_next(eta.size());
    while (step > 1e-14) {
      eta_next = bounds.clamp(eta + step * direction);
      const Eigen::VectorXd actual = eta_next - eta;
      if (actual.lpNorm<Eigen::Infinity>() < 1e-15) break;  // projection annihilated the step
      if (objective.eval_eta(eta_next, f_next, g_next) &&
          f_next <= f + 1e-4 * g.dot(actual)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // line search stalled; report current iterate

    g_next = mask_frozen(std::move(g_next));
    memory.push(eta_next - eta, g_next - g);
    eta = std::move(eta_next);
    f = f_next;
    g = std::move(g_next);
    outcome.iterations = it + 1;
  }
  // Re-check convergence when the loop exhausted max_iterations.
  if (!outcome.converged) {
    outcome.converged = bounds.projected_grad_norm(eta, g) <= config.gradient_tolerance;
  }

  outcome.eta = std::move(eta);
  outcome.f = f;
  outcome.error.clear();
  return outcome;
}

}  // namespace

std::string fit_criterion_name(FitCriterion c) {
  switch (c) {
    case FitCriterion::press: return "press";
    case FitCriterion::log_density: return "log-density";
    case FitCriterion::crps: return "crps";
    case FitCriterion::mle: return "mle";
  }
  return "";
}

FitCriterion parse_fit_criterion(const std::string& name) {
  if (name == "mle") return FitCriterion::mle;
  switch (parse_scoring_rule(name)) {
    case ScoringRule::press: return FitCriterion::press;
    case ScoringRule::log_density: return FitCriterion::log_density;
    case ScoringRule::crps: return FitCriterion::crps;
  }
  throw InvalidInputError("unknown criterion: " + name);
}

ScoringRule scoring_rule_of(FitCriterion c) {
  switch (c) {
    case FitCriterion::press: return ScoringRule::press;
    case FitCriterion::log_density: return ScoringRule::log_density;
    case FitCriterion::crps: return ScoringRule::crps;
    case FitCriterion::mle: break;
  }
  throw InvalidInputError("mle is not a scoring rule");
}

void EstimatorConfig::validate(Eigen::Index q) const {
  if (n_starts < 1) throw InvalidInputError("n_starts must be positive");
  if (max_iterations < 1) throw InvalidInputError("max_iterations must be positive");
  if (!(gradient_tolerance > 0.0)) throw InvalidInputError("gradient_tolerance must be positive");
  if (!estimate_noise && (!(noise_variance >= 0.0) || !std::isfinite(noise_variance))) {
    throw InvalidInputError("fixed noise_variance must be non-negative and finite");
  }
  if (!parameter_bounds.empty() && static_cast<Eigen::Index>(parameter_bounds.size()) != q) {
    throw InvalidInputError("parameter_bounds must have one (lower, upper) pair per parameter");
  }
  for (const auto& [lo, hi] : parameter_bounds) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw InvalidInputError("parameter bounds must be finite with lower < upper");
    }
  }
}

FitResult estimate(const Dataset& data, const EstimatorConfig& config) {
  data.validate();
  if (data.n() < 3) throw InvalidInputError("estimation needs at least 3 observations");

  KernelParams shape;
  shape.family = config.kernel;
  shape.process_variance = 1.0;
  shape.length_scales = Eigen::VectorXd::Ones(data.d());
  shape.noise_variance = config.estimate_noise ? 1.0 : config.noise_variance;

  const Eigen::Index q = shape.parameter_count(config.estimate_noise);
  config.validate(q);

  Bounds bounds;
  bounds.lower.resize(q);
  bounds.upper.resize(q);
  bounds.frozen.resize(static_cast<std::size_t>(q));
  for (Eigen::Index j = 0; j < q; ++j) {
    const double lo = config.parameter_bounds.empty()
                          ? -kDefaultLogBound
                          : config.parameter_bounds[static_cast<std::size_t>(j)].first;
    const double hi = config.parameter_bounds.empty()
                          ? kDefaultLogBound
                          : config.parameter_bounds[static_cast<std::size_t>(j)].second;
    bounds.lower[j] = lo;
    bounds.upper[j] = hi;
    bounds.frozen[static_cast<std::size_t>(j)] = (hi - lo) < kFrozenWidth;
  }

  const Objective objective{data, config, shape};

  FitResult result;
  result.all_starts.resize(static_cast<std::size_t>(config.n_starts));
  std::vector<StartOutcome> outcomes(static_cast<std::size_t>(config.n_starts));
  std::vector<std::string> failures;

  for (int s = 0; s < config.n_starts; ++s) {
    SplitMix64 rng(derive_seed(config.seed, 0x57A27ULL, static_cast<std::uint64_t>(s)));
    Eigen::VectorXd eta0(q);
    for (Eigen::Index j = 0; j < q; ++j) {
      eta0[j] = bounds.lower[j] + (bounds.upper[j] - bounds.lower[j]) * uniform01(rng);
    }

    StartOutcome outcome = run_single_start(objective, bounds, eta0);
    StartRecord& record = result.all_starts[static_cast<std::size_t>(s)];
    record.start_theta = bounds.clamp(eta0).array().exp();
    record.converged = outcome.converged;
    record.error = outcome.error;
    if (outcome.error.empty()) {
      record.final_value = -outcome.f;
    } else {
      failures.push_back("start " + std::to_string(s) + ": " + outcome.error);
    }
    outcomes[static_cast<std::size_t>(s)] = std::move(outcome);
  }

  // Best final value wins; ties broken by lowest start index.
  int best = -1;
  for (int s = 0; s < config.n_starts; ++s) {
    const StartOutcome& o = outcomes[static_cast<std::size_t>(s)];
    if (!o.error.empty()) continue;
    if (best < 0 || o.f < outcomes[static_cast<std::size_t>(best)].f) best = s;
  }
  if (best < 0) {
    throw EstimationFailedError("every optimizer start failed", failures);
  }

  const StartOutcome& winner = outcomes[static_cast<std::size_t>(best)];
  result.params =
      params_from_vector(shape, winner.eta.array().exp(), config.estimate_noise);
  result.criterion_value = -winner.f;
  result.n_iterations = winner.iterations;
  result.converged = winner.converged;
  result.start_index = best;
  return result;
}

}  // namespace loogp
