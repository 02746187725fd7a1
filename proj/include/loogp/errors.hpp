#ifndef LOOGP_ERRORS_HPP
#define LOOGP_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace loogp {

/// Malformed caller input: non-finite values, dimension mismatches, bad flags.
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cholesky factorization of K + noise*I failed. Carries the index of the
/// first non-positive pivot.
class SingularCovarianceError : public std::runtime_error {
 public:
  SingularCovarianceError(const std::string& message, std::int64_t pivot_index)
      : std::runtime_error(message + " (pivot index " + std::to_string(pivot_index) + ")"),
        pivot_index_(pivot_index) {}

  std::int64_t pivot_index() const noexcept { return pivot_index_; }

 private:
  std::int64_t pivot_index_;
};

/// A scoring rule was evaluated outside its domain (sigma2 <= 0).
/// point_index is the offending observation when raised by the averaged
/// criterion, -1 for a single-point evaluation.
class ScoreDomainError : public std::domain_error {
 public:
  explicit ScoreDomainError(const std::string& message, std::int64_t point_index = -1)
      : std::domain_error(message), point_index_(point_index) {}

  std::int64_t point_index() const noexcept { return point_index_; }

 private:
  std::int64_t point_index_;
};

/// Every optimizer start failed to produce a finite criterion value.
class EstimationFailedError : public std::runtime_error {
 public:
  EstimationFailedError(const std::string& message, std::vector<std::string> diagnostics)
      : std::runtime_error(message), diagnostics_(std::move(diagnostics)) {}

  const std::vector<std::string>& start_diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

}  // namespace loogp

#endif  // LOOGP_ERRORS_HPP
