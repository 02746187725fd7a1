#ifndef LOOGP_EXPERIMENT_HPP
#define LOOGP_EXPERIMENT_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "loogp/alloc_audit.hpp"
#include "loogp/estimator.hpp"
#include "loogp/kernels.hpp"

namespace loogp {

/// Length-scale recovery experiment: per replication, draw a design and a GP
/// sample from true_params, then fit each requested criterion.
struct ExperimentSpec {
  Eigen::Index n = 200;
  Eigen::Index d = 2;
  KernelParams true_params;
  int n_replications = 1;
  std::vector<FitCriterion> criteria;
  std::uint64_t seed = 0;
  std::string output_path;  // empty: no file written
  /// Reuse one design across replications instead of regenerating it.
  bool fixed_design = false;
  bool estimate_noise = false;
  int n_starts = 5;
  int max_iterations = 200;
  double gradient_tolerance = 1e-5;

  void validate() const;
};

struct ScatterRow {
  int replication = 0;
  FitCriterion criterion = FitCriterion::crps;
  bool ok = false;
  KernelParams estimate;          // valid only when ok
  double criterion_value = 0.0;   // valid only when ok
  int n_iterations = 0;
  bool converged = false;
  double wall_time_ms = 0.0;
  std::string error;
};

struct ScatterResult {
  std::vector<ScatterRow> rows;
};

/// Runs the experiment, optionally in a worker pool capped by the
/// LOO_GP_THREADS environment variable (0 = serial). Row order and contents
/// are independent of the pool size; only wall times vary between runs.
ScatterResult run_scatter_experiment(const ExperimentSpec& spec,
                                     const std::string& command_line = "");

/// Optional heap probes so callers with allocation hooks linked in can audit
/// the benchmark without the core library depending on the hooks.
struct AllocProbe {
  std::function<void(std::size_t)> begin;
  std::function<alloc_audit::Report()> end;
};

/// Timing grid for the gradient paths. q is varied by embedding the design
/// in d = q - 1 dimensions; the naive path is refused above n = 1500.
struct BenchmarkSpec {
  std::vector<Eigen::Index> n_values;
  std::vector<int> q_values;
  int repetitions = 5;
  bool run_adjoint = true;
  bool run_naive = true;
  std::uint64_t seed = 0;
  std::string output_path;  // empty: no file written
  AllocProbe alloc;

  void validate() const;
};

struct BenchRow {
  std::string path;  // "adjoint" or "naive"
  Eigen::Index n = 0;
  int q = 0;
  int repetition = 0;
  double wall_time_ms = 0.0;
  std::size_t peak_nn_allocs = 0;   // peak live blocks of at least n*n doubles
  std::size_t max_block_bytes = 0;  // largest single allocation in the run
};

struct BenchCell {
  std::string path;
  Eigen::Index n = 0;
  int q = 0;
  double median_ms = 0.0;
  std::size_t peak_nn_allocs = 0;
  std::size_t max_block_bytes = 0;
  /// Max componentwise deviation of this path's gradient from the adjoint
  /// path's, relative with floor 1; NaN when only one path ran.
  double cross_check_err = std::numeric_limits<double>::quiet_NaN();
};

struct BenchmarkResult {
  std::vector<BenchRow> rows;
  std::vector<BenchCell> cells;
};

BenchmarkResult run_benchmark(const BenchmarkSpec& spec, const std::string& command_line = "");

namespace detail {

/// Worker count: min(LOO_GP_THREADS or hardware_concurrency, n_tasks), at
/// least 1. LOO_GP_THREADS=0 forces serial execution.
std::size_t resolve_thread_count(std::size_t n_tasks);

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

double median(std::vector<double> values);

}  // namespace detail

}  // namespace loogp

#endif  // LOOGP_EXPERIMENT_HPP
