#include "loogp/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <thread>

#include "detail/format.hpp"
#include "loogp/adjoint.hpp"
#include "loogp/design.hpp"
#include "loogp/errors.hpp"
#include "loogp/rng.hpp"

namespace loogp {

namespace detail {

std::size_t resolve_thread_count(std::size_t n_tasks) {
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LOO_GP_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && parsed >= 0) {
      threads = parsed == 0 ? 1 : static_cast<std::size_t>(parsed);
    }
  }
  return std::max<std::size_t>(1, std::min(threads, n_tasks));
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::atomic_flag error_lock = ATOMIC_FLAG_INIT;
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        if (!error_lock.test_and_set()) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace detail

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

json params_to_json(const KernelParams& params) {
  json j;
  j["family"] = kernel_family_name(params.family);
  j["process_variance"] = params.process_variance;
  j["length_scales"] = std::vector<double>(params.length_scales.begin(),
                                           params.length_scales.end());
  j["noise_variance"] = params.noise_variance;
  return j;
}

void write_sidecar(const std::string& table_path, const std::string& command_line,
                   const json& spec_json) {
  json j;
  j["schema_version"] = 1;
  j["command"] = command_line;
  j["spec"] = spec_json;
  std::ofstream out(table_path + ".meta.json");
  if (!out) throw InvalidInputError("cannot open sidecar file: " + table_path + ".meta.json");
  out << j.dump(2) << "\n";
}

double grad_deviation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    const double scale = std::max({1.0, std::abs(a[j]), std::abs(b[j])});
    worst = std::max(worst, std::abs(a[j] - b[j]) / scale);
  }
  return worst;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (n < 10) throw InvalidInputError("scatter experiment needs n >= 10");
  if (d < 1) throw InvalidInputError("scatter experiment needs d >= 1");
  if (n_replications < 1) throw InvalidInputError("n_replications must be positive");
  if (criteria.empty()) throw InvalidInputError("at least one criterion is required");
  true_params.validate();
  if (true_params.input_dim() != d) {
    throw InvalidInputError("true_params length scales do not match d");
  }
}

ScatterResult run_scatter_experiment(const ExperimentSpec& spec,
                                     const std::string& command_line) {
  spec.validate();

  const std::size_t n_criteria = spec.criteria.size();
  const std::size_t n_tasks = static_cast<std::size_t>(spec.n_replications) * n_criteria;

  ScatterResult result;
  result.rows.resize(n_tasks);

  // One design per replication unless fixed; generated lazily per task from
  // the replication seed so pool scheduling cannot change any output.
  auto design_for = [&](int replication) {
    const std::uint64_t tag = spec.fixed_design ? 0 : static_cast<std::uint64_t>(replication);
    return generate_design(spec.n, spec.d, derive_seed(spec.seed, 0xD51, tag));
  };

  const std::size_t threads = detail::resolve_thread_count(n_tasks);
  detail::parallel_for(n_tasks, threads, [&](std::size_t task) {
    const int replication = static_cast<int>(task / n_criteria);
    const std::size_t criterion_index = task % n_criteria;
    const FitCriterion criterion = spec.criteria[criterion_index];

    ScatterRow& row = result.rows[task];
    row.replication = replication;
    row.criterion = criterion;

    const auto start = Clock::now();
    try {
      const Eigen::MatrixXd X = design_for(replication);
      Dataset data;
      data.X = X;
      data.Z = sample_gp(spec.true_params, X,
                         derive_seed(spec.seed, 0x5A8, static_cast<std::uint64_t>(replication)));

      EstimatorConfig config;
      config.criterion = criterion;
      config.kernel = spec.true_params.family;
      config.n_starts = spec.n_starts;
      config.max_iterations = spec.max_iterations;
      config.gradient_tolerance = spec.gradient_tolerance;
      config.estimate_noise = spec.estimate_noise;
      config.noise_variance = spec.true_params.noise_variance;
      config.seed = derive_seed(spec.seed, 0xF17, static_cast<std::uint64_t>(replication),
                                static_cast<std::uint64_t>(criterion_index));

      const FitResult fit = estimate(data, config);
      row.ok = true;
      row.estimate = fit.params;
      row.criterion_value = fit.criterion_value;
      row.n_iterations = fit.n_iterations;
      row.converged = fit.converged;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    row.wall_time_ms = elapsed_ms(start);
  });

  if (!spec.output_path.empty()) {
    std::ofstream out(spec.output_path);
    if (!out) throw InvalidInputError("cannot open output file: " + spec.output_path);
    out << "replication,criterion,process_variance";
    for (Eigen::Index m = 0; m < spec.d; ++m) out << ",rho" << (m + 1);
    out << ",noise_variance,criterion_value,n_iterations,converged,wall_time_ms,error\r\n";
    for (const ScatterRow& row : result.rows) {
      out << row.replication << "," << fit_criterion_name(row.criterion);
      if (row.ok) {
        out << "," << detail::fmt_double(row.estimate.process_variance);
        for (Eigen::Index m = 0; m < spec.d; ++m) {
          out << "," << detail::fmt_double(row.estimate.length_scales[m]);
        }
        out << "," << detail::fmt_double(row.estimate.noise_variance);
        out << "," << detail::fmt_double(row.criterion_value);
        out << "," << row.n_iterations;
        out << "," << (row.converged ? "true" : "false");
      } else {
        for (Eigen::Index m = 0; m < spec.d + 5; ++m) out << ",";
      }
      out << "," << detail::fmt_double(row.wall_time_ms);
      out << "," << detail::csv_field(row.error) << "\r\n";
    }

    json spec_json;
    spec_json["n"] = spec.n;
    spec_json["d"] = spec.d;
    spec_json["true_params"] = params_to_json(spec.true_params);
    spec_json["n_replications"] = spec.n_replications;
    std::vector<std::string> names;
    for (FitCriterion c : spec.criteria) names.push_back(fit_criterion_name(c));
    spec_json["criteria"] = names;
    spec_json["seed"] = spec.seed;
    spec_json["fixed_design"] = spec.fixed_design;
    spec_json["estimate_noise"] = spec.estimate_noise;
    spec_json["n_starts"] = spec.n_starts;
    spec_json["max_iterations"] = spec.max_iterations;
    spec_json["gradient_tolerance"] = spec.gradient_tolerance;
    write_sidecar(spec.output_path, command_line, spec_json);
  }

  return result;
}

void BenchmarkSpec::validate() const {
  if (n_values.empty() || q_values.empty()) {
    throw InvalidInputError("benchmark needs at least one n and one q");
  }
  if (repetitions < 1) throw InvalidInputError("repetitions must be positive");
  if (!run_adjoint && !run_naive) throw InvalidInputError("no benchmark path selected");
  for (const Eigen::Index n : n_values) {
    if (n < 2) throw InvalidInputError("benchmark needs n >= 2");
    if (run_naive && n > 1500) {
      throw InvalidInputError("naive path is capped at n <= 1500");
    }
  }
  for (const int q : q_values) {
    if (q < 2) throw InvalidInputError("benchmark needs q >= 2 (d = q - 1 >= 1)");
  }
}

BenchmarkResult run_benchmark(const BenchmarkSpec& spec, const std::string& command_line) {
  spec.validate();
  BenchmarkResult result;

  for (const Eigen::Index n : spec.n_values) {
    for (const int q : spec.q_values) {
      const Eigen::Index d = q - 1;

      KernelParams params;
      params.family = KernelFamily::squared_exponential;
      params.process_variance = 1.0;
      params.length_scales =
          Eigen::VectorXd::Constant(d, 0.5 * std::sqrt(static_cast<double>(d)));
      params.noise_variance = 0.1;

      const Eigen::MatrixXd X = generate_design(
          n, d, derive_seed(spec.seed, 0xBE7C, static_cast<std::uint64_t>(n),
                            static_cast<std::uint64_t>(q)));
      const Eigen::VectorXd Z =
          sample_gp(params, X, derive_seed(spec.seed, 0xBE7D, static_cast<std::uint64_t>(n),
                                           static_cast<std::uint64_t>(q)));

      const std::size_t nn_bytes =
          static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * sizeof(double);
      constexpr ScoringRule kRule = ScoringRule::crps;

      struct PathDef {
        const char* name;
        std::function<ValueAndGradient()> eval;
      };
      std::vector<PathDef> paths;
      if (spec.run_adjoint) {
        paths.push_back({"adjoint", [&] { return criterion_with_gradient(params, X, Z, kRule); }});
      }
      if (spec.run_naive) {
        paths.push_back({"naive", [&] { return naive_gradient(params, X, Z, kRule); }});
      }

      Eigen::VectorXd adjoint_grad;
      for (const PathDef& path : paths) {
        ValueAndGradient last{};
        for (int warmup = 0; warmup < 2; ++warmup) last = path.eval();

        std::vector<double> times;
        std::size_t peak_allocs = 0;
        std::size_t max_block = 0;
        for (int rep = 0; rep < spec.repetitions; ++rep) {
          // Track blocks of at least ~one n x n matrix; slack for alignment.
          if (spec.alloc.begin) spec.alloc.begin(nn_bytes - nn_bytes / 8);
          const auto start = Clock::now();
          last = path.eval();
          const double ms = elapsed_ms(start);
          alloc_audit::Report report{};
          if (spec.alloc.end) report = spec.alloc.end();

          BenchRow row;
          row.path = path.name;
          row.n = n;
          row.q = q;
          row.repetition = rep;
          row.wall_time_ms = ms;
          row.peak_nn_allocs = report.peak_live_tracked;
          row.max_block_bytes = report.max_block_bytes;
          result.rows.push_back(row);

          times.push_back(ms);
          peak_allocs = std::max(peak_allocs, report.peak_live_tracked);
          max_block = std::max(max_block, report.max_block_bytes);
        }

        BenchCell cell;
        cell.path = path.name;
        cell.n = n;
        cell.q = q;
        cell.median_ms = detail::median(times);
        cell.peak_nn_allocs = peak_allocs;
        cell.max_block_bytes = max_block;
        if (std::string(path.name) == "adjoint") {
          adjoint_grad = last.gradient;
        } else if (adjoint_grad.size() == last.gradient.size()) {
          cell.cross_check_err = grad_deviation(adjoint_grad, last.gradient);
        }
        result.cells.push_back(cell);
      }
    }
  }

  if (!spec.output_path.empty()) {
    std::ofstream out(spec.output_path);
    if (!out) throw InvalidInputError("cannot open output file: " + spec.output_path);
    out << "path,n,q,repetition,wall_time_ms,peak_nn_allocs\r\n";
    for (const BenchRow& row : result.rows) {
      out << row.path << "," << row.n << "," << row.q << "," << row.repetition << ","
          << detail::fmt_double(row.wall_time_ms) << "," << row.peak_nn_allocs << "\r\n";
    }

    json spec_json;
    spec_json["n_values"] = std::vector<Eigen::Index>(spec.n_values.begin(), spec.n_values.end());
    spec_json["q_values"] = spec.q_values;
    spec_json["repetitions"] = spec.repetitions;
    std::vector<std::string> names;
    if (spec.run_adjoint) names.emplace_back("adjoint");
    if (spec.run_naive) names.emplace_back("naive");
    spec_json["paths"] = names;
    spec_json["seed"] = spec.seed;
    write_sidecar(spec.output_path, command_line, spec_json);
  }

  return result;
}

}  // namespace loogp
