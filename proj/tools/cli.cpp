#include "loogp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "loogp/alloc_audit.hpp"
#include "loogp/dataset.hpp"
#include "loogp/design.hpp"
#include "loogp/errors.hpp"
#include "loogp/estimator.hpp"
#include "loogp/experiment.hpp"
#include "loogp/rng.hpp"

namespace loogp {

namespace {

using nlohmann::json;

std::string quote_command_line(int argc, const char* const* argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) out += ' ';
    const std::string arg = argv[i];
    if (arg.find_first_of(" \t\"'") == std::string::npos) {
      out += arg;
    } else {
      out += '\'' + arg + '\'';
    }
  }
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
  return v;
}

struct FitOptions {
  std::string data_path;
  std::string criterion = "crps";
  std::string kernel = "se";
  double noise = 0.0;
  bool estimate_noise = false;
  int starts = 5;
  int max_iter = 200;
  double grad_tol = 1e-5;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_fit(const FitOptions& opt, const std::string& command_line) {
  const Dataset data = load_dataset_csv(opt.data_path);

  EstimatorConfig config;
  config.criterion = parse_fit_criterion(opt.criterion);
  config.kernel = parse_kernel_family(opt.kernel);
  config.n_starts = opt.starts;
  config.max_iterations = opt.max_iter;
  config.gradient_tolerance = opt.grad_tol;
  config.estimate_noise = opt.estimate_noise;
  config.noise_variance = opt.noise;
  config.seed = opt.seed;

  const FitResult fit = estimate(data, config);

  json j;
  j["schema_version"] = 1;
  j["command"] = command_line;
  j["data"] = {{"path", opt.data_path}, {"n", data.n()}, {"d", data.d()}};
  j["criterion"] = fit_criterion_name(config.criterion);
  j["kernel"] = kernel_family_name(config.kernel);
  j["seed"] = config.seed;
  j["estimate_noise"] = config.estimate_noise;
  j["result"] = {
      {"process_variance", fit.params.process_variance},
      {"length_scales",
       std::vector<double>(fit.params.length_scales.begin(), fit.params.length_scales.end())},
      {"noise_variance", fit.params.noise_variance},
      {"criterion_value", fit.criterion_value},
      {"n_iterations", fit.n_iterations},
      {"converged", fit.converged},
      {"start_index", fit.start_index},
  };
  json starts = json::array();
  for (const StartRecord& s : fit.all_starts) {
    starts.push_back({
        {"start_theta", std::vector<double>(s.start_theta.begin(), s.start_theta.end())},
        {"final_value", s.final_value},
        {"converged", s.converged},
        {"error", s.error},
    });
  }
  j["starts"] = starts;

  if (opt.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream file(opt.out);
    if (!file) throw InvalidInputError("cannot open output file: " + opt.out);
    file << j.dump(2) << "\n";
    std::cout << "wrote " << opt.out << "\n";
  }
  return 0;
}

KernelParams make_true_params(const std::string& kernel, double var,
                              std::vector<double> rho, Eigen::Index d, double noise) {
  if (rho.empty()) rho.assign(static_cast<std::size_t>(d), 0.5);
  if (static_cast<Eigen::Index>(rho.size()) != d) {
    throw InvalidInputError("--rho needs exactly d values");
  }
  KernelParams p;
  p.family = parse_kernel_family(kernel);
  p.process_variance = var;
  p.length_scales = to_vector(rho);
  p.noise_variance = noise;
  p.validate();
  return p;
}

void write_design_csv(const Eigen::MatrixXd& X, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot open output file: " + path);
  for (Eigen::Index m = 0; m < X.cols(); ++m) {
    out << (m > 0 ? ",x" : "x") << (m + 1);
  }
  out << "\r\n";
  char buf[40];
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index m = 0; m < X.cols(); ++m) {
      std::snprintf(buf, sizeof(buf), "%.17g", X(i, m));
      out << (m > 0 ? "," : "") << buf;
    }
    out << "\r\n";
  }
}

void write_meta(const std::string& table_path, const std::string& command_line, json spec) {
  json j;
  j["schema_version"] = 1;
  j["command"] = command_line;
  j["spec"] = std::move(spec);
  std::ofstream out(table_path + ".meta.json");
  if (!out) throw InvalidInputError("cannot open sidecar file: " + table_path + ".meta.json");
  out << j.dump(2) << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  const std::string command_line = quote_command_line(argc, argv);

  CLI::App app{"Gaussian process regression with leave-one-out scoring criteria"};
  app.require_subcommand(1);

  // fit ----------------------------------------------------------------
  FitOptions fit_opt;
  CLI::App* fit = app.add_subcommand("fit", "estimate covariance parameters from a CSV dataset");
  fit->add_option("--data", fit_opt.data_path, "dataset CSV with header x1,...,xd,z")->required();
  fit->add_option("--criterion", fit_opt.criterion, "press|log-density|crps|mle");
  fit->add_option("--kernel", fit_opt.kernel, "se|matern52");
  fit->add_option("--noise", fit_opt.noise, "fixed noise variance");
  fit->add_flag("--estimate-noise", fit_opt.estimate_noise, "estimate the noise variance");
  fit->add_option("--starts", fit_opt.starts, "number of multi-start points");
  fit->add_option("--max-iter", fit_opt.max_iter, "iteration cap per start");
  fit->add_option("--grad-tol", fit_opt.grad_tol, "projected-gradient tolerance");
  fit->add_option("--seed", fit_opt.seed, "random seed");
  fit->add_option("--out", fit_opt.out, "output JSON path (default: stdout)");

  // design ---------------------------------------------------------------
  Eigen::Index des_n = 0, des_d = 0;
  std::uint64_t des_seed = 0;
  std::string des_out;
  CLI::App* design = app.add_subcommand("design", "generate a maximin Latin hypercube design");
  design->add_option("--n", des_n, "number of points")->required();
  design->add_option("--d", des_d, "input dimension")->required();
  design->add_option("--seed", des_seed, "random seed");
  design->add_option("--out", des_out, "output CSV path")->required();

  // simulate ------------------------------------------------------------
  Eigen::Index sim_n = 0, sim_d = 0;
  std::vector<double> sim_rho;
  double sim_var = 1.0, sim_noise = 0.0;
  std::string sim_kernel = "se", sim_out;
  std::uint64_t sim_seed = 0;
  CLI::App* simulate = app.add_subcommand("simulate", "draw a GP dataset on a fresh design");
  simulate->add_option("--n", sim_n, "number of points")->required();
  simulate->add_option("--d", sim_d, "input dimension")->required();
  simulate->add_option("--rho", sim_rho, "length scales (comma separated, default 0.5 each)")
      ->delimiter(',');
  simulate->add_option("--var", sim_var, "process variance");
  simulate->add_option("--noise", sim_noise, "noise variance");
  simulate->add_option("--kernel", sim_kernel, "se|matern52");
  simulate->add_option("--seed", sim_seed, "random seed");
  simulate->add_option("--out", sim_out, "output CSV path")->required();

  // scatter ---------------------------------------------------------------
  ExperimentSpec scatter_spec;
  std::vector<double> sc_rho;
  std::vector<std::string> sc_criteria;
  double sc_var = 1.0, sc_noise = 0.0;
  std::string sc_kernel = "se";
  CLI::App* scatter = app.add_subcommand("scatter", "replicated estimation experiment");
  scatter->add_option("--n", scatter_spec.n, "design size per replication")->required();
  scatter->add_option("--d", scatter_spec.d, "input dimension")->required();
  scatter->add_option("--rho", sc_rho, "true length scales")->required()->delimiter(',');
  scatter->add_option("--var", sc_var, "true process variance");
  scatter->add_option("--noise", sc_noise, "true noise variance");
  scatter->add_option("--kernel", sc_kernel, "se|matern52");
  scatter->add_option("--reps", scatter_spec.n_replications, "number of replications");
  scatter->add_option("--criteria", sc_criteria, "criteria to fit (comma separated)")
      ->required()
      ->delimiter(',');
  scatter->add_option("--seed", scatter_spec.seed, "random seed");
  scatter->add_option("--out", scatter_spec.output_path, "output CSV path")->required();
  scatter->add_flag("--fixed-design", scatter_spec.fixed_design,
                    "reuse one design across replications");
  scatter->add_flag("--estimate-noise", scatter_spec.estimate_noise,
                    "estimate the noise variance in each fit");
  scatter->add_option("--starts", scatter_spec.n_starts, "multi-start points per fit");
  scatter->add_option("--max-iter", scatter_spec.max_iterations, "iteration cap per start");
  scatter->add_option("--grad-tol", scatter_spec.gradient_tolerance, "gradient tolerance");

  // bench -----------------------------------------------------------------
  BenchmarkSpec bench_spec;
  std::vector<long long> bench_n{600};
  std::vector<int> bench_q{3, 33};
  std::vector<std::string> bench_paths{"adjoint", "naive"};
  CLI::App* bench = app.add_subcommand("bench", "time the adjoint and naive gradient paths");
  bench->add_option("--n", bench_n, "design sizes")->delimiter(',');
  bench->add_option("--q", bench_q, "parameter counts (d = q - 1)")->delimiter(',');
  bench->add_option("--paths", bench_paths, "subset of adjoint,naive")->delimiter(',');
  bench->add_option("--reps", bench_spec.repetitions, "timed repetitions per cell");
  bench->add_option("--seed", bench_spec.seed, "random seed");
  bench->add_option("--out", bench_spec.output_path, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*fit) return cmd_fit(fit_opt, command_line);

    if (*design) {
      const Eigen::MatrixXd X = generate_design(des_n, des_d, des_seed);
      write_design_csv(X, des_out);
      write_meta(des_out, command_line,
                 json{{"n", des_n}, {"d", des_d}, {"seed", des_seed}});
      std::cout << "wrote " << des_out << "\n";
      return 0;
    }

    if (*simulate) {
      const KernelParams truth =
          make_true_params(sim_kernel, sim_var, sim_rho, sim_d, sim_noise);
      Dataset data;
      data.X = generate_design(sim_n, sim_d, derive_seed(sim_seed, 1));
      data.Z = sample_gp(truth, data.X, derive_seed(sim_seed, 2));
      save_dataset_csv(data, sim_out);
      write_meta(sim_out, command_line,
                 json{{"n", sim_n},
                      {"d", sim_d},
                      {"kernel", sim_kernel},
                      {"process_variance", sim_var},
                      {"length_scales", sim_rho},
                      {"noise_variance", sim_noise},
                      {"seed", sim_seed}});
      std::cout << "wrote " << sim_out << "\n";
      return 0;
    }

    if (*scatter) {
      scatter_spec.true_params =
          make_true_params(sc_kernel, sc_var, sc_rho, scatter_spec.d, sc_noise);
      for (const std::string& name : sc_criteria) {
        scatter_spec.criteria.push_back(parse_fit_criterion(name));
      }
      const ScatterResult result = run_scatter_experiment(scatter_spec, command_line);
      int failures = 0;
      for (const auto& row : result.rows) failures += row.ok ? 0 : 1;
      std::cout << "wrote " << scatter_spec.output_path << " (" << result.rows.size()
                << " rows, " << failures << " failed)\n";
      return 0;
    }

    if (*bench) {
      bench_spec.n_values.assign(bench_n.begin(), bench_n.end());
      bench_spec.q_values = bench_q;
      bench_spec.run_adjoint = false;
      bench_spec.run_naive = false;
      for (const std::string& p : bench_paths) {
        if (p == "adjoint") bench_spec.run_adjoint = true;
        else if (p == "naive") bench_spec.run_naive = true;
        else throw InvalidInputError("unknown benchmark path: " + p);
      }
      if (alloc_audit::hooks_active()) {
        bench_spec.alloc.begin = [](std::size_t threshold) { alloc_audit::begin(threshold); };
        bench_spec.alloc.end = [] { return alloc_audit::end(); };
      }
      const BenchmarkResult result = run_benchmark(bench_spec, command_line);
      for (const BenchCell& cell : result.cells) {
        std::cout << cell.path << " n=" << cell.n << " q=" << cell.q
                  << " median_ms=" << cell.median_ms
                  << " peak_nn_allocs=" << cell.peak_nn_allocs;
        if (!std::isnan(cell.cross_check_err)) {
          std::cout << " vs_adjoint_err=" << cell.cross_check_err;
        }
        std::cout << "\n";
      }
      std::cout << "wrote " << bench_spec.output_path << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;  // unreachable: a subcommand is required
}

}  // namespace loogp
