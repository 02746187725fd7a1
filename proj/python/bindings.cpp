#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "loogp/adjoint.hpp"
#include "loogp/dataset.hpp"
#include "loogp/design.hpp"
#include "loogp/errors.hpp"
#include "loogp/estimator.hpp"
#include "loogp/kernels.hpp"
#include "loogp/likelihood.hpp"
#include "loogp/loo.hpp"
#include "loogp/scoring.hpp"

namespace py = pybind11;
using namespace loogp;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian process regression with leave-one-out scoring criteria and "
            "adjoint criterion gradients";

  py::register_exception<InvalidInputError>(m, "InvalidInputError", PyExc_ValueError);
  py::register_exception<SingularCovarianceError>(m, "SingularCovarianceError",
                                                  PyExc_ArithmeticError);
  py::register_exception<ScoreDomainError>(m, "ScoreDomainError", PyExc_ValueError);
  py::register_exception<EstimationFailedError>(m, "EstimationFailedError", PyExc_RuntimeError);

  py::enum_<KernelFamily>(m, "KernelFamily")
      .value("squared_exponential", KernelFamily::squared_exponential)
      .value("matern52", KernelFamily::matern52);

  py::enum_<ScoringRule>(m, "ScoringRule")
      .value("press", ScoringRule::press)
      .value("log_density", ScoringRule::log_density)
      .value("crps", ScoringRule::crps);

  py::enum_<FitCriterion>(m, "FitCriterion")
      .value("press", FitCriterion::press)
      .value("log_density", FitCriterion::log_density)
      .value("crps", FitCriterion::crps)
      .value("mle", FitCriterion::mle);

  py::class_<KernelParams>(m, "KernelParams")
      .def(py::init([](KernelFamily family, double process_variance,
                       const Eigen::VectorXd& length_scales, double noise_variance) {
             KernelParams p;
             p.family = family;
             p.process_variance = process_variance;
             p.length_scales = length_scales;
             p.noise_variance = noise_variance;
             p.validate();
             return p;
           }),
           py::arg("family") = KernelFamily::squared_exponential,
           py::arg("process_variance") = 1.0, py::arg("length_scales"),
           py::arg("noise_variance") = 0.0)
      .def_readwrite("family", &KernelParams::family)
      .def_readwrite("process_variance", &KernelParams::process_variance)
      .def_readwrite("length_scales", &KernelParams::length_scales)
      .def_readwrite("noise_variance", &KernelParams::noise_variance)
      .def("parameter_count", &KernelParams::parameter_count, py::arg("estimate_noise") = false)
      .def("validate", &KernelParams::validate)
      .def("__repr__", [](const KernelParams& p) {
        std::ostringstream ss;
        ss << "KernelParams(family=" << kernel_family_name(p.family)
           << ", process_variance=" << p.process_variance << ", length_scales=[";
        for (Eigen::Index i = 0; i < p.length_scales.size(); ++i) {
          ss << (i ? ", " : "") << p.length_scales[i];
        }
        ss << "], noise_variance=" << p.noise_variance << ")";
        return ss.str();
      });

  m.def("kernel_eval", &kernel_eval, py::arg("params"), py::arg("x"), py::arg("y"));
  m.def("build_covariance", &build_covariance, py::arg("params"), py::arg("X"));
  m.def("param_derivative", &param_derivative, py::arg("params"), py::arg("X"), py::arg("j"),
        py::arg("estimate_noise") = false);
  m.def("contract_gradient", &contract_gradient, py::arg("params"), py::arg("X"),
        py::arg("delta_K"), py::arg("estimate_noise") = false);

  py::class_<LooWorkspace>(m, "LooWorkspace")
      .def_readonly("B", &LooWorkspace::B)
      .def_readonly("alpha", &LooWorkspace::alpha)
      .def_readonly("kappa", &LooWorkspace::kappa)
      .def_readonly("kappa_inv", &LooWorkspace::kappa_inv)
      .def_readonly("chi", &LooWorkspace::chi)
      .def_readonly("chol", &LooWorkspace::chol);

  py::class_<LooMoments>(m, "LooMoments")
      .def_readonly("mu", &LooMoments::mu)
      .def_readonly("sigma2", &LooMoments::sigma2);

  m.def("precompute", &precompute, py::arg("K"), py::arg("Z"), py::arg("noise_variance"));
  m.def("loo_moments", &loo_moments, py::arg("workspace"), py::arg("Z"));

  m.def("score_point", &score_point, py::arg("rule"), py::arg("mu"), py::arg("sigma2"),
        py::arg("z"));
  m.def(
      "score_point_grad",
      [](ScoringRule rule, double mu, double sigma2, double z) {
        const PointGradient g = score_point_grad(rule, mu, sigma2, z);
        return py::make_tuple(g.d_mu, g.d_sigma2);
      },
      py::arg("rule"), py::arg("mu"), py::arg("sigma2"), py::arg("z"));

  py::class_<ScoreGradient>(m, "ScoreGradient")
      .def_readonly("value", &ScoreGradient::value)
      .def_readonly("d_mu", &ScoreGradient::d_mu)
      .def_readonly("d_sigma2", &ScoreGradient::d_sigma2);

  m.def("criterion", &criterion, py::arg("rule"), py::arg("moments"), py::arg("Z"));

  m.def(
      "adjoint_loo",
      [](const LooWorkspace& ws, const Eigen::VectorXd& Z, const Eigen::VectorXd& d_mu,
         const Eigen::VectorXd& d_sigma2) { return adjoint_loo(ws, Z, {d_mu, d_sigma2}); },
      py::arg("workspace"), py::arg("Z"), py::arg("d_mu"), py::arg("d_sigma2"));
  m.def(
      "adjoint_loo_general",
      [](const Eigen::MatrixXd& B, const Eigen::VectorXd& alpha, const Eigen::VectorXd& kappa_inv,
         const Eigen::VectorXd& Z, const Eigen::VectorXd& d_mu, const Eigen::VectorXd& d_sigma2) {
        return adjoint_loo(B, alpha, kappa_inv, Z, {d_mu, d_sigma2});
      },
      py::arg("B"), py::arg("alpha"), py::arg("kappa_inv"), py::arg("Z"), py::arg("d_mu"),
      py::arg("d_sigma2"),
      "Adjoint pass with an explicit B, for linear predictors beyond the GP case");

  m.def(
      "criterion_with_gradient",
      [](const KernelParams& params, const Eigen::MatrixXd& X, const Eigen::VectorXd& Z,
         ScoringRule rule, bool estimate_noise) {
        const ValueAndGradient vg = criterion_with_gradient(params, X, Z, rule, estimate_noise);
        return py::make_tuple(vg.value, vg.gradient);
      },
      py::arg("params"), py::arg("X"), py::arg("Z"), py::arg("rule"),
      py::arg("estimate_noise") = false);
  m.def(
      "naive_gradient",
      [](const KernelParams& params, const Eigen::MatrixXd& X, const Eigen::VectorXd& Z,
         ScoringRule rule, bool estimate_noise) {
        const ValueAndGradient vg = naive_gradient(params, X, Z, rule, estimate_noise);
        return py::make_tuple(vg.value, vg.gradient);
      },
      py::arg("params"), py::arg("X"), py::arg("Z"), py::arg("rule"),
      py::arg("estimate_noise") = false);

  m.def("log_marginal_likelihood", &log_marginal_likelihood, py::arg("params"), py::arg("X"),
        py::arg("Z"));
  m.def(
      "lml_gradient",
      [](const KernelParams& params, const Eigen::MatrixXd& X, const Eigen::VectorXd& Z,
         bool estimate_noise) {
        const ValueAndGradient vg = lml_gradient(params, X, Z, estimate_noise);
        return py::make_tuple(vg.value, vg.gradient);
      },
      py::arg("params"), py::arg("X"), py::arg("Z"), py::arg("estimate_noise") = false);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init([](const Eigen::MatrixXd& X, const Eigen::VectorXd& Z) {
             Dataset d;
             d.X = X;
             d.Z = Z;
             d.validate();
             return d;
           }),
           py::arg("X"), py::arg("Z"))
      .def_readwrite("X", &Dataset::X)
      .def_readwrite("Z", &Dataset::Z)
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("d", &Dataset::d);

  m.def("load_dataset_csv", &load_dataset_csv, py::arg("path"));
  m.def("save_dataset_csv", &save_dataset_csv, py::arg("data"), py::arg("path"));

  py::class_<EstimatorConfig>(m, "EstimatorConfig")
      .def(py::init<>())
      .def_readwrite("criterion", &EstimatorConfig::criterion)
      .def_readwrite("kernel", &EstimatorConfig::kernel)
      .def_readwrite("n_starts", &EstimatorConfig::n_starts)
      .def_readwrite("max_iterations", &EstimatorConfig::max_iterations)
      .def_readwrite("gradient_tolerance", &EstimatorConfig::gradient_tolerance)
      .def_readwrite("parameter_bounds", &EstimatorConfig::parameter_bounds)
      .def_readwrite("estimate_noise", &EstimatorConfig::estimate_noise)
      .def_readwrite("noise_variance", &EstimatorConfig::noise_variance)
      .def_readwrite("seed", &EstimatorConfig::seed);

  py::class_<StartRecord>(m, "StartRecord")
      .def_readonly("start_theta", &StartRecord::start_theta)
      .def_readonly("final_value", &StartRecord::final_value)
      .def_readonly("converged", &StartRecord::converged)
      .def_readonly("error", &StartRecord::error);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("params", &FitResult::params)
      .def_readonly("criterion_value", &FitResult::criterion_value)
      .def_readonly("n_iterations", &FitResult::n_iterations)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("start_index", &FitResult::start_index)
      .def_readonly("all_starts", &FitResult::all_starts);

  m.def("estimate", &estimate, py::arg("data"), py::arg("config"));

  m.def("generate_design", &generate_design, py::arg("n"), py::arg("d"), py::arg("seed"),
        py::arg("improvement_steps") = 1000);
  m.def("sample_gp", &sample_gp, py::arg("params"), py::arg("X"), py::arg("seed"));
}
