"""End-to-end smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import loogp


@pytest.fixture
def params():
    return loogp.KernelParams(
        family=loogp.KernelFamily.squared_exponential,
        process_variance=1.0,
        length_scales=np.array([0.4, 0.6]),
        noise_variance=0.1,
    )


@pytest.fixture
def instance(params):
    X = loogp.generate_design(30, 2, seed=1)
    Z = loogp.sample_gp(params, X, seed=2)
    return X, Z


def test_kernel_eval_closed_form():
    p = loogp.KernelParams(process_variance=2.0, length_scales=np.array([1.0]))
    value = loogp.kernel_eval(p, np.array([0.0]), np.array([1.0]))
    assert value == pytest.approx(2.0 * math.exp(-0.5), rel=1e-15)


def test_covariance_and_loo_moments_against_numpy(params, instance):
    X, Z = instance
    K = loogp.build_covariance(params, X)
    assert np.allclose(K, K.T)
    assert np.allclose(np.diag(K), params.process_variance)

    ws = loogp.precompute(K, Z, params.noise_variance)
    B = np.linalg.inv(K + params.noise_variance * np.eye(len(Z)))
    assert np.allclose(ws.B, B, atol=1e-10)

    moments = loogp.loo_moments(ws, Z)
    assert np.allclose(moments.mu, Z - (B @ Z) / np.diag(B))
    assert np.allclose(moments.sigma2, 1.0 / np.diag(B))


def test_adjoint_matches_naive_path(params, instance):
    X, Z = instance
    for rule in (loogp.ScoringRule.press, loogp.ScoringRule.log_density, loogp.ScoringRule.crps):
        value_a, grad_a = loogp.criterion_with_gradient(params, X, Z, rule)
        value_n, grad_n = loogp.naive_gradient(params, X, Z, rule)
        assert value_a == pytest.approx(value_n, abs=1e-14)
        assert np.allclose(grad_a, grad_n, rtol=1e-10, atol=1e-12)


def test_gradient_matches_finite_differences(params, instance):
    X, Z = instance
    _, grad = loogp.criterion_with_gradient(params, X, Z, loogp.ScoringRule.crps)

    theta = np.concatenate([[params.process_variance], np.asarray(params.length_scales)])
    fd = np.zeros_like(theta)
    for j in range(len(theta)):
        h = 1e-6 * max(1.0, abs(theta[j]))
        for sign in (1.0, -1.0):
            t = theta.copy()
            t[j] += sign * h
            p = loogp.KernelParams(
                family=params.family,
                process_variance=t[0],
                length_scales=t[1:],
                noise_variance=params.noise_variance,
            )
            value, _ = loogp.criterion_with_gradient(p, X, Z, loogp.ScoringRule.crps)
            fd[j] += sign * value / (2.0 * h)
    assert np.allclose(grad, fd, rtol=1e-6, atol=1e-8)


def test_scores_and_criterion(params, instance):
    X, Z = instance
    assert loogp.score_point(loogp.ScoringRule.press, 1.5, 1.0, 2.0) == pytest.approx(-0.25)
    d_mu, d_sigma2 = loogp.score_point_grad(loogp.ScoringRule.log_density, 0.0, 1.0, 0.0)
    assert d_mu == pytest.approx(0.0)
    assert d_sigma2 == pytest.approx(-0.5)

    ws = loogp.precompute(loogp.build_covariance(params, X), Z, params.noise_variance)
    moments = loogp.loo_moments(ws, Z)
    score = loogp.criterion(loogp.ScoringRule.crps, moments, Z)
    assert np.isfinite(score.value)
    assert len(score.d_mu) == len(Z)


def test_estimate_runs_and_is_deterministic(params, instance):
    X, Z = instance
    data = loogp.Dataset(X, Z)
    config = loogp.EstimatorConfig()
    config.criterion = loogp.FitCriterion.log_density
    config.noise_variance = 0.1
    config.n_starts = 2
    config.seed = 5

    fit_a = loogp.estimate(data, config)
    fit_b = loogp.estimate(data, config)
    assert fit_a.params.process_variance == fit_b.params.process_variance
    assert np.array_equal(fit_a.params.length_scales, fit_b.params.length_scales)
    assert fit_a.criterion_value == fit_b.criterion_value
    assert fit_a.params.process_variance > 0.0
    assert len(fit_a.all_starts) == 2


def test_design_is_latin_hypercube():
    X = loogp.generate_design(16, 2, seed=7)
    for column in X.T:
        strata = np.floor(column * 16).astype(int)
        assert sorted(strata) == list(range(16))


def test_dataset_csv_round_trip(tmp_path, params, instance):
    X, Z = instance
    path = str(tmp_path / "data.csv")
    loogp.save_dataset_csv(loogp.Dataset(X, Z), path)
    back = loogp.load_dataset_csv(path)
    assert np.array_equal(back.X, X)
    assert np.array_equal(back.Z, Z)


def test_errors_are_mapped():
    p = loogp.KernelParams(length_scales=np.array([1.0]))
    with pytest.raises(ValueError):
        loogp.kernel_eval(p, np.array([np.nan]), np.array([0.0]))
    with pytest.raises(ValueError):
        loogp.score_point(loogp.ScoringRule.crps, 0.0, -1.0, 0.0)
    with pytest.raises(ArithmeticError):
        loogp.precompute(np.ones((2, 2)), np.zeros(2), 0.0)


def test_mle_baseline(params, instance):
    X, Z = instance
    value, grad = loogp.lml_gradient(params, X, Z)
    assert value == pytest.approx(loogp.log_marginal_likelihood(params, X, Z))
    assert grad.shape == (3,)
