# Copyright (c) The UniGAP Authors. All rights reserved.
import os.path as osp

import numpy as np
import pytest

from unigap.datasets import synth_latent_graph
from unigap.theory import (LatentSpec, RiskCurve, empirical_smoothing,
                           fit_decay_slope, load_latent_spec, operator_norm,
                           propagation_matrix, rate_check, ridge_fit,
                           smoothing_covariance, stationarity_check,
                           test_risk)
from unigap.utils.exceptions import ConfigError, NonFiniteError, ShapeError

THEORY_CONFIGS = osp.join(
    osp.dirname(osp.dirname(osp.abspath(__file__))), 'configs', 'theory')


def _random_psd(seed, dim=4):
    rng = np.random.default_rng(seed)
    b = rng.standard_normal((dim, dim))
    return b @ b.T / dim + 0.1 * np.eye(dim)


class TestRidge:

    def test_identity_design_recovers_targets(self):
        y = np.array([1.0, -2.0, 0.5, 3.0])
        theta = ridge_fit(np.eye(4), y, 1e-12)
        np.testing.assert_allclose(theta.ravel(), y, atol=1e-9)

    def test_heavy_shrinkage(self, rng):
        h = rng.standard_normal((10, 3))
        y = rng.standard_normal(10)
        assert np.abs(ridge_fit(h, y, 1e12)).max() < 1e-10

    def test_matches_dense_inverse(self, rng):
        h = rng.standard_normal((20, 5))
        y = rng.standard_normal((20, 1))
        lam = 0.3
        gram = h.T @ h / 20 + lam * np.eye(5)
        expected = np.linalg.inv(gram) @ h.T @ y / 20
        theta = ridge_fit(h, y, lam)
        np.testing.assert_allclose(theta, expected, rtol=1e-10)
        residual = gram @ theta - h.T @ y / 20
        assert np.linalg.norm(residual) < 1e-8

    def test_errors(self):
        with pytest.raises(ValueError, match='positive'):
            ridge_fit(np.eye(2), np.ones(2), 0.0)
        with pytest.raises(ShapeError):
            ridge_fit(np.eye(2), np.ones(3), 1.0)
        with pytest.raises(NonFiniteError):
            ridge_fit(np.array([[np.nan], [1.0]]), np.ones(2), 1.0)


class TestRisk:

    def test_perfect_fit(self, rng):
        h = rng.standard_normal((6, 2))
        theta = np.array([1.5, -0.5])
        assert test_risk(h, theta, h @ theta) == pytest.approx(0.0, abs=1e-24)

    def test_zero_coefficients(self):
        y = np.array([1.0, 2.0, 2.0])
        assert test_risk(np.ones((3, 2)), np.zeros(2), y) == pytest.approx(3.0)

    def test_hand_computed(self):
        h = np.array([[1.0], [2.0], [3.0]])
        assert test_risk(h, np.array([1.0]),
                         np.array([1.0, 2.0, 4.0])) == pytest.approx(1 / 3)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            test_risk(np.ones((3, 2)), np.ones(3), np.ones(3))


class TestSmoothingCovariance:

    def test_isotropic_plain(self):
        eye = np.eye(3)
        np.testing.assert_allclose(propagation_matrix(eye), eye / 2)
        for k in (1, 2, 5):
            np.testing.assert_allclose(
                smoothing_covariance(eye, k, 'plain'),
                2.0**(-2 * k) * eye,
                atol=1e-10)

    def test_isotropic_without_insertion(self):
        eye = np.eye(3)
        for k in (1, 3, 6):
            np.testing.assert_allclose(
                smoothing_covariance(eye, k, 'unigap', p=0.0),
                2.0**(-(k - 1)) * eye,
                atol=1e-10)

    @pytest.mark.parametrize('seed', [0, 1, 2])
    def test_without_insertion_skips_one_round(self, seed):
        sigma = _random_psd(seed)
        a = propagation_matrix(sigma)
        for k in (1, 2, 4):
            np.testing.assert_allclose(
                smoothing_covariance(sigma, k, 'unigap', p=0.0),
                np.linalg.matrix_power(a, k - 1) @ sigma,
                atol=1e-10)

    @pytest.mark.parametrize('mode', ['plain', 'unigap'])
    def test_symmetric_psd(self, mode):
        sigma = _random_psd(3)
        out = smoothing_covariance(sigma, 3, mode, p=0.7)
        np.testing.assert_allclose(out, out.T, atol=1e-10)
        assert np.linalg.eigvalsh(out).min() > -1e-8

    def test_singular_sigma_is_regularized(self):
        out = smoothing_covariance(np.diag([1.0, 0.0]), 2, 'unigap')
        assert np.all(np.isfinite(out))
        assert out[0, 0] > 0

    def test_invalid_arguments(self):
        eye = np.eye(2)
        with pytest.raises(ValueError, match='k must be'):
            smoothing_covariance(eye, 0)
        with pytest.raises(ValueError, match='mode'):
            smoothing_covariance(eye, 1, 'halfhop')
        with pytest.raises(ValueError, match='p must be'):
            smoothing_covariance(eye, 1, 'unigap', p=1.5)
        with pytest.raises(ValueError, match='symmetric'):
            smoothing_covariance(np.array([[1.0, 0.5], [0.0, 1.0]]), 1)
        with pytest.raises(ValueError, match='semidefinite'):
            smoothing_covariance(np.diag([1.0, -1.0]), 1)


class TestRate:

    def test_operator_norm(self, rng):
        q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
        m = q @ np.diag([5.0, 2.0, 1.0, 0.5, 0.1]) @ q.T
        assert operator_norm(m) == pytest.approx(5.0, rel=1e-8)
        assert operator_norm(np.zeros((3, 3))) == 0.0
        assert operator_norm(3.0 * np.eye(4)) == pytest.approx(3.0)

    def test_fit_decay_slope(self):
        k = np.arange(1, 21)
        assert fit_decay_slope(k, np.exp(-0.3 * k)) == pytest.approx(-0.3)
        with pytest.raises(ValueError, match='two positive'):
            fit_decay_slope([1, 2], [1.0, 0.0])

    def test_isotropic_half_rate(self):
        curve = rate_check(np.eye(3), 32, p=0.5)
        assert not curve.degenerate
        assert 0.45 <= curve.slope_ratio <= 0.55
        assert curve.slopes['plain'] == pytest.approx(2 * np.log(0.5))

    def test_isotropic_without_insertion(self):
        curve = rate_check(np.eye(2), 8, p=0.0)
        k = curve.k
        np.testing.assert_allclose(curve.values['plain'], 2.0**(-2 * k))
        np.testing.assert_allclose(curve.values['unigap'],
                                   2.0**(-(k - 1)))

    @pytest.mark.parametrize('seed', [0, 1, 2])
    def test_random_sigma_half_rate(self, seed):
        curve = rate_check(_random_psd(seed), 32, p=0.5)
        assert 0.4 <= curve.slope_ratio <= 0.6

    def test_small_k_max(self):
        with pytest.raises(ValueError, match='at least 4'):
            rate_check(np.eye(2), 3)


class TestRiskCurve:

    def test_validation(self):
        with pytest.raises(ValueError, match='strictly increasing'):
            RiskCurve([1, 1, 2], dict(plain=[1, 1, 1]))
        with pytest.raises(ValueError, match='nonnegative'):
            RiskCurve([1, 2], dict(plain=[1, -1]))
        with pytest.raises(ValueError, match='values for'):
            RiskCurve([1, 2], dict(plain=[1]))

    def test_argmin_and_ratio(self):
        curve = RiskCurve([0, 1, 2, 3],
                          dict(plain=[3, 1, 1, 2], unigap=[4, 3, 2, 2]),
                          'risk', dict(plain=-1.0, unigap=-0.5))
        assert curve.argmin('plain') == 1
        assert curve.argmin('unigap') == 2
        assert curve.slope_ratio == 0.5
        assert RiskCurve([1], dict(plain=[1.0])).slope_ratio is None

    def test_csv_and_plot(self, tmp_path):
        curve = rate_check(np.eye(2), 6)
        path = str(tmp_path / 'curve.csv')
        curve.to_csv(path)
        loaded = RiskCurve.from_csv(path)
        np.testing.assert_array_equal(loaded.k, curve.k)
        for mode in ('plain', 'unigap'):
            np.testing.assert_array_equal(loaded.values[mode],
                                          curve.values[mode])
        svg = tmp_path / 'curve.svg'
        curve.plot(str(svg))
        assert svg.read_text().lstrip().startswith('<?xml')


class TestEmpiricalSmoothing:

    @pytest.fixture
    def latent_graph(self):
        return synth_latent_graph(300, 3, density=20.0, seed=0)

    def test_no_rounds_is_plain_ridge(self, latent_graph):
        g = latent_graph
        curve = empirical_smoothing(g, 4, p=0.5, lam=1e-3)
        train, test = g.masks.train, g.masks.test
        theta = ridge_fit(g.features[train], g.targets[train], 1e-3)
        expected = test_risk(g.features[test], theta, g.targets[test])
        assert curve.values['plain'][0] == pytest.approx(expected)
        assert curve.values['unigap'][0] == pytest.approx(expected)

    def test_curve_shape(self, latent_graph):
        curve = empirical_smoothing(latent_graph, 16)
        np.testing.assert_array_equal(curve.k, np.arange(17))
        assert curve.kind == 'risk'
        for mode in ('plain', 'unigap'):
            values = curve.values[mode]
            assert 0 < curve.argmin(mode) < 16
            assert values.min() < 0.8 * values[0]
            assert values.min() < 0.8 * values[-1]

    @pytest.mark.parametrize('name', ['isotropic.py', 'anisotropic.py'])
    def test_shipped_configs_have_interior_optimum(self, name):
        spec = load_latent_spec(osp.join(THEORY_CONFIGS, name))
        for seed in spec.seeds:
            curve = empirical_smoothing(
                spec.graph(seed), spec.k_max, spec.p, seed, spec.lam)
            assert 0 < curve.argmin('plain') < spec.k_max, seed

    def test_without_insertion_modes_agree(self, latent_graph):
        curve = empirical_smoothing(latent_graph, 5, p=0.0)
        np.testing.assert_allclose(
            curve.values['unigap'], curve.values['plain'], rtol=1e-10)

    def test_deterministic(self, latent_graph):
        first = empirical_smoothing(latent_graph, 3, seed=4)
        second = empirical_smoothing(latent_graph, 3, seed=4)
        np.testing.assert_array_equal(first.values['unigap'],
                                      second.values['unigap'])

    def test_requires_targets(self, toy_graph):
        with pytest.raises(ValueError, match='regression targets'):
            empirical_smoothing(toy_graph, 3)


class TestStationarity:

    def test_residuals_at_optimum(self):
        result = stationarity_check(seed=0)
        assert result.grad_norm < 1e-6
        assert result.theta_residual < 1e-6
        assert result.theta_u_residual < 1e-6
        assert np.isfinite(result.theta_u)

    def test_requires_targets(self, toy_graph):
        with pytest.raises(ValueError, match='regression targets'):
            stationarity_check(toy_graph)


class TestLatentSpec:

    def test_scalar_sigma(self):
        spec = LatentSpec(sigma=2.0, dim=3)
        np.testing.assert_array_equal(spec.sigma, 2.0 * np.eye(3))
        assert spec.to_dict()['sigma'] == (2.0 * np.eye(3)).tolist()

    def test_collects_errors(self):
        with pytest.raises(ConfigError) as exc:
            LatentSpec(lam=0.0, p=2.0, k_max=2, n_test=0)
        assert len(exc.value.errors) == 4

    def test_noise_fields(self):
        with pytest.raises(ConfigError) as exc:
            LatentSpec(feature_noise=-1.0, obs_dim=0)
        assert len(exc.value.errors) == 2
        g = LatentSpec(dim=2, obs_dim=5, n_train=10, n_val=5, n_test=5,
                       density=4.0).graph()
        assert g.features.shape == (20, 5)

    def test_non_psd_sigma(self):
        with pytest.raises(ConfigError, match='sigma'):
            LatentSpec(sigma=[1.0, -1.0], dim=2)

    def test_graph_split_sizes(self):
        spec = LatentSpec(dim=2, n_train=30, n_val=10, n_test=30)
        g = spec.graph()
        assert g.n_nodes == spec.n_nodes == 70
        assert g.masks.train.sum() == 30
        assert g.masks.val.sum() == 10
        assert g.targets is not None

    def test_load_from_file(self, tmp_path):
        path = tmp_path / 'latent.py'
        path.write_text('sigma = [1.0, 2.0]\ndim = 2\nk_max = 8\n')
        spec = load_latent_spec(str(path))
        np.testing.assert_array_equal(spec.sigma, np.diag([1.0, 2.0]))
        assert spec.k_max == 8

    def test_unknown_key(self, tmp_path):
        path = tmp_path / 'latent.py'
        path.write_text('dim = 2\nrounds = 8\n')
        with pytest.raises(ConfigError, match="unknown key 'rounds'"):
            load_latent_spec(str(path))
