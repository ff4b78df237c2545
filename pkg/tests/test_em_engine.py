import math

import numpy as np
import pytest

from dpem.em_engine import (
    EmConfig,
    fit_geometric_decay,
    gaussian_noise_std,
    gaussian_noise_variance,
    run_high_dim,
    run_low_dim,
    split_batches,
)
from dpem.mechanisms import NoiseOracle, PrivacyBudget
from dpem.models import ModelSpec, generate_gmm, generate_mor, generate_rmc
from dpem.oracle import exact_top_k, ht_gradient_em

BUDGET = PrivacyBudget(0.5, 1e-3)


def sparse_beta(d, s, value=None):
    beta = np.zeros(d)
    beta[:s] = (1.0 / math.sqrt(s)) if value is None else value
    return beta


class TestSplitBatches:
    def test_even_split(self):
        assert split_batches(10, 2) == [(0, 5), (5, 10)]

    def test_remainder_dropped(self):
        assert split_batches(10, 3) == [(0, 3), (3, 6), (6, 9)]

    def test_singletons(self):
        assert split_batches(7, 7) == [(i, i + 1) for i in range(7)]

    def test_errors(self):
        with pytest.raises(ValueError):
            split_batches(3, 4)
        with pytest.raises(ValueError):
            split_batches(0, 1)

    def test_disjoint_cover(self):
        for n, N0 in [(100, 7), (53, 9), (12, 12)]:
            bounds = split_batches(n, N0)
            seen = [i for lo, hi in bounds for i in range(lo, hi)]
            assert seen == list(range(N0 * (n // N0)))


class TestEmConfig:
    def test_high_dim_requires_s_hat(self):
        with pytest.raises(ValueError):
            EmConfig(eta=0.5, T=1.0, N0=3, regime="high_dim")

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(eta=-0.1, T=1.0, N0=3, s_hat=1),
            dict(eta=0.5, T=0.0, N0=3, s_hat=1),
            dict(eta=0.5, T=1.0, N0=0, s_hat=1),
            dict(eta=0.5, T=1.0, N0=3, s_hat=1, regime="mid_dim"),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            EmConfig(**kwargs)


def make_instance(kind, seed, d=12, n=240, s_star=3, sigma=0.5):
    beta_star = sparse_beta(d, s_star)
    spec = ModelSpec(kind, d, sigma, beta_star, missing_prob=0.2)
    gen = {"gmm": generate_gmm, "mor": generate_mor, "rmc": generate_rmc}[kind]
    return spec, gen(spec, n, NoiseOracle(seed)), beta_star


class TestRunHighDim:
    def test_rejects_dense_beta0(self):
        spec, data, beta_star = make_instance("gmm", 1)
        config = EmConfig(eta=0.5, T=2.0, N0=4, s_hat=2, budget=BUDGET)
        with pytest.raises(ValueError):
            run_high_dim(spec, data, config, np.ones(spec.d), NoiseOracle(0))

    def test_rejects_dimension_mismatch(self):
        spec, data, beta_star = make_instance("gmm", 1)
        config = EmConfig(eta=0.5, T=2.0, N0=4, s_hat=3, budget=BUDGET)
        with pytest.raises(ValueError):
            run_high_dim(spec, data, config, np.zeros(spec.d + 1), NoiseOracle(0))

    def test_rejects_small_dataset(self):
        spec, data, beta_star = make_instance("gmm", 1, n=3)
        config = EmConfig(eta=0.5, T=2.0, N0=4, s_hat=3, budget=BUDGET)
        with pytest.raises(ValueError):
            run_high_dim(spec, data, config, sparse_beta(spec.d, 3), NoiseOracle(0))

    def test_inf_T_requires_silent_oracle(self):
        spec, data, beta_star = make_instance("gmm", 1)
        config = EmConfig(eta=0.5, T=math.inf, N0=4, s_hat=3, budget=BUDGET)
        with pytest.raises(ValueError):
            run_high_dim(spec, data, config, sparse_beta(spec.d, 3), NoiseOracle(0))

    def test_zero_step_silent_is_fixed_point(self):
        spec, data, beta_star = make_instance("gmm", 2)
        beta0 = sparse_beta(spec.d, 3)
        config = EmConfig(eta=0.0, T=2.0, N0=4, s_hat=3, budget=BUDGET)
        traj = run_high_dim(spec, data, config, beta0, NoiseOracle(0, "silent"))
        assert np.all(traj.betas == beta0)

    def test_zero_step_live_projects_beta0(self):
        # With eta = 0 the sensitivity is 0, so even live noise vanishes.
        spec, data, beta_star = make_instance("gmm", 2)
        beta0 = sparse_beta(spec.d, 3)
        config = EmConfig(eta=0.0, T=2.0, N0=4, s_hat=3, budget=BUDGET)
        traj = run_high_dim(spec, data, config, beta0, NoiseOracle(3))
        assert np.all(traj.betas == beta0)

    def test_sparsity_invariant(self):
        for kind in ("gmm", "mor", "rmc"):
            spec, data, beta_star = make_instance(kind, 3)
            config = EmConfig(eta=0.5, T=1.5, N0=5, s_hat=4, budget=BUDGET)
            traj = run_high_dim(spec, data, config, sparse_beta(spec.d, 4), NoiseOracle(9))
            for t in range(1, traj.betas.shape[0]):
                assert np.count_nonzero(traj.betas[t]) <= 4

    def test_deterministic(self):
        spec, data, beta_star = make_instance("mor", 4)
        config = EmConfig(eta=0.5, T=1.5, N0=5, s_hat=4, budget=BUDGET)
        t1 = run_high_dim(spec, data, config, sparse_beta(spec.d, 4), NoiseOracle(17))
        t2 = run_high_dim(spec, data, config, sparse_beta(spec.d, 4), NoiseOracle(17))
        np.testing.assert_array_equal(t1.betas, t2.betas)

    def test_batch_bounds_disjoint(self):
        spec, data, beta_star = make_instance("gmm", 5, n=103)
        config = EmConfig(eta=0.5, T=1.5, N0=4, s_hat=3, budget=BUDGET)
        traj = run_high_dim(spec, data, config, sparse_beta(spec.d, 3), NoiseOracle(1))
        seen = set()
        for lo, hi in traj.batch_bounds:
            for i in range(lo, hi):
                assert i not in seen
                seen.add(i)
        assert seen == set(range(4 * (103 // 4)))

    @pytest.mark.parametrize("kind", ["gmm", "mor", "rmc"])
    def test_matches_reference_with_silent_noise(self, kind):
        spec, data, beta_star = make_instance(kind, 6)
        beta0 = exact_top_k(beta_star + 0.05 * NoiseOracle(8).standard_normal(spec.d), 4).values
        config = EmConfig(eta=0.5, T=math.inf, N0=5, s_hat=4, budget=BUDGET)
        traj = run_high_dim(spec, data, config, beta0, NoiseOracle(0, "silent"), true_beta=beta_star)
        ref = ht_gradient_em(spec, data, config, beta0, true_beta=beta_star)
        assert np.abs(traj.betas - ref.betas).max() <= 1e-12

    def test_statistical_recovery_silent(self):
        # Frozen threshold 3 sqrt(s* ln d / n_used), validated over 20 seeds
        # before freezing (all passed, max observed error 0.083).
        d, n, s = 20, 2000, 5
        beta_star = sparse_beta(d, s)
        spec = ModelSpec("gmm", d, 0.5, beta_star)
        data = generate_gmm(spec, n, NoiseOracle(55))
        beta0 = exact_top_k(beta_star + 0.05 * NoiseOracle(56).standard_normal(d), s).values
        config = EmConfig(eta=0.5, T=math.inf, N0=8, s_hat=s, budget=BUDGET)
        traj = run_high_dim(spec, data, config, beta0, NoiseOracle(0, "silent"), true_beta=beta_star)
        assert traj.final_error <= 3 * math.sqrt(s * math.log(d) / 2000)

    def test_geometric_decay_diagnostic(self):
        # Well-separated mixture, noiseless: the optimization error contracts.
        d, n, s = 10, 4000, 3
        beta_star = sparse_beta(d, s, value=2.0)  # ||beta*|| / sigma >= 4
        spec = ModelSpec("gmm", d, 0.5, beta_star)
        data = generate_gmm(spec, n, NoiseOracle(77))
        beta0 = exact_top_k(beta_star * 0.7, s).values
        config = EmConfig(eta=0.5, T=math.inf, N0=8, s_hat=s, budget=BUDGET)
        traj = run_high_dim(spec, data, config, beta0, NoiseOracle(0, "silent"), true_beta=beta_star)
        kappa, floor = fit_geometric_decay(traj.errors)
        assert kappa < 1.0
        assert np.all(traj.errors[1:] <= kappa * traj.errors[:-1] + max(floor, 0.05) + 1e-9)


class TestNoiseCalibration:
    def test_variance_frozen_example(self):
        got = gaussian_noise_variance("gmm", 1.0, 2.0, 8, 4000, 5, PrivacyBudget(0.5, 1 / 8000))
        assert got == pytest.approx(0.02357847135225903, rel=1e-12)

    @pytest.mark.parametrize(
        "kind, factor", [("gmm", lambda T: 2 * T), ("mor", lambda T: 4 * T**2), ("rmc", lambda T: 6 * T**2)]
    )
    def test_variance_formula_by_model(self, kind, factor):
        eta, T, N0, n, d, eps, delta = 0.7, 1.3, 6, 3000, 9, 0.4, 1e-4
        expected = 2 * eta**2 * d * factor(T) ** 2 * N0**2 * math.log(1.25 / delta) / (n**2 * eps**2)
        got = gaussian_noise_variance(kind, eta, T, N0, n, d, PrivacyBudget(eps, delta))
        assert got == pytest.approx(expected, rel=1e-12)

    def test_doubling_epsilon_halves_std(self):
        lo = gaussian_noise_std("gmm", 1.0, 2.0, 8, 4000, 5, PrivacyBudget(0.5, 1e-4))
        hi = gaussian_noise_std("gmm", 1.0, 2.0, 8, 4000, 5, PrivacyBudget(1.0, 1e-4))
        assert lo == 2.0 * hi

    def test_rejects_inf_T(self):
        with pytest.raises(ValueError):
            gaussian_noise_variance("gmm", 1.0, math.inf, 8, 4000, 5, BUDGET)


class TestRunLowDim:
    def _instance(self, seed, d=10, n=5000, sigma=0.5):
        beta_star = np.ones(d) / math.sqrt(d)
        spec = ModelSpec("gmm", d, sigma, beta_star)
        return spec, generate_gmm(spec, n, NoiseOracle(seed)), beta_star

    def test_silent_untruncated_recovery(self):
        # Frozen threshold 3 sqrt(d/n); validated over 20 seeds before
        # freezing (all passed, max observed error 0.098).
        spec, data, beta_star = self._instance(31)
        config = EmConfig(eta=0.5, T=math.inf, N0=9, regime="low_dim")
        beta0 = beta_star + 0.1 * NoiseOracle(32).standard_normal(spec.d)
        traj = run_low_dim(spec, data, config, beta0, NoiseOracle(0, "silent"), true_beta=beta_star)
        assert traj.final_error <= 3 * math.sqrt(spec.d / len(data))

    def test_deterministic(self):
        spec, data, beta_star = self._instance(33, n=600)
        config = EmConfig(eta=0.5, T=2.0, N0=5, budget=BUDGET, regime="low_dim")
        t1 = run_low_dim(spec, data, config, beta_star, NoiseOracle(3))
        t2 = run_low_dim(spec, data, config, beta_star, NoiseOracle(3))
        np.testing.assert_array_equal(t1.betas, t2.betas)

    def test_requires_budget_for_finite_T(self):
        spec, data, beta_star = self._instance(34, n=200)
        config = EmConfig(eta=0.5, T=2.0, N0=5, regime="low_dim")
        with pytest.raises(ValueError):
            run_low_dim(spec, data, config, beta_star, NoiseOracle(0))

    def test_inf_T_requires_silent(self):
        spec, data, beta_star = self._instance(34, n=200)
        config = EmConfig(eta=0.5, T=math.inf, N0=5, budget=BUDGET, regime="low_dim")
        with pytest.raises(ValueError):
            run_low_dim(spec, data, config, beta_star, NoiseOracle(0))

    def test_regime_guard(self):
        spec, data, beta_star = self._instance(35, n=200)
        config = EmConfig(eta=0.5, T=2.0, N0=5, s_hat=2, budget=BUDGET, regime="high_dim")
        with pytest.raises(ValueError):
            run_low_dim(spec, data, config, beta_star, NoiseOracle(0))

    def test_trajectory_shape_and_errors(self):
        spec, data, beta_star = self._instance(36, n=400)
        config = EmConfig(eta=0.5, T=2.0, N0=5, budget=BUDGET, regime="low_dim")
        traj = run_low_dim(spec, data, config, beta_star, NoiseOracle(4), true_beta=beta_star)
        assert traj.betas.shape == (6, spec.d)
        assert traj.errors.shape == (6,)
        assert np.all(traj.errors_signfree <= traj.errors + 1e-15)
