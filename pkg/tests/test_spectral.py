"""Eigensolver wrapper, radius Monte Carlo and circular-law distance."""

import math

import numpy as np
import pytest

from recspec.ensemble import EnsembleKind, EnsembleSpec, ScalarField, rescale_factor, rho_n, sample
from recspec.spectral import (
    circular_law_distance,
    classify_real,
    eigenvalues,
    expected_radius_asymptotic,
    prob_radius_below,
    radius_statistics,
)

C, R = ScalarField.COMPLEX, ScalarField.REAL


def haar_unitary(n, rng):
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def match_greedy(got, want):
    """Max distance after optimal one-to-one matching of two spectra."""
    from scipy.optimize import linear_sum_assignment

    cost = np.abs(got[:, None] - want[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


class TestEigenvalues:
    def test_identity(self):
        res = eigenvalues(np.eye(5))
        assert np.allclose(res.eigenvalues, 1.0)
        assert res.radius == pytest.approx(1.0, abs=1e-14)

    def test_diagonal(self):
        res = eigenvalues(np.diag([0.5, -2.0, 3.0j]).astype(complex))
        assert res.radius == pytest.approx(3.0, abs=1e-14)
        assert res.eigenvalues[0] == pytest.approx(3.0j, abs=1e-14)

    def test_unitary_conjugated_known_spectrum(self):
        rng = np.random.default_rng(99)
        n = 50
        d = rng.uniform(0.2, 2.0, n) * np.exp(2j * np.pi * rng.uniform(size=n))
        u = haar_unitary(n, rng)
        res = eigenvalues(u @ np.diag(d) @ u.conj().T)
        assert match_greedy(res.eigenvalues, d) <= 1e-8 * (1.0 + np.abs(d).max())

    def test_sorted_by_modulus(self):
        res = eigenvalues(sample(EnsembleSpec(EnsembleKind.GLOROT, C, 80, seed=3)))
        mods = np.abs(res.eigenvalues)
        assert np.all(np.diff(mods) <= 1e-14)
        assert res.radius == mods[0]

    def test_residual_small(self):
        res = eigenvalues(sample(EnsembleSpec(EnsembleKind.GLOROT, C, 120, seed=4)))
        assert res.residual_max <= 1e-10

    def test_real_input_conjugate_pairs(self):
        m = sample(EnsembleSpec(EnsembleKind.GLOROT, R, 100, seed=5))
        eig = eigenvalues(m).eigenvalues
        nonreal = eig[np.abs(eig.imag) > 1e-7 * (1 + np.abs(eig))]
        # multiset closed under conjugation
        assert match_greedy(nonreal, nonreal.conj()) <= 1e-10

    def test_scaling_equivariance(self):
        n, seed = 200, 6
        g = sample(EnsembleSpec(EnsembleKind.GLOROT, C, n, seed=seed))
        s = rescale_factor(n, C)
        eg = eigenvalues(g).eigenvalues
        er = eigenvalues(g.entries / s).eigenvalues
        assert match_greedy(er, eg / s) <= 1e-8

    def test_rescaled_radius_is_scaled(self):
        n, seed = 200, 7
        g = sample(EnsembleSpec(EnsembleKind.GLOROT, C, n, seed=seed))
        r = sample(EnsembleSpec(EnsembleKind.RESCALED, C, n, seed=seed))
        s = rescale_factor(n, C)
        assert eigenvalues(r).radius == pytest.approx(eigenvalues(g).radius / s, rel=1e-10)

    def test_similarity_invariance(self):
        rng = np.random.default_rng(44)
        n = 80
        w = sample(EnsembleSpec(EnsembleKind.GLOROT, C, n, seed=8)).entries
        u = haar_unitary(n, rng)
        assert match_greedy(eigenvalues(u @ w @ u.conj().T).eigenvalues, eigenvalues(w).eigenvalues) <= 1e-7


class TestClassifyReal:
    def test_real_diagonal(self):
        res = eigenvalues(np.diag(np.arange(1.0, 7.0)))
        n_real, n_complex = classify_real(res)
        assert (n_real, n_complex) == (6, 0)

    def test_rotation_matrix(self):
        rot = np.array([[0.0, -1.0], [1.0, 0.0]])
        n_real, n_complex = classify_real(eigenvalues(rot))
        assert (n_real, n_complex) == (0, 2)

    def test_counts_sum(self):
        res = eigenvalues(sample(EnsembleSpec(EnsembleKind.GLOROT, R, 90, seed=9)))
        n_real, n_complex = classify_real(res)
        assert n_real + n_complex == 90
        assert res.n_real == n_real

    def test_mean_real_count_scaling(self):
        # E[#real] ~= sqrt(2n/pi) + 1/2 with a -3/(8n) correction; +-10% band
        n, trials = 100, 60
        spec = EnsembleSpec(EnsembleKind.GLOROT, R, n, seed=10)
        total = 0
        for t in range(trials):
            total += eigenvalues(sample(spec.with_seed(1000 + t))).n_real
        mean = total / trials
        assert mean == pytest.approx(math.sqrt(2 * n / math.pi), rel=0.10)


class TestRadiusStatistics:
    def test_deterministic_and_thread_independent(self):
        spec = EnsembleSpec(EnsembleKind.GLOROT, C, 120, seed=21)
        a = radius_statistics(spec, trials=8, threads=1)
        b = radius_statistics(spec, trials=8, threads=4)
        assert [s.radius for s in a.samples] == [s.radius for s in b.samples]
        assert a.mean == b.mean and a.std == b.std and a.frac_inside == b.frac_inside

    def test_frac_inside_consistency(self):
        spec = EnsembleSpec(EnsembleKind.DIAG_UNIFORM_DISK, C, 64, seed=22)
        summ = radius_statistics(spec, trials=12)
        frac = np.mean([s.radius < 1.0 for s in summ.samples])
        assert summ.frac_inside == pytest.approx(frac, abs=1e-15)
        assert all(s.inside_unit == (s.radius < 1.0) for s in summ.samples)
        assert summ.failures == []

    def test_single_trial(self):
        spec = EnsembleSpec(EnsembleKind.GLOROT, R, 100, seed=23)
        summ = radius_statistics(spec, trials=1)
        assert summ.trials == 1 and summ.std == 0.0

    def test_rescaled_more_stable_paired(self):
        # paired seeds: every rescaled radius is its Glorot partner divided by
        # s > 1, so the inside-unit fraction can only improve
        n, trials = 220, 30
        g = radius_statistics(EnsembleSpec(EnsembleKind.GLOROT, R, n, seed=24), trials)
        r = radius_statistics(EnsembleSpec(EnsembleKind.RESCALED, R, n, seed=24), trials)
        assert r.frac_inside >= g.frac_inside
        assert r.mean < g.mean


class TestRadiusAsymptotics:
    def test_expected_radius_values(self):
        # frozen from direct evaluation of 1 + sqrt(rho/4n) + (gamma - d ln2)/sqrt(4 rho n)
        assert expected_radius_asymptotic(500, C) == pytest.approx(1.0341923339091654, rel=1e-12)
        assert expected_radius_asymptotic(500, R) == pytest.approx(1.0159633009201978, rel=1e-12)

    def test_monotone_to_one(self):
        vals = [expected_radius_asymptotic(n, C) for n in (500, 5000, 50000)]
        assert vals == sorted(vals, reverse=True)
        assert all(v > 1.0 for v in vals)

    def test_small_n_domain(self):
        with pytest.raises(ValueError):
            expected_radius_asymptotic(150, C)

    def test_prob_at_shifted_threshold(self):
        # exactly the Gumbel CDF at zero: e^{-(1 - delta/2)}
        for n in (500, 1000):
            rho = rho_n(n)
            r = 1.0 + math.sqrt(rho / (4.0 * n))
            assert prob_radius_below(n, C, r) == pytest.approx(math.exp(-1.0), rel=1e-12)
            assert prob_radius_below(n, R, r) == pytest.approx(math.exp(-0.5), rel=1e-12)

    def test_prob_limits(self):
        assert prob_radius_below(500, C, 10.0) == pytest.approx(1.0, abs=1e-12)
        assert prob_radius_below(500, C, 1.0) < prob_radius_below(500, C, 1.05)


class TestCircularLaw:
    def test_uniform_disk_synthetic(self):
        # DKW bound at n=5000 makes KS > 0.03 astronomically unlikely
        m = sample(EnsembleSpec(EnsembleKind.DIAG_UNIFORM_DISK, C, 5000, seed=31))
        ks = circular_law_distance(np.diagonal(m.entries))
        assert ks <= 0.03

    def test_point_mass_at_one(self):
        assert circular_law_distance(np.ones(100)) == pytest.approx(1.0, abs=1e-15)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            circular_law_distance(np.array([]))

    def test_glorot_moderate_width(self):
        eig = eigenvalues(sample(EnsembleSpec(EnsembleKind.GLOROT, C, 500, seed=32))).eigenvalues
        assert circular_law_distance(eig) <= 0.08

    def test_pooling_tightens(self):
        spec = EnsembleSpec(EnsembleKind.GLOROT, C, 200, seed=33)
        pooled = np.concatenate(
            [eigenvalues(sample(spec.with_seed(40 + t))).eigenvalues for t in range(8)]
        )
        assert circular_law_distance(pooled) <= 0.08
