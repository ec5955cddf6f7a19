"""Closed-form maximum likelihood and the log-likelihood it maximizes."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import markov_panel as mp

# Exact fractions implied by the bundled panel's pooled counts.
LANDUSE_THETA_EXACT = (
    Fraction(42, 510),
    Fraction(1, 510),
    Fraction(58, 239),
    Fraction(3, 239),
    Fraction(43, 133),
)


def counts_from(**cells):
    names = {"ff": (0, 0), "fc": (0, 1), "fj": (0, 2), "cc": (1, 1),
             "cj": (1, 2), "cb": (1, 3), "jc": (2, 1), "jj": (2, 2),
             "bb": (3, 3)}
    n = np.zeros((4, 4), dtype=int)
    for key, value in cells.items():
        n[names[key]] = value
    return n


class TestLogLikelihood:
    def test_certain_transitions_give_zero(self):
        assert mp.log_likelihood((0, 0, 0, 0, 0), counts_from(ff=10)) == 0.0

    def test_single_cell(self):
        ll = mp.log_likelihood((0.5, 0, 0, 0, 0), counts_from(fc=2))
        assert ll == pytest.approx(2 * np.log(0.5), abs=1e-15)

    def test_zero_probability_with_positive_count(self):
        assert mp.log_likelihood((0, 0, 0, 0, 0), counts_from(fc=1)) == -np.inf

    def test_absorbing_cell_never_contributes(self):
        theta = (0.2, 0.1, 0.3, 0.2, 0.4)
        assert mp.log_likelihood(theta, counts_from(bb=50)) == mp.log_likelihood(
            theta, counts_from()
        )

    def test_pooled_likelihood_is_product_of_path_probabilities(self):
        # brute-force oracle: exp(log likelihood of pooled counts) equals
        # the product of per-parcel path probabilities
        panel = mp.parse_panel("F F\nC F\nC J\nB J\n")
        counts = mp.count_transitions(panel)
        theta = (0.3, 0.1, 0.2, 0.25, 0.15)
        q = mp.build_matrix(theta)
        prod = 1.0
        for p in range(panel.n_parcels):
            col = panel.column(p)
            for y in range(panel.n_years - 1):
                prod *= q[col[y], col[y + 1]]
        assert np.exp(mp.log_likelihood(theta, counts)) == pytest.approx(
            prod, rel=1e-12
        )

    def test_rejects_wrong_shape(self):
        with pytest.raises(mp.ConstraintViolation):
            mp.log_likelihood((0.1, 0.1, 0.1, 0.1, 0.1), np.zeros((3, 3)))

    def test_warns_on_forbidden_counts(self):
        n = counts_from(ff=5)
        n[1, 0] = 2  # C -> F cannot happen under the model
        with pytest.warns(UserWarning, match="forbidden"):
            mp.log_likelihood((0.1, 0.1, 0.1, 0.1, 0.1), n)


class TestMle:
    def test_bundled_counts_exact_fractions(self, landuse_mle):
        for got, want in zip(landuse_mle.theta, LANDUSE_THETA_EXACT):
            assert got == pytest.approx(float(want), abs=1e-15)

    def test_bundled_counts_four_decimal_truncation(self, landuse_mle):
        # the conventional 4-decimal tabulation of these estimates
        truncated = tuple(np.floor(v * 10_000) / 10_000 for v in landuse_mle.theta)
        assert truncated == (0.0823, 0.0019, 0.2426, 0.0125, 0.3233)

    def test_degenerate_branch_keeps_partial_estimate(self):
        with pytest.raises(mp.DegenerateCounts) as exc:
            mp.mle(counts_from(ff=90, fc=8, fj=2))
        err = exc.value
        assert err.unidentifiable == ("theta3", "theta4", "theta5")
        assert err.partial_theta[0] == pytest.approx(0.08)
        assert err.partial_theta[1] == pytest.approx(0.02)
        assert np.all(np.isnan(err.partial_theta[2:]))

    def test_local_optimality(self, landuse_counts, landuse_mle):
        # 100 random perturbations inside the parameter set never beat
        # the closed form
        best = mp.log_likelihood(landuse_mle.theta, landuse_counts)
        rng = np.random.default_rng(7)
        tried = 0
        while tried < 100:
            cand = landuse_mle.theta + rng.uniform(-0.05, 0.05, 5)
            if not mp.theta_in_support(cand):
                continue
            tried += 1
            assert mp.log_likelihood(cand, landuse_counts) <= best

    def test_estimate_always_in_parameter_set(self):
        # ratios of parts to whole keep both sum constraints automatically
        rng = np.random.default_rng(12)
        for _ in range(200):
            n = counts_from(
                ff=rng.integers(1, 50), fc=rng.integers(0, 50), fj=rng.integers(0, 50),
                cc=rng.integers(1, 50), cj=rng.integers(0, 50), cb=rng.integers(0, 50),
                jc=rng.integers(1, 50), jj=rng.integers(0, 50),
            )
            mp.validate_theta(mp.mle(n).theta)

    @given(scale=st.integers(1, 1000))
    @settings(max_examples=30)
    def test_count_scaling_invariance(self, landuse_counts, scale):
        scaled = mp.mle(landuse_counts * scale)
        base = mp.mle(landuse_counts)
        assert np.allclose(scaled.theta, base.theta, atol=1e-14)

    def test_consistency_at_large_panel(self):
        theta = np.array([0.2, 0.1, 0.25, 0.15, 0.3])
        panel = mp.simulate_panel(theta, 22, 43_000, seed=20240818)
        fit = mp.mle(mp.count_transitions(panel))
        assert np.max(np.abs(fit.theta - theta)) < 0.01

    def test_result_carries_counts(self, landuse_counts, landuse_mle):
        assert np.array_equal(landuse_mle.counts, landuse_counts)
