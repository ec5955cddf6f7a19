"""Geometric holding-time fit and parametric bootstrap test."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import markov_panel as mp

# pmf-variant distances on the bundled panel's completed spells, frozen
# at full precision (published values: 3.051, 1.086, 1.104)
KSTAR_FROZEN = {
    "F": 3.051060442581782,
    "C": 1.0859091360504443,
    "J": 1.1043890148502702,
}
P_HAT_FROZEN = {"F": 43 / 553, "C": 61 / 249, "J": 43 / 151}

durations_lists = st.lists(st.integers(1, 20), min_size=1, max_size=30)


class TestGeometricMle:
    def test_symmetric_sample(self):
        assert mp.geometric_mle([1, 1, 1]) == 0.5

    @pytest.mark.parametrize("state", ["F", "C", "J"])
    def test_bundled_spells(self, landuse_panel, state):
        durations = mp.extract_spells(landuse_panel, state).durations
        assert mp.geometric_mle(durations) == pytest.approx(P_HAT_FROZEN[state], abs=1e-15)

    def test_empty_sample(self):
        with pytest.raises(mp.EmptySample):
            mp.geometric_mle([])

    def test_rejects_nonpositive_and_fractional(self):
        with pytest.raises(mp.ConstraintViolation):
            mp.geometric_mle([1, 0, 2])
        with pytest.raises(mp.ConstraintViolation):
            mp.geometric_mle([1.5])

    def test_accepts_integral_floats(self):
        assert mp.geometric_mle([2.0, 2.0]) == pytest.approx(1 / 3)

    @given(durations_lists)
    def test_always_in_unit_interval(self, durations):
        assert 0.0 < mp.geometric_mle(durations) <= 0.5


class TestFittedLaw:
    def test_pmf_values(self):
        assert mp.fitted_pmf(0.4, 1) == pytest.approx(0.6 * 0.4)
        assert mp.fitted_pmf(0.4, 2) == pytest.approx(0.36 * 0.4)

    def test_pmf_vectorized(self):
        out = mp.fitted_pmf(0.4, np.array([1, 2, 3]))
        assert np.allclose(out, [0.24, 0.144, 0.0864])

    def test_cdf_is_partial_sum_of_pmf(self):
        n = np.arange(1, 40)
        partial = np.cumsum(mp.fitted_pmf(0.3, n))
        assert np.allclose(mp.fitted_cdf(0.3, n), partial, atol=1e-15)

    def test_cdf_at_zero(self):
        assert mp.fitted_cdf(0.3, 0) == 0.0

    def test_total_mass_is_one_minus_p(self):
        # the family as written is sub-normalized: its mass on n >= 1
        # is 1 - p, not 1
        assert mp.fitted_cdf(0.3, 10_000) == pytest.approx(0.7, abs=1e-15)

    def test_parameter_validation(self):
        with pytest.raises(mp.ConstraintViolation):
            mp.fitted_pmf(1.2, 1)
        with pytest.raises(mp.ConstraintViolation):
            mp.fitted_pmf(0.3, 0)
        with pytest.raises(mp.ConstraintViolation):
            mp.fitted_cdf(-0.1, 1)
        with pytest.raises(mp.ConstraintViolation):
            mp.fitted_cdf(0.3, -1)


class TestDistanceStatistic:
    def test_hand_case_point_mass(self):
        # two spells of length 1: p = 1/2, empirical pmf puts 1 at n=1,
        # fitted pmf puts 1/4 there
        assert mp.distance_statistic([1, 1], 0.5, "pmf") == pytest.approx(
            math.sqrt(2) * 0.75, rel=1e-15
        )
        assert mp.distance_statistic([1, 1], 0.5, "cdf") == pytest.approx(
            math.sqrt(2) * 0.75, rel=1e-15
        )

    def test_hand_case_two_values(self):
        # durations {1, 2} at p = 0.4: the pmf gap peaks at n=2, the cdf
        # gap at n=2 where fitted mass tops out at 0.384
        assert mp.distance_statistic([1, 2], 0.4, "pmf") == pytest.approx(
            math.sqrt(2) * (0.5 - 0.144), rel=1e-12
        )
        assert mp.distance_statistic([1, 2], 0.4, "cdf") == pytest.approx(
            math.sqrt(2) * (1.0 - 0.384), rel=1e-12
        )

    @pytest.mark.parametrize("state", ["F", "C", "J"])
    def test_bundled_spells_frozen_values(self, landuse_panel, state):
        durations = mp.extract_spells(landuse_panel, state).durations
        k_star = mp.distance_statistic(durations, mp.geometric_mle(durations), "pmf")
        assert k_star == pytest.approx(KSTAR_FROZEN[state], rel=1e-12)

    def test_unknown_variant(self):
        with pytest.raises(mp.ConstraintViolation):
            mp.distance_statistic([1, 2], 0.4, "sup")

    @given(durations_lists, st.floats(0.01, 0.99))
    @settings(max_examples=50)
    def test_nonnegative_and_bounded(self, durations, p):
        k = len(durations)
        for variant in ("pmf", "cdf"):
            value = mp.distance_statistic(durations, p, variant)
            assert 0.0 <= value <= math.sqrt(k) * 1.0 + 1e-12


@pytest.fixture(scope="module")
def c_result(landuse_panel):
    durations = mp.extract_spells(landuse_panel, "C").durations
    return mp.parametric_bootstrap(durations, m_reps=200, seed=3)


class TestParametricBootstrap:
    def test_fields_are_internally_consistent(self, landuse_panel, c_result):
        durations = mp.extract_spells(landuse_panel, "C").durations
        assert c_result.k == 61
        assert c_result.p_hat == pytest.approx(61 / 249, abs=1e-15)
        assert c_result.k_star == pytest.approx(
            mp.distance_statistic(durations, c_result.p_hat, "pmf"), rel=1e-15
        )
        assert c_result.k_boot.shape == (200,)
        assert c_result.p_value == float(np.mean(c_result.k_boot >= c_result.k_star))
        assert c_result.m_reps == 200 and c_result.alpha == 0.05
        assert c_result.variant == "pmf" and c_result.state is None

    def test_decision_rule_is_inclusive(self, landuse_panel, c_result):
        # rerunning with alpha set to the realized p-value must reject
        # (the rule is p <= alpha), while a smaller alpha retains
        durations = mp.extract_spells(landuse_panel, "C").durations
        rho = c_result.p_value
        assert 0.0 < rho < 1.0
        at_alpha = mp.parametric_bootstrap(durations, m_reps=200, alpha=rho, seed=3)
        below = mp.parametric_bootstrap(durations, m_reps=200, alpha=rho / 2, seed=3)
        assert at_alpha.p_value == rho == below.p_value
        assert at_alpha.decision == "reject"
        assert below.decision == "retain"

    def test_deterministic_and_seed_sensitive(self, landuse_panel):
        durations = mp.extract_spells(landuse_panel, "C").durations
        a = mp.parametric_bootstrap(durations, m_reps=50, seed=9)
        b = mp.parametric_bootstrap(durations, m_reps=50, seed=9)
        c = mp.parametric_bootstrap(durations, m_reps=50, seed=10)
        assert np.array_equal(a.k_boot, b.k_boot)
        assert not np.array_equal(a.k_boot, c.k_boot)

    def test_seed_sequence_passthrough(self, landuse_panel):
        durations = mp.extract_spells(landuse_panel, "C").durations
        a = mp.parametric_bootstrap(durations, m_reps=50, seed=3)
        b = mp.parametric_bootstrap(durations, m_reps=50,
                                    seed=np.random.SeedSequence(3))
        assert np.array_equal(a.k_boot, b.k_boot)

    def test_state_label_stored(self, landuse_panel):
        durations = mp.extract_spells(landuse_panel, "J").durations
        result = mp.parametric_bootstrap(durations, m_reps=10, seed=0, state="J")
        assert result.state is mp.State.J

    def test_replicates_refit_the_parameter(self, landuse_panel):
        # recompute the replicate statistics WITHOUT refitting: the null
        # distribution shifts measurably, proving the library refits
        durations = mp.extract_spells(landuse_panel, "C").durations
        result = mp.parametric_bootstrap(durations, m_reps=400, seed=17)
        frozen = np.empty(400)
        for m, ss in enumerate(np.random.SeedSequence(17).spawn(400)):
            resample = np.random.default_rng(ss).geometric(result.p_hat, size=result.k)
            frozen[m] = mp.distance_statistic(resample, result.p_hat, "pmf")
        assert not np.array_equal(frozen, result.k_boot)
        assert result.k_boot.mean() == pytest.approx(0.8988017269048787, rel=1e-12)
        assert result.k_boot.mean() > frozen.mean() + 0.05

    def test_cdf_variant_runs(self, landuse_panel):
        durations = mp.extract_spells(landuse_panel, "C").durations
        result = mp.parametric_bootstrap(durations, m_reps=50, variant="cdf", seed=1)
        assert result.variant == "cdf"
        assert result.k_star == pytest.approx(
            mp.distance_statistic(durations, result.p_hat, "cdf"), rel=1e-15
        )

    def test_single_replicate(self):
        result = mp.parametric_bootstrap([1, 2, 3, 1, 2], m_reps=1, seed=0)
        assert result.p_value in (0.0, 1.0)

    def test_argument_validation(self):
        with pytest.raises(mp.ConstraintViolation):
            mp.parametric_bootstrap([1, 2], m_reps=0)
        with pytest.raises(mp.ConstraintViolation):
            mp.parametric_bootstrap([1, 2], alpha=0.0)
        with pytest.raises(mp.ConstraintViolation):
            mp.parametric_bootstrap([1, 2], alpha=1.0)
        with pytest.raises(mp.EmptySample):
            mp.parametric_bootstrap([])


def test_null_rejection_rate_characterization():
    # Characterization, not calibration: data drawn from the geometric
    # null are rejected at well above the nominal alpha = 0.05 (about
    # 0.14 here), because the fitted parameter k/(k + sum) does not
    # converge, under resampling from the renormalized law, to the value
    # that reproduces that law within the sub-normalized family.  The
    # mismatch scales like sqrt(k), so the rate grows with sample size.
    p_star = 61 / 249
    rejects = 0
    for ss in np.random.SeedSequence(2024).spawn(400):
        data_ss, boot_ss = ss.spawn(2)
        data = np.random.default_rng(data_ss).geometric(p_star, size=61)
        result = mp.parametric_bootstrap(data, m_reps=300, alpha=0.05, seed=boot_ss)
        rejects += result.decision == "reject"
    rate = rejects / 400
    assert 0.09 < rate < 0.25
