"""Two-state reference model: closed forms, quadrature oracles, MCMC cross-check."""

import math

import numpy as np
import pytest
from scipy.integrate import dblquad

import markov_panel as mp
from markov_panel.twostate import (
    count_two_state,
    make_two_state_log_posterior,
    simulate_two_state_chain,
    two_state_jeffreys_log_prior,
    two_state_log_likelihood,
)


def quad_posterior_means(counts, prior):
    """Posterior means of (p, q) by 2-d numerical integration."""

    def weight(p, q):
        w = ((1 - p) ** counts.n00 * p**counts.n01
             * q**counts.n10 * (1 - q) ** counts.n11)
        if prior == "beta":
            w *= (p * (1 - p) * q * (1 - q)) ** -0.5
        return w

    den = dblquad(lambda q, p: weight(p, q), 0, 1, 0, 1)[0]
    p_mean = dblquad(lambda q, p: p * weight(p, q), 0, 1, 0, 1)[0] / den
    q_mean = dblquad(lambda q, p: q * weight(p, q), 0, 1, 0, 1)[0] / den
    return p_mean, q_mean


class TestTwoStateCounts:
    def test_total(self):
        assert mp.TwoStateCounts(3, 2, 4, 1).total == 10

    def test_rejects_negative(self):
        with pytest.raises(mp.ConstraintViolation):
            mp.TwoStateCounts(-1, 0, 0, 0)

    def test_rejects_fractional(self):
        with pytest.raises(mp.ConstraintViolation):
            mp.TwoStateCounts(1.5, 0, 0, 0)

    def test_accepts_integral_floats(self):
        assert mp.TwoStateCounts(2.0, 0, 1, 0).n00 == 2


class TestTwoStateEstimators:
    def test_symmetric_counts(self):
        est = mp.two_state_estimators(mp.TwoStateCounts(1, 1, 1, 1))
        assert est.p_mle == est.p_uniform == est.p_beta == 0.5
        assert est.q_mle == est.q_uniform == est.q_beta == 0.5

    def test_zero_numerators(self):
        est = mp.two_state_estimators(mp.TwoStateCounts(3, 0, 1, 1))
        assert est.p_mle == 0.0
        assert est.p_uniform == pytest.approx(1 / 5)
        assert est.p_beta == pytest.approx(0.5 / 4)

    def test_plug_in_formulas(self):
        est = mp.two_state_estimators(mp.TwoStateCounts(30, 10, 12, 28))
        assert est.p_mle == pytest.approx(10 / 40)
        assert est.q_mle == pytest.approx(12 / 40)
        assert est.p_uniform == pytest.approx(11 / 42)
        assert est.q_uniform == pytest.approx(13 / 42)
        assert est.p_beta == pytest.approx(10.5 / 41)
        assert est.q_beta == pytest.approx(12.5 / 41)

    def test_degenerate_p_only(self):
        with pytest.raises(mp.DegenerateCounts) as err:
            mp.two_state_estimators(mp.TwoStateCounts(0, 0, 3, 4))
        assert err.value.unidentifiable == ("p_mle",)

    def test_degenerate_q_only(self):
        with pytest.raises(mp.DegenerateCounts) as err:
            mp.two_state_estimators(mp.TwoStateCounts(2, 1, 0, 0))
        assert err.value.unidentifiable == ("q_mle",)

    def test_degenerate_both(self):
        with pytest.raises(mp.DegenerateCounts) as err:
            mp.two_state_estimators(mp.TwoStateCounts(0, 0, 0, 0))
        assert err.value.unidentifiable == ("p_mle", "q_mle")

    @pytest.mark.parametrize("cells", [(3, 2, 4, 1), (12, 3, 5, 9)])
    @pytest.mark.parametrize("prior", ["uniform", "beta"])
    def test_quadrature_oracle(self, cells, prior):
        # the closed forms are posterior means; recompute them by direct
        # 2-d integration of theta times the unnormalized posterior
        counts = mp.TwoStateCounts(*cells)
        est = mp.two_state_estimators(counts)
        p_mean, q_mean = quad_posterior_means(counts, prior)
        assert getattr(est, f"p_{prior}") == pytest.approx(p_mean, abs=1e-6)
        assert getattr(est, f"q_{prior}") == pytest.approx(q_mean, abs=1e-6)


class TestTwoStateLogLikelihood:
    def test_hand_value(self):
        counts = mp.TwoStateCounts(1, 1, 1, 1)
        expected = math.log(0.7) + math.log(0.3) + math.log(0.4) + math.log(0.6)
        assert two_state_log_likelihood(0.3, 0.4, counts) == pytest.approx(expected)

    def test_zero_probability_with_positive_count(self):
        assert two_state_log_likelihood(0.0, 0.4, mp.TwoStateCounts(1, 1, 1, 1)) == -math.inf
        assert two_state_log_likelihood(1.0, 0.4, mp.TwoStateCounts(1, 1, 1, 1)) == -math.inf

    def test_zero_count_skips_zero_probability(self):
        # n01 = 0 makes p = 0 harmless
        value = two_state_log_likelihood(0.0, 0.5, mp.TwoStateCounts(2, 0, 1, 1))
        assert value == pytest.approx(math.log(0.5) + math.log(0.5))

    def test_maximized_at_mle(self):
        counts = mp.TwoStateCounts(30, 10, 12, 28)
        at_mle = two_state_log_likelihood(0.25, 0.3, counts)
        rng = np.random.default_rng(4)
        for _ in range(50):
            p, q = rng.uniform(0.01, 0.99, size=2)
            assert two_state_log_likelihood(p, q, counts) <= at_mle + 1e-12


class TestTwoStateJeffreysLogPrior:
    def test_boundary_raises(self):
        for p, q in [(0.0, 0.5), (0.5, 1.0), (-0.1, 0.5), (0.5, 1.1)]:
            with pytest.raises(mp.BoundaryTheta):
                two_state_jeffreys_log_prior(p, q, 100)

    def test_rejects_zero_steps(self):
        with pytest.raises(mp.ConstraintViolation):
            two_state_jeffreys_log_prior(0.5, 0.5, 0)

    def test_symmetric_point_value(self):
        # p = q = 1/2: both stationary weights are 1/2, both Fisher
        # entries are n * (1/2) / (1/4) = 2n, so the log prior is log 2n
        assert two_state_jeffreys_log_prior(0.5, 0.5, 100) == pytest.approx(math.log(200))

    def test_swap_symmetry(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            p, q = rng.uniform(0.05, 0.95, size=2)
            assert two_state_jeffreys_log_prior(p, q, 60) == pytest.approx(
                two_state_jeffreys_log_prior(q, p, 60), rel=1e-12
            )

    def test_step_count_shifts_by_log_ratio(self):
        base = two_state_jeffreys_log_prior(0.3, 0.7, 25)
        assert two_state_jeffreys_log_prior(0.3, 0.7, 100) - base == pytest.approx(
            math.log(4.0), rel=1e-12
        )


class TestMakeTwoStateLogPosterior:
    def test_matches_sum_of_parts(self):
        counts = mp.TwoStateCounts(30, 10, 12, 28)
        target = make_two_state_log_posterior(counts, counts.total)
        rng = np.random.default_rng(15)
        for _ in range(30):
            p, q = rng.uniform(0.02, 0.98, size=2)
            expected = (two_state_log_likelihood(p, q, counts)
                        + two_state_jeffreys_log_prior(p, q, counts.total))
            assert target(np.array([p, q])) == pytest.approx(expected, rel=1e-12)

    def test_outside_unit_square_is_minus_inf(self):
        target = make_two_state_log_posterior(mp.TwoStateCounts(3, 2, 4, 1), 10)
        for point in ([0.0, 0.5], [0.5, 1.0], [-0.2, 0.5], [0.5, 1.3]):
            assert target(np.array(point)) == -math.inf


class TestSimulateAndCount:
    def test_counts_cover_all_steps(self):
        states = simulate_two_state_chain(0.3, 0.2, 500, seed=1)
        assert states.shape == (501,)
        assert count_two_state(states).total == 500

    def test_deterministic(self):
        a = simulate_two_state_chain(0.3, 0.2, 200, seed=7)
        b = simulate_two_state_chain(0.3, 0.2, 200, seed=7)
        assert np.array_equal(a, b)

    def test_deterministic_alternation(self):
        # p = q = 1 forces a strict alternation whatever the start
        states = simulate_two_state_chain(1.0, 1.0, 50, seed=3)
        assert np.all(states[1:] != states[:-1])

    def test_transition_frequencies_converge(self):
        counts = count_two_state(simulate_two_state_chain(0.3, 0.2, 200_000, seed=12))
        est = mp.two_state_estimators(counts)
        assert est.p_mle == pytest.approx(0.3, abs=0.01)
        assert est.q_mle == pytest.approx(0.2, abs=0.01)

    def test_parameter_validation(self):
        with pytest.raises(mp.ConstraintViolation):
            simulate_two_state_chain(-0.1, 0.5, 10, seed=0)
        with pytest.raises(mp.ConstraintViolation):
            simulate_two_state_chain(0.0, 0.0, 10, seed=0)
        with pytest.raises(mp.ConstraintViolation):
            simulate_two_state_chain(0.3, 0.2, 0, seed=0)

    def test_count_validation(self):
        with pytest.raises(mp.ConstraintViolation):
            count_two_state([0])
        with pytest.raises(mp.ConstraintViolation):
            count_two_state([0, 2, 1])


def test_uniform_prior_mcmc_matches_closed_form():
    # sampling the likelihood alone (uniform prior) must reproduce the
    # closed-form posterior means
    counts = mp.TwoStateCounts(30, 10, 12, 28)

    def target(theta):
        p, q = float(theta[0]), float(theta[1])
        if not (0.0 < p < 1.0 and 0.0 < q < 1.0):
            return -math.inf
        return two_state_log_likelihood(p, q, counts)

    config = mp.McmcConfig(200_000, proposal_sigma=0.11, seed=21,
                           theta_init=np.array([0.25, 0.3]))
    p_hat, q_hat = mp.bayes_estimate(mp.metropolis_hastings(target, config))
    assert p_hat == pytest.approx(11 / 42, abs=0.01)
    assert q_hat == pytest.approx(13 / 42, abs=0.01)
