"""Two-state chain: closed-form Bayes estimators and a Jeffreys target.

A reference model used to cross-check the machinery on a case where
posterior means have closed forms.  States are 0 and 1, with

    P(0 -> 1) = p,   P(1 -> 0) = q,

likelihood ``(1-p)^n00 p^n01 q^n10 (1-q)^n11`` given the transition
counts, and invariant initial law ``(q/(p+q), p/(p+q))``.  Under a
uniform prior on (p, q) and under independent beta(1/2, 1/2) priors the
posterior means are

    uniform:  p = (n01 + 1) / (n01 + n00 + 2)
    beta:     p = (n01 + 1/2) / (n01 + n00 + 1)

(and symmetrically for q), while the MLE is ``p = n01 / (n00 + n01)``.
The Jeffreys prior has no closed-form posterior mean; it is built from
the expected Fisher information of a stationary chain and sampled by
MCMC, exactly as in the four-state model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryTheta, ConstraintViolation, DegenerateCounts

__all__ = [
    "TwoStateCounts",
    "TwoStateEstimates",
    "two_state_estimators",
    "two_state_log_likelihood",
    "two_state_jeffreys_log_prior",
    "make_two_state_log_posterior",
    "simulate_two_state_chain",
    "count_two_state",
]


@dataclass(frozen=True)
class TwoStateCounts:
    """Transition counts ``nij`` = number of observed i -> j steps."""

    n00: int
    n01: int
    n10: int
    n11: int

    def __post_init__(self):
        for name in ("n00", "n01", "n10", "n11"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ConstraintViolation(f"{name} must be a nonnegative integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    @property
    def total(self) -> int:
        return self.n00 + self.n01 + self.n10 + self.n11


@dataclass(frozen=True)
class TwoStateEstimates:
    """Closed-form estimates of (p, q) under three priors and the MLE."""

    p_mle: float
    q_mle: float
    p_uniform: float
    q_uniform: float
    p_beta: float
    q_beta: float


def two_state_estimators(counts: TwoStateCounts) -> TwoStateEstimates:
    """All closed-form estimators for the supplied counts.

    Raises :class:`DegenerateCounts` when an MLE denominator is zero (the
    Bayes estimators never degenerate).
    """
    c = counts
    d0 = c.n00 + c.n01
    d1 = c.n10 + c.n11
    missing = [name for name, d in (("p", d0), ("q", d1)) if d == 0]
    if missing:
        raise DegenerateCounts(
            f"no transitions observed out of state(s) {missing}; MLE undefined",
            unidentifiable=tuple(f"{m}_mle" for m in missing),
        )
    return TwoStateEstimates(
        p_mle=c.n01 / d0,
        q_mle=c.n10 / d1,
        p_uniform=(c.n01 + 1) / (c.n01 + c.n00 + 2),
        q_uniform=(c.n10 + 1) / (c.n10 + c.n11 + 2),
        p_beta=(c.n01 + 0.5) / (c.n01 + c.n00 + 1),
        q_beta=(c.n10 + 0.5) / (c.n10 + c.n11 + 1),
    )


def two_state_log_likelihood(p: float, q: float, counts: TwoStateCounts) -> float:
    """Log likelihood of the counts; ``-inf`` if a positive count has zero probability."""
    total = 0.0
    for cnt, prob in ((counts.n00, 1.0 - p), (counts.n01, p),
                      (counts.n10, q), (counts.n11, 1.0 - q)):
        if cnt == 0:
            continue
        if prob <= 0.0:
            return -math.inf
        total += cnt * math.log(prob)
    return total


def two_state_jeffreys_log_prior(p: float, q: float, n_steps: int) -> float:
    """Log Jeffreys prior for a stationary two-state chain of ``n_steps`` transitions.

    With stationary initial law the expected counts give a diagonal Fisher
    information with entries ``a_p = n_steps * mu0 / (p (1-p))`` and
    ``a_q = n_steps * mu1 / (q (1-q))``, so the prior is
    ``sqrt(a_p * a_q)``.  Raises :class:`BoundaryTheta` outside (0, 1)^2.
    """
    if n_steps < 1:
        raise ConstraintViolation("n_steps must be at least 1")
    if not (0.0 < p < 1.0 and 0.0 < q < 1.0):
        raise BoundaryTheta(f"(p, q)=({p!r}, {q!r}) not strictly inside (0, 1)^2")
    mu0 = q / (p + q)
    mu1 = p / (p + q)
    a_p = n_steps * mu0 / (p * (1.0 - p))
    a_q = n_steps * mu1 / (q * (1.0 - q))
    return 0.5 * (math.log(a_p) + math.log(a_q))


def make_two_state_log_posterior(counts: TwoStateCounts, n_steps: int):
    """Fast ``(p, q) -> log posterior`` closure for the sampler (Jeffreys prior)."""
    n00, n01, n10, n11 = counts.n00, counts.n01, counts.n10, counts.n11
    steps = float(n_steps)
    log = math.log
    neg_inf = -math.inf

    def target(theta):
        p, q = float(theta[0]), float(theta[1])
        if not (0.0 < p < 1.0 and 0.0 < q < 1.0):
            return neg_inf
        total = 0.0
        if n00:
            total += n00 * log(1.0 - p)
        if n01:
            total += n01 * log(p)
        if n10:
            total += n10 * log(q)
        if n11:
            total += n11 * log(1.0 - q)
        mu0 = q / (p + q)
        mu1 = p / (p + q)
        total += 0.5 * (log(steps * mu0 / (p * (1.0 - p)))
                        + log(steps * mu1 / (q * (1.0 - q))))
        return total

    return target


def simulate_two_state_chain(p: float, q: float, n_steps: int, seed) -> np.ndarray:
    """Simulate ``n_steps`` transitions with the stationary initial law.

    Returns the visited states as an int array of length ``n_steps + 1``.
    """
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise ConstraintViolation("p and q must lie in [0, 1]")
    if p + q == 0.0:
        raise ConstraintViolation("p + q must be positive for a stationary law")
    if n_steps < 1:
        raise ConstraintViolation("n_steps must be at least 1")
    rng = np.random.default_rng(seed)
    mu1 = p / (p + q)
    states = np.empty(n_steps + 1, dtype=np.int8)
    states[0] = 1 if rng.random() < mu1 else 0
    u = rng.random(n_steps)
    for k in range(n_steps):
        if states[k] == 0:
            states[k + 1] = 1 if u[k] < p else 0
        else:
            states[k + 1] = 0 if u[k] < q else 1
    return states


def count_two_state(states) -> TwoStateCounts:
    """Tally transition counts from a trajectory of 0/1 states."""
    states = np.asarray(states)
    if states.ndim != 1 or states.size < 2:
        raise ConstraintViolation("trajectory must be 1-d with at least two states")
    if not np.all((states == 0) | (states == 1)):
        raise ConstraintViolation("trajectory entries must be 0 or 1")
    a, b = states[:-1], states[1:]
    return TwoStateCounts(
        n00=int(np.sum((a == 0) & (b == 0))),
        n01=int(np.sum((a == 0) & (b == 1))),
        n10=int(np.sum((a == 1) & (b == 0))),
        n11=int(np.sum((a == 1) & (b == 1))),
    )
