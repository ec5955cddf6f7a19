"""Random-walk Metropolis sampler.

The sampler is dimension-generic: the target is any callable returning a
log density (up to a constant), and the proposal adds independent
Gaussian noise to every coordinate.  The chain keeps a running mean over
*all* visited states (including burn-in) updated at every iteration, and
separately stores the post-burn-in states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintViolation, EmptyTrace, NonFiniteStart

__all__ = ["McmcConfig", "McmcTrace", "metropolis_hastings", "bayes_estimate"]


@dataclass(frozen=True)
class McmcConfig:
    """Settings for one sampler run.

    ``burn_in=None`` resolves to 10% of ``n_iterations`` (rounded down).
    The chain visits exactly ``n_iterations`` states; the first is
    ``theta_init`` and each later one comes from a proposal step.
    """

    n_iterations: int
    proposal_sigma: float = 0.01
    burn_in: int | None = None
    seed: object = 0
    theta_init: object = None

    def __post_init__(self):
        if self.n_iterations < 1:
            raise ConstraintViolation("n_iterations must be at least 1")
        if not self.proposal_sigma > 0.0:
            raise ConstraintViolation("proposal_sigma must be positive")
        burn = self.burn_in
        if burn is None:
            burn = self.n_iterations // 10
        if not 0 <= burn < self.n_iterations:
            raise ConstraintViolation(
                f"burn_in must lie in [0, n_iterations), got {burn}"
            )
        object.__setattr__(self, "burn_in", int(burn))
        if self.theta_init is not None:
            init = np.asarray(self.theta_init, dtype=float)
            if init.ndim != 1 or init.size < 1 or not np.all(np.isfinite(init)):
                raise ConstraintViolation("theta_init must be a finite 1-d vector")
            init = init.copy()
            init.flags.writeable = False
            object.__setattr__(self, "theta_init", init)


@dataclass(frozen=True)
class McmcTrace:
    """Output of one sampler run.

    ``samples`` holds the states visited after burn-in, one row per
    iteration.  ``running_mean`` is the mean over all ``n_iterations``
    visited states, burn-in included.
    """

    samples: np.ndarray
    acceptance_rate: float
    running_mean: np.ndarray
    config: McmcConfig = field(repr=False, default=None)

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)


def metropolis_hastings(log_target, config: McmcConfig) -> McmcTrace:
    """Run a Gaussian random-walk Metropolis chain.

    Parameters
    ----------
    log_target : callable
        Maps a parameter vector to the log of an unnormalized density;
        ``-inf`` marks points outside the support.  Proposals with a
        ``-inf`` target are always rejected, and the acceptance ratio is
        formed in log space, so the target never needs to be exponentiated.
    config : McmcConfig
        Must carry a ``theta_init`` where the target is finite.

    Returns
    -------
    McmcTrace

    Raises
    ------
    NonFiniteStart
        If the target is not finite at ``theta_init``.

    Notes
    -----
    The run is fully determined by ``config``: the same seed gives a
    bit-identical trace.
    """
    if config.theta_init is None:
        raise ConstraintViolation("config.theta_init is required")
    theta = np.array(config.theta_init, dtype=float)
    lp = float(log_target(theta))
    if not math.isfinite(lp):
        raise NonFiniteStart(f"log target at theta_init is {lp!r}")

    n_iter = config.n_iterations
    burn = config.burn_in
    d = theta.size
    rng = np.random.default_rng(config.seed)
    # all randomness drawn up front so the stream layout is fixed
    eps = rng.standard_normal((n_iter - 1, d)) * config.proposal_sigma
    us = rng.random(n_iter - 1)

    samples = np.empty((n_iter - burn, d))
    mean = theta.copy()
    n_accepted = 0
    if burn == 0:
        samples[0] = theta
    for k in range(1, n_iter):
        prop = theta + eps[k - 1]
        lpp = float(log_target(prop))
        if lpp >= lp:
            accept = True
        elif lpp == -math.inf or math.isnan(lpp):
            accept = False
        else:
            accept = us[k - 1] <= math.exp(lpp - lp)
        if accept:
            theta = prop
            lp = lpp
            n_accepted += 1
        mean += (theta - mean) / (k + 1)
        if k >= burn:
            samples[k - burn] = theta

    rate = n_accepted / (n_iter - 1) if n_iter > 1 else 0.0
    return McmcTrace(samples=samples, acceptance_rate=rate, running_mean=mean, config=config)


def bayes_estimate(trace: McmcTrace) -> np.ndarray:
    """Posterior-mean estimate: the average of the post-burn-in samples."""
    if trace.samples.size == 0:
        raise EmptyTrace("trace holds no post-burn-in samples")
    return trace.samples.mean(axis=0)
