"""Geometric holding-time fit and a parametric bootstrap test.

Holding times of a state e are modelled by the geometric-type law

    f_p(n) = (1 - p)^n p,     n = 1, 2, ...

whose fitted parameter maximizes ``prod f_p(S_i)``, giving
``p = k / (k + sum S_i)`` for ``k`` durations.  (Note the family as
written carries total mass ``1 - p`` on n >= 1; it is kept in this form
deliberately, and resampling uses the law renormalized to n >= 1, which
is the standard geometric.)  The test statistic is a scaled
Kolmogorov-Smirnov distance between the sample and the fitted law,
computed on the pmf (default) or the cdf, and its null distribution is
estimated by refitting on parametric resamples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolation, EmptySample
from .model import State

__all__ = [
    "geometric_mle",
    "fitted_pmf",
    "fitted_cdf",
    "distance_statistic",
    "GofResult",
    "parametric_bootstrap",
]

_VARIANTS = ("pmf", "cdf")


def _check_durations(durations) -> np.ndarray:
    arr = np.asarray(durations)
    if arr.size == 0:
        raise EmptySample("duration sample is empty")
    if arr.ndim != 1:
        raise ConstraintViolation(f"durations must be 1-d, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(arr == np.floor(arr)):
            raise ConstraintViolation("durations must be integers")
        arr = arr.astype(np.int64)
    if np.any(arr < 1):
        raise ConstraintViolation("durations must be at least 1")
    return arr.astype(np.int64)


def geometric_mle(durations) -> float:
    """Fitted parameter ``p = k / (k + sum S_i)`` of the holding-time law."""
    arr = _check_durations(durations)
    k = arr.size
    return k / (k + int(arr.sum()))


def fitted_pmf(p: float, n) -> np.ndarray | float:
    """``f_p(n) = (1-p)^n p`` for integer n >= 1 (vectorized over n)."""
    if not 0.0 <= p <= 1.0:
        raise ConstraintViolation(f"p must lie in [0, 1], got {p!r}")
    n_arr = np.asarray(n)
    if np.any(n_arr < 1):
        raise ConstraintViolation("the holding-time law is supported on n >= 1")
    out = (1.0 - p) ** n_arr * p
    return float(out) if np.isscalar(n) else out


def fitted_cdf(p: float, n) -> np.ndarray | float:
    """``F_p(n) = sum_{m=1}^n f_p(m) = (1-p)(1 - (1-p)^n)`` for n >= 0."""
    if not 0.0 <= p <= 1.0:
        raise ConstraintViolation(f"p must lie in [0, 1], got {p!r}")
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise ConstraintViolation("n must be nonnegative")
    out = (1.0 - p) * (1.0 - (1.0 - p) ** n_arr)
    return float(out) if np.isscalar(n) else out


def distance_statistic(durations, p: float, variant: str = "pmf") -> float:
    """Scaled Kolmogorov-Smirnov distance between sample and fitted law.

    ``pmf`` variant: ``sqrt(k) * max_n |f_hat(n) - f_p(n)|`` over
    ``n = 1..max(S)``; ``cdf`` variant: the same with empirical and fitted
    cdfs over ``n = 0..max(S)``.
    """
    if variant not in _VARIANTS:
        raise ConstraintViolation(f"variant must be one of {_VARIANTS}, got {variant!r}")
    arr = _check_durations(durations)
    k = arr.size
    top = int(arr.max())
    counts = np.bincount(arr, minlength=top + 1)[1:]  # counts of n = 1..top
    if variant == "pmf":
        emp = counts / k
        fit = fitted_pmf(p, np.arange(1, top + 1))
        return math.sqrt(k) * float(np.max(np.abs(emp - fit)))
    emp = np.concatenate(([0.0], np.cumsum(counts) / k))
    fit = fitted_cdf(p, np.arange(0, top + 1))
    return math.sqrt(k) * float(np.max(np.abs(emp - fit)))


@dataclass(frozen=True)
class GofResult:
    """Outcome of the parametric bootstrap test for one duration sample."""

    p_hat: float
    k: int
    k_star: float
    k_boot: np.ndarray
    p_value: float
    m_reps: int
    alpha: float
    decision: str
    variant: str
    state: State | None = None

    def __post_init__(self):
        arr = np.asarray(self.k_boot, dtype=float)
        arr.flags.writeable = False
        object.__setattr__(self, "k_boot", arr)


def parametric_bootstrap(durations, m_reps: int = 1000, alpha: float = 0.05,
                         variant: str = "pmf", seed=0, state=None) -> GofResult:
    """Parametric bootstrap p-value for the geometric holding-time fit.

    Each of the ``m_reps`` replicates draws ``k`` durations from the fitted
    law renormalized to n >= 1 (the standard geometric), refits the
    parameter on the resample, and recomputes the distance statistic.  The
    p-value is the fraction of replicate statistics at least as large as
    the observed one; the fit is rejected when it is at most ``alpha``.

    Replicates use independent spawned random streams, so the result does
    not depend on evaluation order.
    """
    if m_reps < 1:
        raise ConstraintViolation("m_reps must be at least 1")
    if not 0.0 < alpha < 1.0:
        raise ConstraintViolation(f"alpha must lie in (0, 1), got {alpha!r}")
    arr = _check_durations(durations)
    k = arr.size
    p_hat = geometric_mle(arr)
    k_star = distance_statistic(arr, p_hat, variant)
    master = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    streams = master.spawn(m_reps)
    k_boot = np.empty(m_reps)
    for m, ss in enumerate(streams):
        rng = np.random.default_rng(ss)
        resample = rng.geometric(p_hat, size=k)
        p_m = geometric_mle(resample)
        k_boot[m] = distance_statistic(resample, p_m, variant)
    p_value = float(np.mean(k_boot >= k_star))
    decision = "reject" if p_value <= alpha else "retain"
    return GofResult(
        p_hat=p_hat,
        k=k,
        k_star=k_star,
        k_boot=k_boot,
        p_value=p_value,
        m_reps=m_reps,
        alpha=alpha,
        decision=decision,
        variant=variant,
        state=None if state is None else State(State.from_symbol(state) if isinstance(state, str) else state),
    )
