"""Closed-form maximum likelihood for the four-state chain.

The pooled transition counts are a sufficient statistic.  With
``n[e, e']`` the counts in F, C, J, B order, the log likelihood is

    n_FF log(1-t1-t2) + n_FC log t1 + n_FJ log t2
  + n_CC log(1-t3-t4) + n_CJ log t3 + n_CB log t4
  + n_JJ log(1-t5)    + n_JC log t5

and the maximizer is elementwise:

    t1 = n_FC / (n_FF + n_FC + n_FJ)     t2 = n_FJ / (n_FF + n_FC + n_FJ)
    t3 = n_CJ / (n_CC + n_CJ + n_CB)     t4 = n_CB / (n_CC + n_CJ + n_CB)
    t5 = n_JC / (n_JC + n_JJ)
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolation, DegenerateCounts
from .model import FORBIDDEN, N_STATES, State, validate_theta

__all__ = ["log_likelihood", "MleResult", "mle"]

F, C, J, B = State.F, State.C, State.J, State.B

# (row, column, probability index) for the eight free cells; probability
# index k < 5 means theta_k+1, and 5, 6, 7 mean the diagonal complements
# 1-t1-t2, 1-t3-t4, 1-t5.
_CELLS = (
    (F, F, 5),
    (F, C, 0),
    (F, J, 1),
    (C, C, 6),
    (C, J, 2),
    (C, B, 3),
    (J, C, 4),
    (J, J, 7),
)


def _check_counts(counts) -> np.ndarray:
    arr = np.asarray(counts)
    if arr.shape != (N_STATES, N_STATES):
        raise ConstraintViolation(f"counts must be 4x4, got shape {arr.shape}")
    if np.any(arr < 0):
        raise ConstraintViolation("counts must be nonnegative")
    bad = [(State(r).name, State(c).name) for r, c in FORBIDDEN if arr[r, c] > 0]
    if bad:
        warnings.warn(
            f"counts in structurally forbidden cells {bad} are excluded from estimation",
            stacklevel=3,
        )
    return arr


def log_likelihood(theta, counts) -> float:
    """Log likelihood of pooled transition counts under ``theta``.

    Returns ``-inf`` when a positive count sits on a zero-probability cell.
    Forbidden cells never contribute.
    """
    t1, t2, t3, t4, t5 = validate_theta(theta)
    n = _check_counts(counts)
    probs = (t1, t2, t3, t4, t5, 1.0 - t1 - t2, 1.0 - t3 - t4, 1.0 - t5)
    total = 0.0
    for r, c, k in _CELLS:
        cnt = int(n[r, c])
        if cnt == 0:
            continue
        p = probs[k]
        if p <= 0.0:
            return -math.inf
        total += cnt * math.log(p)
    return total


@dataclass(frozen=True)
class MleResult:
    """Maximum-likelihood estimate together with the counts it came from."""

    theta: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "theta", validate_theta(self.theta))
        cnt = np.asarray(self.counts).copy()
        cnt.flags.writeable = False
        object.__setattr__(self, "counts", cnt)


def mle(counts) -> MleResult:
    """Closed-form maximum-likelihood estimate from pooled transition counts.

    Parameters
    ----------
    counts : array_like, shape (4, 4)
        Pooled transition counts in F, C, J, B order.

    Returns
    -------
    MleResult

    Raises
    ------
    DegenerateCounts
        If a block denominator is zero.  The exception carries the names of
        the unidentifiable components and the partial estimate (``nan`` in
        the unidentifiable positions).
    """
    n = _check_counts(counts)
    d_f = int(n[F, F] + n[F, C] + n[F, J])
    d_c = int(n[C, C] + n[C, J] + n[C, B])
    d_j = int(n[J, C] + n[J, J])

    theta = np.full(5, np.nan)
    missing = []
    if d_f > 0:
        theta[0] = n[F, C] / d_f
        theta[1] = n[F, J] / d_f
    else:
        missing += ["theta1", "theta2"]
    if d_c > 0:
        theta[2] = n[C, J] / d_c
        theta[3] = n[C, B] / d_c
    else:
        missing += ["theta3", "theta4"]
    if d_j > 0:
        theta[4] = n[J, C] / d_j
    else:
        missing += ["theta5"]

    if missing:
        raise DegenerateCounts(
            f"no transitions observed out of some states; {', '.join(missing)} unidentifiable",
            unidentifiable=missing,
            partial_theta=theta,
        )
    return MleResult(theta=theta, counts=n)
