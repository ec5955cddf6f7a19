"""Jeffreys prior and posterior for the four-state chain.

The Jeffreys prior is built from the expected Fisher information of the
panel experiment: P parcels observed over N years, all starting in F.
The information matrix is block diagonal in (theta1, theta2),
(theta3, theta4) and theta5, so the prior density factorizes as

    pi(theta)  proportional to  sqrt(det A12 * det A34 * a5)

with, writing E[n_ee'] for the expected pooled transition counts,

    A12 = [[E_FF/(1-t1-t2)^2 + E_FC/t1^2,  E_FF/(1-t1-t2)^2          ],
           [E_FF/(1-t1-t2)^2,              E_FF/(1-t1-t2)^2 + E_FJ/t2^2]]
    A34 = same with the C row counts and (t3, t4)
    a5  = E_JJ/(1-t5)^2 + E_JC/t5^2

and E[n_ee'] = P * Q(e,e') * sum_{m=0}^{N-2} Q^m(F, e).  The density
diverges like an inverse square root at the boundary of the parameter
set, which is still integrable; evaluation exactly on the boundary
raises :class:`BoundaryTheta`.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BoundaryTheta, ConstraintViolation
from .mle import log_likelihood
from .model import INITIAL_LAW, N_STATES, build_matrix, theta_in_support, validate_theta

__all__ = [
    "expected_counts",
    "fisher_block_dets",
    "jeffreys_log_prior",
    "log_posterior",
    "make_log_posterior",
    "clip_to_interior",
]

_PRIORS = ("jeffreys", "uniform")


def _occupancy_sums(t1, t2, t3, t4, t5, n_years):
    """Expected years spent in each state over times 0..N-2, for one parcel."""
    qff = 1.0 - t1 - t2
    qcc = 1.0 - t3 - t4
    qjj = 1.0 - t5
    vf, vc, vj, vb = 1.0, 0.0, 0.0, 0.0
    sf = sc = sj = sb = 0.0
    for _ in range(n_years - 1):
        sf += vf
        sc += vc
        sj += vj
        sb += vb
        vf, vc, vj, vb = (
            vf * qff,
            vf * t1 + vc * qcc + vj * t5,
            vf * t2 + vc * t3 + vj * qjj,
            vb + vc * t4,
        )
    return sf, sc, sj, sb


def expected_counts(theta, n_years: int, n_parcels: int) -> np.ndarray:
    """Expected pooled transition counts ``E[n_ee']`` under ``theta``.

    Parameters
    ----------
    theta : array_like, shape (5,)
    n_years, n_parcels : int
        Panel dimensions; ``n_years >= 2``.

    Returns
    -------
    numpy.ndarray, shape (4, 4)
        ``E[n_ee'] = n_parcels * Q(e, e') * sum_{m=0}^{N-2} Q^m(F, e)``.
    """
    q = build_matrix(theta)
    if n_years < 2:
        raise ConstraintViolation("expected counts need n_years >= 2")
    if n_parcels < 1:
        raise ConstraintViolation("n_parcels must be at least 1")
    law = INITIAL_LAW.copy()
    occupancy = np.zeros(N_STATES)
    for _ in range(n_years - 1):
        occupancy += law
        law = law @ q
    return n_parcels * occupancy[:, None] * q


def fisher_block_dets(theta, expected) -> tuple[float, float, float]:
    """Determinants of the three Fisher-information blocks.

    ``expected`` is a 4x4 matrix of (expected) transition counts; only the
    eight structurally free cells are read.  Returns
    ``(det A12, det A34, a5)``.
    """
    t1, t2, t3, t4, t5 = validate_theta(theta)
    e = np.asarray(expected, dtype=float)
    qff, qcc, qjj = 1.0 - t1 - t2, 1.0 - t3 - t4, 1.0 - t5
    for name, val in (("theta1", t1), ("theta2", t2), ("theta3", t3),
                      ("theta4", t4), ("theta5", t5), ("1-theta1-theta2", qff),
                      ("1-theta3-theta4", qcc), ("1-theta5", qjj)):
        if val == 0.0:
            raise BoundaryTheta(f"{name} vanishes; Jeffreys prior not finite there")
    x = e[0, 0] / qff**2
    a = e[0, 1] / t1**2
    b = e[0, 2] / t2**2
    det12 = x * (a + b) + a * b
    y = e[1, 1] / qcc**2
    c = e[1, 2] / t3**2
    d = e[1, 3] / t4**2
    det34 = y * (c + d) + c * d
    a5 = e[2, 2] / qjj**2 + e[2, 1] / t5**2
    return det12, det34, a5


def jeffreys_log_prior(theta, n_years: int, n_parcels: int) -> float:
    """Log of the (unnormalized) Jeffreys prior density at ``theta``.

    Raises :class:`BoundaryTheta` when ``theta`` sits on the boundary of
    the parameter set, where the density is singular.
    """
    t1, t2, t3, t4, t5 = validate_theta(theta)
    if n_years < 2:
        raise ConstraintViolation("Jeffreys prior needs n_years >= 2")
    out = _jeffreys_core(t1, t2, t3, t4, t5, n_years, n_parcels)
    if out is None:
        raise BoundaryTheta("theta on the boundary; Jeffreys prior not finite there")
    return out


def _jeffreys_core(t1, t2, t3, t4, t5, n_years, n_parcels):
    """Fast scalar path; returns None on the boundary instead of raising.

    Uses E[n_ee'] = P * Q(e,e') * S_e to reduce each block entry:
    E_FC/t1^2 = P*S_F/t1 and so on, so only the occupancy sums are needed.
    """
    qff = 1.0 - t1 - t2
    qcc = 1.0 - t3 - t4
    qjj = 1.0 - t5
    if t1 <= 0.0 or t2 <= 0.0 or t3 <= 0.0 or t4 <= 0.0 or t5 <= 0.0:
        return None
    if qff <= 0.0 or qcc <= 0.0 or qjj <= 0.0:
        return None
    sf, sc, sj, _ = _occupancy_sums(t1, t2, t3, t4, t5, n_years)
    p = float(n_parcels)
    x = p * sf / qff
    a = p * sf / t1
    b = p * sf / t2
    det12 = x * (a + b) + a * b
    y = p * sc / qcc
    c = p * sc / t3
    d = p * sc / t4
    det34 = y * (c + d) + c * d
    a5 = p * sj / qjj + p * sj / t5
    return 0.5 * (math.log(det12) + math.log(det34) + math.log(a5))


def log_posterior(theta, counts, prior: str = "jeffreys",
                  n_years: int | None = None, n_parcels: int | None = None) -> float:
    """Unnormalized log posterior of ``theta`` given pooled counts.

    ``prior`` is ``"jeffreys"`` (needs the panel dimensions) or
    ``"uniform"``.  Points outside the parameter set get ``-inf``; for the
    Jeffreys prior the boundary itself also maps to ``-inf`` so the value
    is always usable inside a sampler.
    """
    if prior not in _PRIORS:
        raise ConstraintViolation(f"prior must be one of {_PRIORS}, got {prior!r}")
    if not theta_in_support(theta):
        return -math.inf
    ll = log_likelihood(theta, counts)
    if prior == "uniform":
        return ll
    if n_years is None or n_parcels is None:
        raise ConstraintViolation("the Jeffreys prior needs n_years and n_parcels")
    t1, t2, t3, t4, t5 = np.asarray(theta, dtype=float)
    lp = _jeffreys_core(t1, t2, t3, t4, t5, n_years, n_parcels)
    if lp is None:
        return -math.inf
    return ll + lp


def make_log_posterior(counts, prior: str = "jeffreys",
                       n_years: int | None = None, n_parcels: int | None = None):
    """Build a fast ``theta -> log posterior`` closure for the sampler.

    Agrees with :func:`log_posterior` everywhere; the counts and panel
    dimensions are captured once so the per-call cost is a few
    microseconds.
    """
    if prior not in _PRIORS:
        raise ConstraintViolation(f"prior must be one of {_PRIORS}, got {prior!r}")
    jeffreys = prior == "jeffreys"
    if jeffreys and (n_years is None or n_parcels is None):
        raise ConstraintViolation("the Jeffreys prior needs n_years and n_parcels")
    n = np.asarray(counts, dtype=float)
    nff, nfc, nfj = n[0, 0], n[0, 1], n[0, 2]
    ncc, ncj, ncb = n[1, 1], n[1, 2], n[1, 3]
    njc, njj = n[2, 1], n[2, 2]
    cells = tuple((cnt, k) for cnt, k in
                  ((nff, 5), (nfc, 0), (nfj, 1), (ncc, 6), (ncj, 2),
                   (ncb, 3), (njc, 4), (njj, 7)) if cnt > 0)
    neg_inf = -math.inf
    log = math.log

    def target(theta):
        t1, t2, t3, t4, t5 = np.asarray(theta, dtype=float).tolist()
        if t1 < 0.0 or t2 < 0.0 or t3 < 0.0 or t4 < 0.0 or t5 < 0.0 or t5 > 1.0:
            return neg_inf
        qff = 1.0 - t1 - t2
        qcc = 1.0 - t3 - t4
        if qff < 0.0 or qcc < 0.0:
            return neg_inf
        probs = (t1, t2, t3, t4, t5, qff, qcc, 1.0 - t5)
        total = 0.0
        for cnt, k in cells:
            pk = probs[k]
            if pk <= 0.0:
                return neg_inf
            total += cnt * log(pk)
        if jeffreys:
            lp = _jeffreys_core(t1, t2, t3, t4, t5, n_years, n_parcels)
            if lp is None:
                return neg_inf
            total += lp
        return total

    return target


def clip_to_interior(theta, margin: float = 1e-4) -> np.ndarray:
    """Push ``theta`` strictly inside the parameter set.

    Components are floored at ``margin`` (and capped at ``1 - margin``),
    then each constrained pair is rescaled if its sum exceeds
    ``1 - margin``.  The default produces the sampler's starting point
    from a maximum-likelihood estimate that may sit on the boundary.
    With ``margin=0`` this is a projection that only repairs violations.
    """
    t = np.clip(np.asarray(theta, dtype=float), margin, 1.0 - margin if margin > 0 else 1.0)
    for i, j in ((0, 1), (2, 3)):
        s = t[i] + t[j]
        if s > 1.0 - margin:
            t[i] *= (1.0 - margin) / s
            t[j] *= (1.0 - margin) / s
    return t
