"""First-passage laws, expected hitting times, quasi-stationary analysis.

The first-passage probabilities solve the renewal-style recurrence

    f(1) = Q(s, t)
    f(n) = Q^n(s, t) - sum_{k=1}^{n-1} f(k) * Q^{n-k}(t, t)

which needs only the (s, t) and (t, t) entries of the matrix powers.
Expected hitting times instead solve the linear system

    E_e = 1 + sum_{e' != t} Q(e, e') E_{e'}        (E_t = 0)

and the two routes must agree.  The quasi-stationary distribution is the
normalized left eigenvector of the transient block {F, C, J} for its
leading eigenvalue, here obtained in closed form from the block-triangular
structure: the block's eigenvalues are Q(F,F) and the two eigenvalues of
the 2x2 {C, J} corner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConstraintViolation, DegenerateBlock, Unreachable
from .model import State

__all__ = [
    "FirstPassagePmf",
    "first_passage_pmf",
    "hitting_time_mean",
    "median_hitting_time",
    "QuasiStationary",
    "quasi_stationary",
    "quasi_stationary_by_iteration",
]


def _check_stochastic(q) -> np.ndarray:
    arr = np.asarray(q, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 2:
        raise ConstraintViolation(f"matrix must be square (at least 2x2), got {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise ConstraintViolation("matrix entries must be finite and nonnegative")
    if np.any(np.abs(arr.sum(axis=1) - 1.0) > 1e-12):
        raise ConstraintViolation("matrix rows must sum to 1 within 1e-12")
    return arr


def _state_index(s, size: int) -> int:
    idx = int(State.from_symbol(s)) if isinstance(s, str) else int(s)
    if not 0 <= idx < size:
        raise ConstraintViolation(f"state index {idx} outside 0..{size - 1}")
    return idx


@dataclass(frozen=True)
class FirstPassagePmf:
    """First-passage law from ``source`` into ``target`` up to a horizon.

    ``probs[i]`` is ``f(i+1)``, the probability that the first visit to the
    target happens exactly ``i+1`` steps after leaving the source.  When
    ``source == target`` this is the first *return* law.
    """

    source: int
    target: int
    probs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.probs, dtype=float)
        arr.flags.writeable = False
        object.__setattr__(self, "probs", arr)

    @property
    def horizon(self) -> int:
        return self.probs.size

    def prob(self, n: int) -> float:
        """f(n) for 1 <= n <= horizon."""
        if not 1 <= n <= self.horizon:
            raise ConstraintViolation(f"n must lie in 1..{self.horizon}, got {n}")
        return float(self.probs[n - 1])

    def cdf(self) -> np.ndarray:
        """P(first passage <= n) for n = 1..horizon."""
        return np.cumsum(self.probs)

    def mass(self) -> float:
        """Total probability captured by the horizon."""
        return float(self.probs.sum())

    def partial_mean(self) -> float:
        """sum of n*f(n) over the horizon (a lower bound on the mean)."""
        return float(np.arange(1, self.horizon + 1) @ self.probs)


def first_passage_pmf(q, source, target, horizon: int = 5000) -> FirstPassagePmf:
    """First-passage probabilities via the renewal recurrence.

    Parameters
    ----------
    q : array_like, square
        Transition matrix.
    source, target : int or str
        States (symbols accepted for the four-state chain).
    horizon : int
        Largest number of steps to cover.

    Returns
    -------
    FirstPassagePmf
    """
    arr = _check_stochastic(q)
    s = _state_index(source, arr.shape[0])
    t = _state_index(target, arr.shape[0])
    if horizon < 1:
        raise ConstraintViolation("horizon must be at least 1")
    # g[n] = Q^n(s, t), h[n] = Q^n(t, t)
    g = np.empty(horizon + 1)
    h = np.empty(horizon + 1)
    power = np.eye(arr.shape[0])
    for n in range(1, horizon + 1):
        power = power @ arr
        g[n] = power[s, t]
        h[n] = power[t, t]
    f = np.zeros(horizon + 1)
    f[1] = g[1]
    for n in range(2, horizon + 1):
        f[n] = g[n] - f[1:n] @ h[n - 1:0:-1]
    return FirstPassagePmf(source=s, target=t, probs=f[1:])


def hitting_time_mean(q, source, target) -> float:
    """Expected number of steps to first reach ``target`` from ``source``.

    Solves the linear system over the non-target states.  Requires the
    target to be reached with probability one; otherwise
    :class:`Unreachable` is raised carrying the actual reach probability.
    ``source == target`` gives 0.
    """
    arr = _check_stochastic(q)
    k = arr.shape[0]
    s = _state_index(source, k)
    t = _state_index(target, k)
    if s == t:
        return 0.0
    others = [i for i in range(k) if i != t]
    pos = others.index(s)
    if not _reaches(arr, s, t):
        raise Unreachable(
            f"no positive-probability path from {_name(s, k)} to {_name(t, k)}",
            absorption_prob=0.0,
        )
    a_mat = np.eye(k - 1) - arr[np.ix_(others, others)]
    try:
        reach = scipy.linalg.solve(a_mat, arr[others, t])
        mean = scipy.linalg.solve(a_mat, np.ones(k - 1))
    except scipy.linalg.LinAlgError:
        raise Unreachable(
            f"target {_name(t, k)} is not certain from {_name(s, k)} "
            "(transient system is singular)",
        ) from None
    if not math.isfinite(reach[pos]) or reach[pos] < 1.0 - 1e-9:
        raise Unreachable(
            f"target {_name(t, k)} is reached from {_name(s, k)} "
            f"with probability {reach[pos]:.6g} < 1",
            absorption_prob=float(reach[pos]),
        )
    return float(mean[pos])


def _name(i: int, k: int) -> str:
    return State(i).name if k == 4 else str(i)


def _reaches(arr, s, t) -> bool:
    """Breadth-first search along positive entries."""
    seen = {s}
    frontier = [s]
    while frontier:
        nxt = []
        for i in frontier:
            for j in np.nonzero(arr[i] > 0.0)[0]:
                if j == t:
                    return True
                if j not in seen:
                    seen.add(int(j))
                    nxt.append(int(j))
        frontier = nxt
    return False


def median_hitting_time(q, source, target, horizon: int = 5000) -> int:
    """Smallest n with P(first passage <= n) >= 1/2.

    Raises :class:`Unreachable` if half the mass is not reached by the
    horizon.
    """
    pmf = first_passage_pmf(q, source, target, horizon)
    cdf = pmf.cdf()
    idx = np.searchsorted(cdf, 0.5)
    if idx >= horizon:
        raise Unreachable(
            f"first-passage mass by step {horizon} is only {cdf[-1]:.6g}",
            absorption_prob=float(cdf[-1]),
        )
    return int(idx) + 1


@dataclass(frozen=True)
class QuasiStationary:
    """Quasi-stationary law over the transient states F, C, J.

    ``mu`` is the normalized left eigenvector of the transient block for
    its leading eigenvalue ``eigenvalue``; it is the long-run law of a
    parcel conditioned on not being absorbed yet.
    """

    mu: np.ndarray
    eigenvalue: float

    def __post_init__(self):
        arr = np.asarray(self.mu, dtype=float)
        arr.flags.writeable = False
        object.__setattr__(self, "mu", arr)


_TIE_TOL = 1e-12


def quasi_stationary(q) -> QuasiStationary:
    """Closed-form quasi-stationary distribution of the four-state chain.

    The transient block over {F, C, J} is block triangular, so its
    eigenvalues are Q(F,F) and the two eigenvalues of the {C, J} corner;
    the leading one and its left eigenvector come from the 2x2 quadratic.
    Raises :class:`DegenerateBlock` when the leading eigenvalue is not
    simple (no unique answer exists).
    """
    arr = _check_stochastic(q)
    if arr.shape != (4, 4):
        raise ConstraintViolation("quasi-stationary analysis expects the 4x4 chain")
    qff, th1, th2 = arr[0, 0], arr[0, 1], arr[0, 2]
    qcc, th3 = arr[1, 1], arr[1, 2]
    th5, qjj = arr[2, 1], arr[2, 2]
    disc = (qcc - qjj) ** 2 + 4.0 * th3 * th5
    lam_block = 0.5 * (qcc + qjj + math.sqrt(disc))
    if abs(qff - lam_block) <= _TIE_TOL:
        raise DegenerateBlock(
            f"Q(F,F)={qff!r} ties the {{C,J}} block eigenvalue {lam_block!r}"
        )
    if qff > lam_block:
        lam = qff
        det = (lam - qcc) * (lam - qjj) - th3 * th5
        mu_c = ((lam - qjj) * th1 + th5 * th2) / det
        mu_j = (th3 * th1 + (lam - qcc) * th2) / det
        mu = np.array([1.0, mu_c, mu_j])
    else:
        lam = lam_block
        if math.sqrt(disc) <= _TIE_TOL:
            raise DegenerateBlock("the {C,J} block has a repeated leading eigenvalue")
        # two parametrizations of the same left eigenvector; use the
        # better-conditioned one
        v1 = (th5, lam - qcc)
        v2 = (lam - qjj, th3)
        v = v1 if max(map(abs, v1)) >= max(map(abs, v2)) else v2
        if max(map(abs, v)) <= _TIE_TOL:
            raise DegenerateBlock("left eigenvector of the {C,J} block is not determined")
        mu = np.array([0.0, v[0], v[1]])
    mu = np.clip(mu, 0.0, None)
    mu /= mu.sum()
    return QuasiStationary(mu=mu, eigenvalue=float(lam))


def quasi_stationary_by_iteration(q, n_steps: int) -> np.ndarray:
    """Law of the chain at time ``n_steps`` conditioned on not yet absorbed.

    Starts from the initial law (all mass on F), propagates through the
    transient block and renormalizes.  Converges to the quasi-stationary
    ``mu`` at the geometric rate (second eigenvalue / leading eigenvalue).
    """
    arr = _check_stochastic(q)
    if arr.shape != (4, 4):
        raise ConstraintViolation("quasi-stationary analysis expects the 4x4 chain")
    if n_steps < 0:
        raise ConstraintViolation("n_steps must be nonnegative")
    block = arr[:3, :3]
    v = np.array([1.0, 0.0, 0.0])
    for _ in range(n_steps):
        v = v @ block
        total = v.sum()
        if total <= 0.0:
            raise DegenerateBlock("no unabsorbed mass left; conditional law undefined")
        v = v / total
    return v
