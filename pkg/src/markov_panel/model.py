"""Four-state land-use chain: parameter set, transition matrix, simulation.

States are labelled F, C, J, B (coded 0..3).  The chain is constrained:
F can be left but never re-entered, B is absorbing, and the only way into
B is from C.  A parameter vector ``theta = (theta1, ..., theta5)`` fills
the free entries of the transition matrix

    F:  (1 - theta1 - theta2,  theta1,      theta2,      0)
    C:  (0,                    1 - theta3 - theta4,  theta3,  theta4)
    J:  (0,                    theta5,      1 - theta5,  0)
    B:  (0, 0, 0, 1)

so the parameter set is ``{theta in [0,1]^5 : theta1+theta2 <= 1,
theta3+theta4 <= 1}``.  Every panel starts in F.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import ConstraintViolation

__all__ = [
    "State",
    "N_STATES",
    "INITIAL_LAW",
    "N_THETA",
    "validate_theta",
    "theta_in_support",
    "build_matrix",
    "check_transition_matrix",
    "matrix_power",
    "ParcelPanel",
    "simulate_panel",
]


class State(IntEnum):
    """State codes, in the fixed row order used by every matrix here."""

    F = 0
    C = 1
    J = 2
    B = 3

    @classmethod
    def from_symbol(cls, symbol: str) -> "State":
        try:
            return cls[symbol]
        except KeyError:
            raise ConstraintViolation(f"unknown state symbol {symbol!r}") from None


N_STATES = 4
N_THETA = 5

#: Initial distribution: every parcel starts in state F.
INITIAL_LAW = np.zeros(N_STATES)
INITIAL_LAW[State.F] = 1.0
INITIAL_LAW.flags.writeable = False

# (row, column) pairs that are structurally zero for every theta
FORBIDDEN = (
    (State.C, State.F),
    (State.J, State.F),
    (State.J, State.B),
    (State.B, State.F),
    (State.B, State.C),
    (State.B, State.J),
)


def validate_theta(theta) -> np.ndarray:
    """Check that ``theta`` lies in the parameter set and return it as an array.

    Parameters
    ----------
    theta : array_like, shape (5,)
        Candidate parameter vector.

    Returns
    -------
    numpy.ndarray
        Read-only float copy of ``theta``.

    Raises
    ------
    ConstraintViolation
        If the shape is wrong, a component is outside [0, 1], or one of the
        row-sum constraints ``theta1+theta2 <= 1``, ``theta3+theta4 <= 1``
        fails.  The message names the violated constraint.
    """
    arr = np.asarray(theta, dtype=float)
    if arr.shape != (N_THETA,):
        raise ConstraintViolation(f"theta must have shape (5,), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConstraintViolation("theta components must be finite")
    for i, v in enumerate(arr, start=1):
        if v < 0.0 or v > 1.0:
            raise ConstraintViolation(f"theta{i}={v!r} outside [0, 1]")
    if arr[0] + arr[1] > 1.0:
        raise ConstraintViolation(f"theta1+theta2={arr[0] + arr[1]!r} exceeds 1")
    if arr[2] + arr[3] > 1.0:
        raise ConstraintViolation(f"theta3+theta4={arr[2] + arr[3]!r} exceeds 1")
    out = arr.copy()
    out.flags.writeable = False
    return out


def theta_in_support(theta) -> bool:
    """True iff ``theta`` lies in the parameter set (no exception raised)."""
    arr = np.asarray(theta, dtype=float)
    if arr.shape != (N_THETA,) or not np.all(np.isfinite(arr)):
        return False
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        return False
    return arr[0] + arr[1] <= 1.0 and arr[2] + arr[3] <= 1.0


def build_matrix(theta) -> np.ndarray:
    """Assemble the 4x4 transition matrix for a valid ``theta``.

    Returns a read-only array whose rows follow the F, C, J, B order and
    whose structural zeros are exactly 0.
    """
    t1, t2, t3, t4, t5 = validate_theta(theta)
    q = np.array(
        [
            [1.0 - t1 - t2, t1, t2, 0.0],
            [0.0, 1.0 - t3 - t4, t3, t4],
            [0.0, t5, 1.0 - t5, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )
    q.flags.writeable = False
    return q


def check_transition_matrix(q) -> np.ndarray:
    """Validate an externally supplied transition matrix.

    Requires shape (4, 4), entries in [0, 1], rows summing to 1 within
    1e-12, and zeros at every structurally forbidden entry.
    """
    arr = np.asarray(q, dtype=float)
    if arr.shape != (N_STATES, N_STATES):
        raise ConstraintViolation(f"transition matrix must be 4x4, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConstraintViolation("transition matrix entries must be finite")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ConstraintViolation("transition matrix entries must lie in [0, 1]")
    sums = arr.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > 1e-12):
        bad = int(np.argmax(np.abs(sums - 1.0)))
        raise ConstraintViolation(
            f"row {State(bad).name} sums to {sums[bad]!r}, expected 1 within 1e-12"
        )
    for r, c in FORBIDDEN:
        if arr[r, c] != 0.0:
            raise ConstraintViolation(
                f"entry ({State(r).name}, {State(c).name}) must be a structural zero"
            )
    out = arr.copy()
    out.flags.writeable = False
    return out


def matrix_power(q, n: int) -> np.ndarray:
    """n-step transition matrix, by repeated multiplication.

    ``n = 0`` gives the identity.
    """
    if n < 0 or int(n) != n:
        raise ConstraintViolation(f"power must be a nonnegative integer, got {n!r}")
    q = np.asarray(q, dtype=float)
    out = np.eye(q.shape[0])
    for _ in range(int(n)):
        out = out @ q
    return out


@dataclass(frozen=True)
class ParcelPanel:
    """Rectangular record of states: one row per year, one column per parcel.

    ``states[y, p]`` is the integer code of parcel ``p`` in year ``y``.
    """

    states: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.states)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ConstraintViolation(f"panel must be 2-d and nonempty, got shape {arr.shape}")
        if not np.all((arr >= 0) & (arr < N_STATES)):
            raise ConstraintViolation("panel entries must be state codes 0..3")
        arr = arr.astype(np.int8, copy=True)
        arr.flags.writeable = False
        object.__setattr__(self, "states", arr)

    @property
    def n_years(self) -> int:
        return self.states.shape[0]

    @property
    def n_parcels(self) -> int:
        return self.states.shape[1]

    def column(self, parcel: int) -> np.ndarray:
        """Trajectory of one parcel across all years."""
        return self.states[:, parcel]

    def __eq__(self, other):
        if not isinstance(other, ParcelPanel):
            return NotImplemented
        return np.array_equal(self.states, other.states)

    def __hash__(self):
        return hash(self.states.tobytes())


def simulate_panel(theta, n_years: int, n_parcels: int, seed) -> ParcelPanel:
    """Simulate independent parcel trajectories, all starting in F.

    Parameters
    ----------
    theta : array_like, shape (5,)
        Chain parameters.
    n_years : int
        Number of observed years (rows), at least 1.
    n_parcels : int
        Number of independent parcels (columns), at least 1.
    seed : int, numpy.random.SeedSequence or numpy.random.Generator
        Randomness source; a fixed seed makes the panel reproducible.

    Returns
    -------
    ParcelPanel
    """
    q = build_matrix(theta)
    if n_years < 1 or n_parcels < 1:
        raise ConstraintViolation("n_years and n_parcels must be at least 1")
    rng = np.random.default_rng(seed)
    cum = np.cumsum(q, axis=1)
    states = np.empty((n_years, n_parcels), dtype=np.int8)
    states[0] = State.F
    for y in range(1, n_years):
        cur = states[y - 1]
        u = rng.random(n_parcels)
        nxt = np.empty(n_parcels, dtype=np.int8)
        for s in range(N_STATES):
            mask = cur == s
            if np.any(mask):
                # side="right" can never land on a zero-probability cell
                nxt[mask] = np.searchsorted(cum[s], u[mask], side="right")
        states[y] = nxt
    return ParcelPanel(states)
