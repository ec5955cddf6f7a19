"""Simulation study: maximum likelihood versus Jeffreys-prior Bayes.

Each replicate draws a parameter vector uniformly from the constrained
parameter set (by rejection from the unit cube), simulates a fresh panel,
fits both estimators on its pooled counts, and records the distance
between the true and fitted transition matrices in the Frobenius norm
``sqrt(trace(A^T A))`` and the spectral 2-norm (largest singular value).
Replicates whose counts make the MLE degenerate are recorded as skipped
and excluded from both error samples, keeping the comparison paired.

A smaller companion study does the same for the two-state chain with a
known (p, q), comparing the Jeffreys-prior MCMC estimator against the
closed-form uniform-prior, beta(1/2,1/2)-prior and maximum-likelihood
estimators by mean absolute error.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace

import numpy as np
import scipy.stats

from .bayes import clip_to_interior, make_log_posterior
from .errors import ConstraintViolation, DegenerateCounts, EmptySample
from .mcmc import McmcConfig, bayes_estimate, metropolis_hastings
from .mle import mle
from .model import build_matrix, simulate_panel
from .panel import count_transitions
from .twostate import (
    count_two_state,
    make_two_state_log_posterior,
    simulate_two_state_chain,
    two_state_estimators,
)

__all__ = [
    "sample_theta_uniform",
    "matrix_error",
    "sign_test_pvalue",
    "empirical_pdf",
    "ReplicateResult",
    "StudyResult",
    "run_study",
    "TwoStateStudyResult",
    "run_two_state_study",
    "DEFAULT_STUDY_MCMC",
]

_NORMS = ("frobenius", "two")

#: MCMC settings used per replicate unless overridden.
DEFAULT_STUDY_MCMC = McmcConfig(n_iterations=20000, proposal_sigma=0.02)


def sample_theta_uniform(seed) -> np.ndarray:
    """One draw from the uniform law on the constrained parameter set.

    Rejection from the unit cube; about one candidate in four is accepted.
    ``seed`` may be an int, a SeedSequence or a Generator.
    """
    rng = np.random.default_rng(seed)
    while True:
        t = rng.random(5)
        if t[0] + t[1] <= 1.0 and t[2] + t[3] <= 1.0:
            return t


def matrix_error(q_true, q_est, norm: str = "frobenius") -> float:
    """Distance between two matrices: ``frobenius`` or spectral ``two`` norm."""
    if norm not in _NORMS:
        raise ConstraintViolation(f"norm must be one of {_NORMS}, got {norm!r}")
    a = np.asarray(q_true, dtype=float)
    b = np.asarray(q_est, dtype=float)
    if a.shape != b.shape:
        raise ConstraintViolation(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b, "fro" if norm == "frobenius" else 2))


def sign_test_pvalue(n_wins: int, n_losses: int) -> float:
    """One-sided sign test: P(at least ``n_wins`` wins | fair coin), ties dropped."""
    if n_wins < 0 or n_losses < 0:
        raise ConstraintViolation("win/loss counts must be nonnegative")
    n = n_wins + n_losses
    if n == 0:
        return 1.0
    return float(scipy.stats.binomtest(n_wins, n, 0.5, alternative="greater").pvalue)


def empirical_pdf(samples, n_bins: int = 25):
    """Density-normalized histogram: returns ``(densities, bin_edges)``."""
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        raise EmptySample("cannot build a histogram from an empty sample")
    if n_bins < 1:
        raise ConstraintViolation("n_bins must be at least 1")
    return np.histogram(arr, bins=n_bins, density=True)


@dataclass(frozen=True)
class ReplicateResult:
    """Errors of both estimators for one simulated panel (nan when skipped)."""

    index: int
    theta: np.ndarray
    err_mle_fro: float
    err_bayes_fro: float
    err_mle_two: float
    err_bayes_two: float
    skipped: bool

    def __post_init__(self):
        arr = np.asarray(self.theta, dtype=float)
        arr.flags.writeable = False
        object.__setattr__(self, "theta", arr)


@dataclass(frozen=True)
class StudyResult:
    """All replicates of one study run plus the settings that produced them."""

    replicates: tuple
    n_parcels: int
    n_years: int
    mcmc: McmcConfig
    seed: object

    @property
    def n_skipped(self) -> int:
        return sum(r.skipped for r in self.replicates)

    def errors(self, estimator: str, norm: str = "frobenius") -> np.ndarray:
        """Error sample over non-skipped replicates, in replicate order."""
        if estimator not in ("mle", "bayes"):
            raise ConstraintViolation(f"estimator must be 'mle' or 'bayes', got {estimator!r}")
        if norm not in _NORMS:
            raise ConstraintViolation(f"norm must be one of {_NORMS}, got {norm!r}")
        attr = f"err_{estimator}_{'fro' if norm == 'frobenius' else 'two'}"
        return np.array([getattr(r, attr) for r in self.replicates if not r.skipped])

    def sign_test(self, norm: str = "frobenius"):
        """(bayes wins, mle wins, one-sided p-value that Bayes is better)."""
        e_mle = self.errors("mle", norm)
        e_bayes = self.errors("bayes", norm)
        wins = int(np.sum(e_bayes < e_mle))
        losses = int(np.sum(e_mle < e_bayes))
        return wins, losses, sign_test_pvalue(wins, losses)

    def to_csv(self, fileobj=None) -> str | None:
        """Write per-replicate rows; returns the text when no file is given."""
        own = fileobj is None
        out = io.StringIO() if own else fileobj
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["index", "theta1", "theta2", "theta3", "theta4", "theta5",
                    "err_mle_fro", "err_bayes_fro", "err_mle_2", "err_bayes_2",
                    "skipped"])
        for r in self.replicates:
            w.writerow([r.index, *(repr(float(t)) for t in r.theta),
                        *(repr(float(v)) for v in
                          (r.err_mle_fro, r.err_bayes_fro, r.err_mle_two, r.err_bayes_two)),
                        int(r.skipped)])
        if own:
            return out.getvalue()
        return None


def study_replicate(theta, n_parcels: int, n_years: int, mcmc: McmcConfig,
                    panel_seed, mcmc_seed, index: int = 0) -> ReplicateResult:
    """Simulate one panel under ``theta`` and fit both estimators on it."""
    panel = simulate_panel(theta, n_years, n_parcels, panel_seed)
    counts = count_transitions(panel)
    try:
        fit = mle(counts)
    except DegenerateCounts:
        nan = float("nan")
        return ReplicateResult(index=index, theta=theta, err_mle_fro=nan,
                               err_bayes_fro=nan, err_mle_two=nan,
                               err_bayes_two=nan, skipped=True)
    target = make_log_posterior(counts, "jeffreys", n_years, n_parcels)
    cfg = replace(mcmc, seed=mcmc_seed, theta_init=clip_to_interior(fit.theta))
    theta_bayes = clip_to_interior(bayes_estimate(metropolis_hastings(target, cfg)),
                                   margin=0.0)
    q_true = build_matrix(theta)
    q_mle = build_matrix(fit.theta)
    q_bayes = build_matrix(theta_bayes)
    return ReplicateResult(
        index=index,
        theta=theta,
        err_mle_fro=matrix_error(q_true, q_mle, "frobenius"),
        err_bayes_fro=matrix_error(q_true, q_bayes, "frobenius"),
        err_mle_two=matrix_error(q_true, q_mle, "two"),
        err_bayes_two=matrix_error(q_true, q_bayes, "two"),
        skipped=False,
    )


def run_study(n_reps: int = 200, n_parcels: int = 43, n_years: int = 22,
              mcmc: McmcConfig | None = None, seed=0) -> StudyResult:
    """Run the full simulation study.

    Parameters
    ----------
    n_reps : int
        Number of replicates (parameter draws).
    n_parcels, n_years : int
        Dimensions of each simulated panel.
    mcmc : McmcConfig, optional
        Per-replicate sampler settings; seed and starting point are
        overridden for every replicate.  Defaults to
        :data:`DEFAULT_STUDY_MCMC`.
    seed : int or SeedSequence
        Master seed; every replicate gets an independent spawned stream,
        so results do not depend on execution order.

    Returns
    -------
    StudyResult
    """
    if n_reps < 1:
        raise ConstraintViolation("n_reps must be at least 1")
    if mcmc is None:
        mcmc = DEFAULT_STUDY_MCMC
    master = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    out = []
    for i, child in enumerate(master.spawn(n_reps)):
        theta_ss, panel_ss, mcmc_ss = child.spawn(3)
        theta = sample_theta_uniform(theta_ss)
        out.append(study_replicate(theta, n_parcels, n_years, mcmc,
                                   panel_seed=panel_ss, mcmc_seed=mcmc_ss, index=i))
    return StudyResult(replicates=tuple(out), n_parcels=n_parcels,
                       n_years=n_years, mcmc=mcmc, seed=seed)


@dataclass(frozen=True)
class TwoStateStudyResult:
    """Mean absolute errors of the two-state estimators at a known (p, q)."""

    p_true: float
    q_true: float
    n_reps: int
    chain_length: int
    mae: dict
    n_mle_skipped: int
    seed: object


def run_two_state_study(p_true: float = 0.15, q_true: float = 0.25,
                        n_reps: int = 500, chain_length: int = 20,
                        mcmc: McmcConfig | None = None, seed=0) -> TwoStateStudyResult:
    """Compare two-state estimators on simulated stationary chains.

    For each replicate a chain of ``chain_length`` transitions is drawn,
    and (p, q) is estimated by the three closed forms and by MCMC under
    the Jeffreys prior.  Mean absolute errors are reported per parameter
    and pooled; MLE replicates with empty denominators are skipped for the
    MLE column only (the Bayes estimators never degenerate).
    """
    if n_reps < 1:
        raise ConstraintViolation("n_reps must be at least 1")
    if mcmc is None:
        mcmc = McmcConfig(n_iterations=8000, proposal_sigma=0.05)
    master = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    names = ("jeffreys", "uniform", "beta", "mle")
    abs_err = {n: {"p": [], "q": []} for n in names}
    n_mle_skipped = 0
    for child in master.spawn(n_reps):
        chain_ss, mcmc_ss = child.spawn(2)
        states = simulate_two_state_chain(p_true, q_true, chain_length, chain_ss)
        counts = count_two_state(states)
        # closed forms that never degenerate
        p_u = (counts.n01 + 1) / (counts.n01 + counts.n00 + 2)
        q_u = (counts.n10 + 1) / (counts.n10 + counts.n11 + 2)
        p_b = (counts.n01 + 0.5) / (counts.n01 + counts.n00 + 1)
        q_b = (counts.n10 + 0.5) / (counts.n10 + counts.n11 + 1)
        abs_err["uniform"]["p"].append(abs(p_u - p_true))
        abs_err["uniform"]["q"].append(abs(q_u - q_true))
        abs_err["beta"]["p"].append(abs(p_b - p_true))
        abs_err["beta"]["q"].append(abs(q_b - q_true))
        try:
            est = two_state_estimators(counts)
            abs_err["mle"]["p"].append(abs(est.p_mle - p_true))
            abs_err["mle"]["q"].append(abs(est.q_mle - q_true))
        except DegenerateCounts:
            n_mle_skipped += 1
        target = make_two_state_log_posterior(counts, chain_length)
        cfg = replace(mcmc, seed=mcmc_ss, theta_init=np.array([p_u, q_u]))
        pb, qb = bayes_estimate(metropolis_hastings(target, cfg))
        abs_err["jeffreys"]["p"].append(abs(pb - p_true))
        abs_err["jeffreys"]["q"].append(abs(qb - q_true))
    mae = {}
    for name in names:
        ep = np.array(abs_err[name]["p"])
        eq = np.array(abs_err[name]["q"])
        mae[name] = {
            "p": float(ep.mean()) if ep.size else float("nan"),
            "q": float(eq.mean()) if eq.size else float("nan"),
            "overall": float(np.concatenate([ep, eq]).mean()) if ep.size else float("nan"),
        }
    return TwoStateStudyResult(p_true=p_true, q_true=q_true, n_reps=n_reps,
                               chain_length=chain_length, mae=mae,
                               n_mle_skipped=n_mle_skipped, seed=seed)
