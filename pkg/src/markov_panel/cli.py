"""Command line front end.

Subcommands
-----------
estimate   fit the chain to a panel (closed-form MLE or MCMC posterior mean)
analyze    first-passage and quasi-stationary analysis of a matrix or panel
gof        geometric holding-time fit with parametric bootstrap
simulate   simulation study comparing MLE against Jeffreys-prior Bayes
two-state  closed-form two-state estimators for supplied counts

Output is a human-readable table by default; ``--out json`` emits a
machine-readable report (stable bytes for fixed flags and seed) and
``--out csv`` the command's main tabular payload.  Exit codes: 0 success,
2 unusable input, 3 degenerate data (estimate/test not defined).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
import warnings

import numpy as np

from . import __version__
from .absorption import first_passage_pmf, hitting_time_mean, median_hitting_time, quasi_stationary
from .bayes import clip_to_interior, make_log_posterior
from .errors import (
    BoundaryTheta,
    ConstraintViolation,
    DegenerateBlock,
    DegenerateCounts,
    EmptySample,
    EmptyTrace,
    NonFiniteStart,
    PanelFormatError,
    Unreachable,
)
from .gof import parametric_bootstrap
from .mcmc import McmcConfig, bayes_estimate, metropolis_hastings
from .mle import log_likelihood, mle
from .model import State, build_matrix, check_transition_matrix
from .panel import count_transitions, counts_table, extract_spells, parse_panel, parse_panel_csv
from .study import run_study, empirical_pdf
from .twostate import TwoStateCounts, two_state_estimators

_DEGENERATE = (DegenerateCounts, EmptySample, BoundaryTheta, NonFiniteStart,
               EmptyTrace, Unreachable, DegenerateBlock)


def _default_seed() -> int:
    return int(os.environ.get("MARKOV_PANEL_SEED", "0"))


def _load_panel(path: str):
    with open(path) as fh:
        text = fh.read()
    head = next((ln for ln in text.splitlines() if ln.strip()), "")
    if path.endswith(".csv") or "parcel" in head.lower():
        return parse_panel_csv(text)
    return parse_panel(text)


def _load_matrix(path: str) -> np.ndarray:
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConstraintViolation(f"matrix file {path} is not valid JSON: {exc}") from None
    if isinstance(payload, dict):
        if "matrix" not in payload:
            raise ConstraintViolation(f"matrix file {path} must hold a 'matrix' key or a bare array")
        payload = payload["matrix"]
    return check_transition_matrix(payload)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, State):
        return obj.name
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def _trunc4(x: float) -> float:
    return math.floor(float(x) * 10000.0) / 10000.0


def _display_matrix(theta) -> list[str]:
    """Matrix rows from 4-decimal truncated parameters, rows re-completed to 1.

    This is the conventional way these estimates are tabulated, so the
    output can be compared against published 4-decimal tables directly.
    """
    t = [_trunc4(v) for v in theta]
    q = [
        [1.0 - t[0] - t[1], t[0], t[1], 0.0],
        [0.0, 1.0 - t[2] - t[3], t[2], t[3]],
        [0.0, t[4], 1.0 - t[4], 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
    lines = ["      " + "".join(f"{s:>9}" for s in "FCJB")]
    for i, row in enumerate(q):
        lines.append(f"    {State(i).name} " + "".join(f"{v:9.4f}" for v in row))
    return lines


def _print_counts(counts) -> list[str]:
    lines = ["      " + "".join(f"{s:>7}" for s in "FCJB")]
    for i in range(4):
        lines.append(f"    {State(i).name} " + "".join(f"{int(counts[i, j]):7d}" for j in range(4)))
    return lines


def _emit(report: dict, out_mode: str, table_lines, csv_text: str) -> None:
    if out_mode == "json":
        sys.stdout.write(json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n")
    elif out_mode == "csv":
        sys.stdout.write(csv_text)
    else:
        sys.stdout.write("\n".join(table_lines) + "\n")


def _mcmc_flags(parser: argparse.ArgumentParser, iters: int, sigma: float) -> None:
    parser.add_argument("--iters", type=int, default=iters,
                        help=f"MCMC iterations (default {iters})")
    parser.add_argument("--sigma", type=float, default=sigma,
                        help=f"proposal standard deviation (default {sigma})")
    parser.add_argument("--burn-in", type=int, default=None,
                        help="burn-in iterations (default: 10%% of --iters)")


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=_default_seed(),
                        help="random seed (default: $MARKOV_PANEL_SEED or 0)")
    parser.add_argument("--out", choices=("table", "json", "csv"), default="table",
                        help="output format (default table)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="markov-panel",
        description="Four-state absorbing Markov chain: panel estimation and analysis.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_est = sub.add_parser("estimate", help="fit the chain to a panel")
    p_est.add_argument("panel", help="panel file (text grid or parcel,year,state CSV)")
    p_est.add_argument("--prior", choices=("mle", "jeffreys", "uniform"), default="mle",
                       help="mle: closed form; jeffreys/uniform: MCMC posterior mean")
    _mcmc_flags(p_est, iters=200000, sigma=0.01)
    p_est.add_argument("--trace-out", metavar="PATH",
                       help="write post-burn-in samples to a CSV file")
    _common_flags(p_est)

    p_ana = sub.add_parser("analyze", help="first-passage and quasi-stationary analysis")
    p_ana.add_argument("input", help="transition matrix (.json) or panel file")
    p_ana.add_argument("--estimator", choices=("mle", "jeffreys"), default="mle",
                       help="estimator used when the input is a panel (default mle)")
    p_ana.add_argument("--horizon", type=int, default=5000,
                       help="first-passage horizon in steps (default 5000)")
    p_ana.add_argument("--from", dest="from_state", choices=tuple(s.name for s in State),
                       default="F", help="source state (default F)")
    p_ana.add_argument("--to", dest="to_state", choices=tuple(s.name for s in State),
                       default="B", help="target state (default B)")
    _mcmc_flags(p_ana, iters=200000, sigma=0.01)
    p_ana.add_argument("--pmf-out", metavar="PATH",
                       help="write the full first-passage pmf to a CSV file")
    _common_flags(p_ana)

    p_gof = sub.add_parser("gof", help="geometric holding-time fit + parametric bootstrap")
    p_gof.add_argument("panel", help="panel file (text grid or CSV)")
    p_gof.add_argument("--state", choices=("F", "C", "J"), required=True,
                       help="state whose holding times are tested")
    p_gof.add_argument("--reps", type=int, default=1000,
                       help="bootstrap replicates (default 1000)")
    p_gof.add_argument("--alpha", type=float, default=0.05,
                       help="test level (default 0.05)")
    p_gof.add_argument("--variant", choices=("pmf", "cdf"), default="pmf",
                       help="distance statistic variant (default pmf)")
    p_gof.add_argument("--boot-out", metavar="PATH",
                       help="write the bootstrap statistics to a CSV file")
    _common_flags(p_gof)

    p_sim = sub.add_parser("simulate", help="MLE vs Jeffreys-Bayes simulation study")
    p_sim.add_argument("--reps", type=int, default=200,
                       help="study replicates (default 200)")
    p_sim.add_argument("--full", action="store_true",
                       help="run the large version (1000 replicates)")
    p_sim.add_argument("--parcels", type=int, default=43,
                       help="parcels per simulated panel (default 43)")
    p_sim.add_argument("--years", type=int, default=22,
                       help="years per simulated panel (default 22)")
    _mcmc_flags(p_sim, iters=20000, sigma=0.02)
    p_sim.add_argument("--csv-out", metavar="PATH",
                       help="write per-replicate errors to a CSV file")
    _common_flags(p_sim)

    p_two = sub.add_parser("two-state", help="closed-form two-state estimators")
    for flag in ("--n00", "--n01", "--n10", "--n11"):
        p_two.add_argument(flag, type=int, required=True,
                           help=f"transition count {flag[2:]}")
    _common_flags(p_two)
    return parser


def _cmd_estimate(args) -> tuple[dict, list[str], str]:
    panel = _load_panel(args.panel)
    counts = count_transitions(panel)
    results = {
        "prior": args.prior,
        "n_parcels": panel.n_parcels,
        "n_years": panel.n_years,
        "counts": counts_table(counts),
    }
    if args.prior == "mle":
        fit = mle(counts)
        theta = fit.theta
        results["theta"] = theta
        results["log_likelihood"] = log_likelihood(theta, counts)
    else:
        theta_init = clip_to_interior(mle(counts).theta)
        config = McmcConfig(n_iterations=args.iters, proposal_sigma=args.sigma,
                            burn_in=args.burn_in, seed=args.seed, theta_init=theta_init)
        target = make_log_posterior(counts, args.prior, panel.n_years, panel.n_parcels)
        trace = metropolis_hastings(target, config)
        theta = clip_to_interior(bayes_estimate(trace), margin=0.0)
        results["theta"] = theta
        results["theta_init"] = theta_init
        results["log_likelihood"] = log_likelihood(theta, counts)
        results["mcmc"] = {
            "n_iterations": config.n_iterations,
            "burn_in": config.burn_in,
            "proposal_sigma": config.proposal_sigma,
            "acceptance_rate": trace.acceptance_rate,
            "running_mean_all": trace.running_mean,
            "running_mean_post_burn": trace.samples.mean(axis=0),
        }
        if args.trace_out:
            with open(args.trace_out, "w") as fh:
                fh.write("iteration," + ",".join(f"theta{i}" for i in range(1, 6)) + "\n")
                for i, row in enumerate(trace.samples):
                    fh.write(f"{config.burn_in + i}," + ",".join(repr(v) for v in row.tolist()) + "\n")
    results["matrix"] = build_matrix(theta)

    lines = [f"panel: {panel.n_parcels} parcels x {panel.n_years} years",
             "", "pooled transition counts:"]
    lines += _print_counts(counts)
    label = {"mle": "maximum likelihood", "jeffreys": "posterior mean (Jeffreys prior)",
             "uniform": "posterior mean (uniform prior)"}[args.prior]
    lines += ["", f"theta ({label}):",
              "    " + "  ".join(f"theta{i + 1}={v:.6f}" for i, v in enumerate(theta))]
    if args.prior != "mle":
        lines.append(f"    acceptance rate: {results['mcmc']['acceptance_rate']:.4f}"
                     f"   iterations: {args.iters}   burn-in: {results['mcmc']['burn_in']}")
    lines += ["", "transition matrix (4-decimal truncated display):"]
    lines += _display_matrix(theta)

    csv_lines = ["state,to_F,to_C,to_J,to_B"]
    q = results["matrix"]
    for i in range(4):
        csv_lines.append(State(i).name + "," + ",".join(repr(float(v)) for v in q[i]))
    return results, lines, "\n".join(csv_lines) + "\n"


def _cmd_analyze(args) -> tuple[dict, list[str], str]:
    if args.horizon < 1:
        raise ConstraintViolation("--horizon must be at least 1")
    estimator = None
    if args.input.endswith(".json"):
        q = _load_matrix(args.input)
    else:
        panel = _load_panel(args.input)
        counts = count_transitions(panel)
        estimator = args.estimator
        if estimator == "mle":
            theta = mle(counts).theta
        else:
            theta_init = clip_to_interior(mle(counts).theta)
            config = McmcConfig(n_iterations=args.iters, proposal_sigma=args.sigma,
                                burn_in=args.burn_in, seed=args.seed, theta_init=theta_init)
            target = make_log_posterior(counts, "jeffreys", panel.n_years, panel.n_parcels)
            theta = clip_to_interior(bayes_estimate(metropolis_hastings(target, config)),
                                     margin=0.0)
        q = build_matrix(theta)

    pmf = first_passage_pmf(q, args.from_state, args.to_state, args.horizon)
    mean = hitting_time_mean(q, args.from_state, args.to_state)
    median = median_hitting_time(q, args.from_state, args.to_state, args.horizon)
    qs = quasi_stationary(q)
    results = {
        "estimator": estimator,
        "matrix": q,
        "first_passage": {
            "source": args.from_state,
            "target": args.to_state,
            "horizon": args.horizon,
            "mass": pmf.mass(),
            "partial_mean": pmf.partial_mean(),
            "mean": mean,
            "median": median,
            "pmf_head": pmf.probs[:25],
        },
        "quasi_stationary": {
            "eigenvalue": qs.eigenvalue,
            "mu": {"F": qs.mu[0], "C": qs.mu[1], "J": qs.mu[2]},
        },
    }
    if args.pmf_out:
        with open(args.pmf_out, "w") as fh:
            fh.write("n,prob\n")
            for n, v in enumerate(pmf.probs, start=1):
                fh.write(f"{n},{v!r}\n")

    lines = [f"first passage {args.from_state} -> {args.to_state}:",
             f"    mean:   {mean:.4f} steps",
             f"    median: {median} steps",
             f"    mass captured by horizon {args.horizon}: {pmf.mass():.12f}",
             "",
             "quasi-stationary law on {F, C, J} (conditioned on no absorption):",
             f"    eigenvalue: {qs.eigenvalue:.6f}",
             f"    mu(F)={qs.mu[0]:.4f}  mu(C)={qs.mu[1]:.4f}  mu(J)={qs.mu[2]:.4f}"]
    csv_text = "n,prob\n" + "".join(f"{n},{v!r}\n" for n, v in enumerate(pmf.probs, start=1))
    return results, lines, csv_text


def _cmd_gof(args) -> tuple[dict, list[str], str]:
    panel = _load_panel(args.panel)
    spells = extract_spells(panel, args.state)
    if spells.durations.size == 0:
        raise EmptySample(f"no completed {args.state} spells in the panel")
    res = parametric_bootstrap(spells.durations, m_reps=args.reps, alpha=args.alpha,
                               variant=args.variant, seed=args.seed, state=args.state)
    values, counts = np.unique(spells.durations, return_counts=True)
    q = np.quantile(res.k_boot, [0.25, 0.5, 0.75])
    results = {
        "state": args.state,
        "variant": res.variant,
        "k": res.k,
        "n_censored": spells.n_censored,
        "spells": {int(v): int(c) for v, c in zip(values, counts)},
        "p_hat": res.p_hat,
        "k_star": res.k_star,
        "p_value": res.p_value,
        "alpha": res.alpha,
        "m_reps": res.m_reps,
        "decision": res.decision,
        "k_boot_summary": {"min": res.k_boot.min(), "q25": q[0], "median": q[1],
                           "q75": q[2], "max": res.k_boot.max()},
    }
    if args.boot_out:
        with open(args.boot_out, "w") as fh:
            fh.write("replicate,k_boot\n")
            for m, v in enumerate(res.k_boot):
                fh.write(f"{m},{v!r}\n")

    lines = [f"holding times of state {args.state}: k={res.k} completed spells "
             f"({spells.n_censored} censored)",
             "    durations: " + "  ".join(f"{int(v)}yr x{int(c)}" for v, c in zip(values, counts)),
             f"    fitted p: {res.p_hat:.6f}",
             f"    distance statistic ({res.variant}): {res.k_star:.6f}",
             f"    bootstrap p-value ({res.m_reps} reps): {res.p_value:.4f}",
             f"    decision at alpha={res.alpha:g}: {res.decision}"]
    csv_text = "replicate,k_boot\n" + "".join(f"{m},{v!r}\n" for m, v in enumerate(res.k_boot))
    return results, lines, csv_text


def _cmd_simulate(args) -> tuple[dict, list[str], str]:
    n_reps = 1000 if args.full else args.reps
    mcmc = McmcConfig(n_iterations=args.iters, proposal_sigma=args.sigma,
                      burn_in=args.burn_in)
    study = run_study(n_reps=n_reps, n_parcels=args.parcels, n_years=args.years,
                      mcmc=mcmc, seed=args.seed)
    norms = {}
    hists = {}
    for norm in ("frobenius", "two"):
        e_mle = study.errors("mle", norm)
        e_bayes = study.errors("bayes", norm)
        wins, losses, pval = study.sign_test(norm)
        norms[norm] = {
            "median_mle": float(np.median(e_mle)),
            "median_bayes": float(np.median(e_bayes)),
            "mean_mle": float(e_mle.mean()),
            "mean_bayes": float(e_bayes.mean()),
            "bayes_wins": wins,
            "mle_wins": losses,
            "sign_test_p": pval,
        }
        h_mle, edges_mle = empirical_pdf(e_mle)
        h_bayes, edges_bayes = empirical_pdf(e_bayes)
        hists[norm] = {"mle": {"density": h_mle, "edges": edges_mle},
                       "bayes": {"density": h_bayes, "edges": edges_bayes}}
    results = {
        "n_reps": n_reps,
        "n_parcels": args.parcels,
        "n_years": args.years,
        "n_skipped": study.n_skipped,
        "mcmc": {"n_iterations": mcmc.n_iterations, "burn_in": mcmc.burn_in,
                 "proposal_sigma": mcmc.proposal_sigma},
        "norms": norms,
        "histograms": hists,
    }
    csv_text = study.to_csv()
    if args.csv_out:
        with open(args.csv_out, "w") as fh:
            fh.write(csv_text)

    f, t = norms["frobenius"], norms["two"]
    lines = [f"simulation study: {n_reps} replicates "
             f"({args.parcels} parcels x {args.years} years each), "
             f"{study.n_skipped} skipped",
             "",
             "              median error    mean error    wins",
             f"    frobenius  mle   {f['median_mle']:.4f}      {f['mean_mle']:.4f}      {f['mle_wins']}",
             f"               bayes {f['median_bayes']:.4f}      {f['mean_bayes']:.4f}      {f['bayes_wins']}",
             f"    two-norm   mle   {t['median_mle']:.4f}      {t['mean_mle']:.4f}      {t['mle_wins']}",
             f"               bayes {t['median_bayes']:.4f}      {t['mean_bayes']:.4f}      {t['bayes_wins']}",
             "",
             f"    sign test (Bayes better), frobenius: p = {f['sign_test_p']:.6f}",
             f"    sign test (Bayes better), two-norm:  p = {t['sign_test_p']:.6f}"]
    return results, lines, csv_text


def _cmd_two_state(args) -> tuple[dict, list[str], str]:
    counts = TwoStateCounts(n00=args.n00, n01=args.n01, n10=args.n10, n11=args.n11)
    est = two_state_estimators(counts)
    results = {
        "counts": {"n00": counts.n00, "n01": counts.n01,
                   "n10": counts.n10, "n11": counts.n11},
        "estimates": {
            "p_mle": est.p_mle, "q_mle": est.q_mle,
            "p_uniform": est.p_uniform, "q_uniform": est.q_uniform,
            "p_beta": est.p_beta, "q_beta": est.q_beta,
        },
    }
    lines = [f"two-state counts: n00={counts.n00} n01={counts.n01} "
             f"n10={counts.n10} n11={counts.n11}",
             "",
             "    estimator      p         q",
             f"    mle        {est.p_mle:.6f}  {est.q_mle:.6f}",
             f"    uniform    {est.p_uniform:.6f}  {est.q_uniform:.6f}",
             f"    beta(1/2)  {est.p_beta:.6f}  {est.q_beta:.6f}"]
    csv_text = ("estimator,p,q\n"
                f"mle,{est.p_mle!r},{est.q_mle!r}\n"
                f"uniform,{est.p_uniform!r},{est.q_uniform!r}\n"
                f"beta,{est.p_beta!r},{est.q_beta!r}\n")
    return results, lines, csv_text


_HANDLERS = {
    "estimate": _cmd_estimate,
    "analyze": _cmd_analyze,
    "gof": _cmd_gof,
    "simulate": _cmd_simulate,
    "two-state": _cmd_two_state,
}


def _config_echo(args) -> dict:
    skip = {"command", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            results, lines, csv_text = _HANDLERS[args.command](args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PanelFormatError, ConstraintViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _DEGENERATE as exc:
        print(f"error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 3
    report = {
        "command": args.command,
        "config": _config_echo(args),
        "results": results,
        "warnings": [str(w.message) for w in caught],
    }
    _emit(report, args.out, lines, csv_text)
    print(f"elapsed: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
