"""How long until a parcel is built on, and what happens meanwhile.

Because B is absorbing and reachable from every other state, each parcel
is eventually built on with probability one; the interesting questions
are *when*, and what the landscape looks like while absorption is still
pending.  Starting from the fitted model this script computes

* the first-passage law of the year of first construction for a parcel
  starting in F, by the renewal recurrence,
* its mean (by linear solve) and median (by cumulative probability),
* the quasi-stationary law: the long-run mix over the transient states
  conditioned on not yet being built on, obtained from the leading left
  eigenvector of the transient block and verified by renormalized
  forward iteration.

The first-passage law is strongly right-skewed -- the mean year of
construction is about 152 but half of all parcels are built on by year
109 -- so mean and median are both worth reporting.
"""

import numpy as np

import markov_panel as mp


def main() -> None:
    panel = mp.load_landuse_panel()
    fit = mp.mle(mp.count_transitions(panel))
    q = mp.build_matrix(fit.theta)

    pmf = mp.first_passage_pmf(q, "F", "B", horizon=600)
    print("first-passage probabilities F -> B (first construction):")
    for n in (1, 2, 5, 10, 50, 100, 200):
        print(f"  year {n:3d}:  {pmf.prob(n):.6f}")
    print(f"  mass captured by year {pmf.horizon}: {pmf.mass():.4f}")

    mean = mp.hitting_time_mean(q, "F", "B")
    median = mp.median_hitting_time(q, "F", "B")
    print(f"\nmean time to absorption:   {mean:8.2f} years")
    print(f"median time to absorption: {median:5d} years")
    print("the gap between them is the skew: a minority of parcels")
    print("cycle between cropping and fallow for a very long time.")

    qs = mp.quasi_stationary(q)
    print(f"\nquasi-stationary law (leading eigenvalue {qs.eigenvalue:.6f}):")
    for i, name in enumerate("FCJ"):
        print(f"  {name}: {qs.mu[i]:.6f}")
    print("conditioned on not yet being built on, the landscape forgets F")
    print("entirely and settles into a cropped/fallow mix of roughly 57/43.")

    iterated = mp.quasi_stationary_by_iteration(q, 5000)
    gap = np.max(np.abs(qs.mu - iterated))
    print(f"\ncross-check: eigenvector vs 5000-step renormalized iteration")
    print(f"agree to {gap:.2e}")

    print("\nsurvival-conditioned decay: P(not built by n) shrinks by a")
    print(f"factor {qs.eigenvalue:.6f} per year in the quasi-stationary")
    print(f"regime, a half-life of {np.log(0.5) / np.log(qs.eigenvalue):.0f} years.")


if __name__ == "__main__":
    main()
