"""Fit the bundled land-use panel two ways and compare the answers.

The panel tracks 43 parcels over 22 annual surveys through four states:
F (undisturbed), C (cropped), J (fallow regrowth), B (built).  Building
is permanent and cleared land never returns to F, so the transition
matrix has six structural zeros and five free probabilities

    theta1 = P(F -> C)   theta2 = P(F -> J)
    theta3 = P(C -> J)   theta4 = P(C -> B)
    theta5 = P(J -> C)

This script pools the year-to-year transition counts, computes the
closed-form maximum-likelihood estimate, then reruns the fit as a
posterior mean under the Jeffreys prior with a random-walk Metropolis
sampler.  With 900-odd observed transitions the two estimates agree to
about two decimal places; the prior only matters for the rare moves
(F -> J was observed once, C -> B three times).
"""

import numpy as np

import markov_panel as mp


def show_matrix(label: str, theta) -> None:
    q = mp.build_matrix(theta)
    print(f"\n{label}")
    print("        to F     to C     to J     to B")
    for i, row in enumerate(q):
        cells = "  ".join(f"{v:7.4f}" for v in row)
        print(f"  {mp.State(i).name}   {cells}")


def main() -> None:
    panel = mp.load_landuse_panel()
    counts = mp.count_transitions(panel)
    print(f"panel: {panel.n_parcels} parcels x {panel.n_years} years")

    print("\npooled transition counts (rows = from, cols = to):")
    table = mp.counts_table(counts)
    print("        F    C    J    B")
    for name, row in table.items():
        print(f"  {name}  " + "".join(f"{row[t]:5d}" for t in "FCJB"))

    fit = mp.mle(counts)
    print("\nmaximum likelihood (exact ratios of counts):")
    for i, (num, den) in enumerate([(42, 510), (1, 510), (58, 239),
                                    (3, 239), (43, 133)]):
        print(f"  theta{i + 1} = {num:3d}/{den} = {fit.theta[i]:.6f}")

    target = mp.make_log_posterior(counts, "jeffreys",
                                   n_years=panel.n_years,
                                   n_parcels=panel.n_parcels)
    config = mp.McmcConfig(n_iterations=50_000, proposal_sigma=0.01, seed=0,
                           theta_init=mp.clip_to_interior(fit.theta))
    trace = mp.metropolis_hastings(target, config)
    posterior_mean = mp.bayes_estimate(trace)
    print(f"\nJeffreys posterior mean ({config.n_iterations} iterations, "
          f"acceptance rate {trace.acceptance_rate:.2f}):")
    for i, v in enumerate(posterior_mean):
        shift = v - fit.theta[i]
        print(f"  theta{i + 1} = {v:.6f}   (shift vs MLE {shift:+.6f})")
    print("\nthe largest shifts are on the rare transitions, where the")
    print("prior's mass away from zero is felt most.")

    show_matrix("fitted transition matrix (MLE):", fit.theta)
    show_matrix("fitted transition matrix (posterior mean):",
                tuple(posterior_mean))


if __name__ == "__main__":
    main()
