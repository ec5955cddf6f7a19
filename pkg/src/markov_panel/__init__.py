"""Estimation and absorption analysis for a constrained four-state chain
observed as a panel of independent parcels.

The chain has states F, C, J, B with B absorbing and F never re-entered,
so five free probabilities parametrize the transition matrix.  The
package fits them by closed-form maximum likelihood and by the posterior
mean under a Jeffreys prior (random-walk Metropolis), and provides
first-passage laws, expected hitting times, quasi-stationary analysis, a
parametric bootstrap test of the geometric holding-time law, and a
simulation study comparing the two estimators.
"""

from .absorption import (
    FirstPassagePmf,
    QuasiStationary,
    first_passage_pmf,
    hitting_time_mean,
    median_hitting_time,
    quasi_stationary,
    quasi_stationary_by_iteration,
)
from .bayes import (
    clip_to_interior,
    expected_counts,
    fisher_block_dets,
    jeffreys_log_prior,
    log_posterior,
    make_log_posterior,
)
from .errors import (
    BoundaryTheta,
    ConstraintViolation,
    DegenerateBlock,
    DegenerateCounts,
    EmptyPanel,
    EmptySample,
    EmptyTrace,
    MarkovPanelError,
    NonFiniteStart,
    PanelFormatError,
    RaggedRows,
    UnknownSymbol,
    Unreachable,
)
from .gof import (
    GofResult,
    distance_statistic,
    fitted_cdf,
    fitted_pmf,
    geometric_mle,
    parametric_bootstrap,
)
from .mcmc import McmcConfig, McmcTrace, bayes_estimate, metropolis_hastings
from .mle import MleResult, log_likelihood, mle
from .model import (
    INITIAL_LAW,
    ParcelPanel,
    State,
    build_matrix,
    check_transition_matrix,
    matrix_power,
    simulate_panel,
    theta_in_support,
    validate_theta,
)
from .panel import (
    SpellSample,
    count_transitions,
    counts_table,
    extract_spells,
    load_landuse_panel,
    parse_panel,
    parse_panel_csv,
    serialize_panel,
)
from .study import (
    ReplicateResult,
    StudyResult,
    TwoStateStudyResult,
    empirical_pdf,
    matrix_error,
    run_study,
    run_two_state_study,
    sample_theta_uniform,
    sign_test_pvalue,
)
from .twostate import (
    TwoStateCounts,
    TwoStateEstimates,
    count_two_state,
    simulate_two_state_chain,
    two_state_estimators,
    two_state_jeffreys_log_prior,
    two_state_log_likelihood,
)

__version__ = "0.1.0"
