"""Exact laboratory for one-sided matching mechanisms.

Computes exact probabilistic allocations under random serial dictatorship,
the naive and adaptive Boston mechanisms and probabilistic serial;
classifies allocations by stochastic / ordinal / rank dominance; and
measures incentive properties (axioms, manipulability, degree of
strategyproofness). Probabilities are exact `fractions.Fraction` values.
"""

from matchlab._matchlab import (  # noqa: F401
    BudgetError,
    InputError,
    __version__,
    allocate,
    check_axiom,
    d1_max,
    dosp,
    estimate_fcm_probability,
    expected_utility,
    find_fosd_manipulation,
    fosd,
    has_overlap,
    is_first_choice_maximizing,
    is_manipulable_at,
    is_pareto_efficient,
    ordinal_compare,
    parse_profile,
    rank_compare,
    rank_distribution,
    run_cube,
    run_det,
    sample_profile,
    sampled_allocation,
    separable_wants,
    verify_rsd_vs_abm,
    verify_nbm_never_dominated,
)
