"""Costly-perception ambiguity models.

A decision maker facing an ambiguous prospect chooses how to perceive it:
each perception is a closed convex set of priors with an attention cost,
and the realized value of a lottery over acts is the best (or, for
cautious variants, worst) cost-adjusted worst-case expected utility across
the available perceptions.  The package evaluates these models, checks
the axioms that characterize them, identifies perception costs from
choice data, compares models by their attitudes, and runs declarative
scenario files from the command line.
"""

from .axioms import (
    AXIOM_IDS,
    AxiomReport,
    check_axiom,
    machina_5051_dual_self_property,
    necessary_axioms,
    recheck_witness,
)
from .comparatives import (
    ComparativeVerdict,
    dominates_benefit,
    higher_filtering_incentives,
    more_tolerant_ambiguity,
    more_tolerant_ea_randomization,
    shares_optimal_perception,
    shares_optimal_perception_detail,
)
from .geometry import (
    BeliefSet,
    ConvexCapacity,
    DimensionMismatchError,
    Prior,
    StateSpace,
    UtilityAct,
    choquet_integral,
    convex_combination_gap,
    core_of_capacity,
    is_subset,
    is_supermodular,
    mix_sets,
    prune_vertices,
    set_equal,
    support_value,
    symmetric_vertex_distance,
)
from .identification import (
    CanonicalReport,
    CostEstimate,
    Dictionary,
    check_canonical,
    estimate_cost_star,
    estimate_multi_meu_core,
    normalize_act,
    standard_bet_dictionary,
)
from .model import (
    VARIANTS,
    CapModel,
    EvaluationResult,
    FiniteFamily,
    Lottery,
    ParametricFamily,
    certainty_equivalent,
    constant_act,
    evaluate,
    evaluate_value,
    mix_acts,
    mix_lotteries,
)
from .sampling import (
    LotterySampler,
    random_belief_set,
    random_cap_model,
    random_finite_family,
    random_prior_matrix,
    random_supermodular_capacity,
)
from .scenario import (
    Report,
    QueryResult,
    Scenario,
    ScenarioError,
    builtin_machina_suite,
    bundled_scenario_paths,
    load_scenario,
    run_queries,
    scenario_from_dict,
)

__version__ = "0.1.0"

__all__ = [
    "AXIOM_IDS",
    "AxiomReport",
    "BeliefSet",
    "CanonicalReport",
    "CapModel",
    "ComparativeVerdict",
    "ConvexCapacity",
    "CostEstimate",
    "Dictionary",
    "DimensionMismatchError",
    "EvaluationResult",
    "FiniteFamily",
    "Lottery",
    "LotterySampler",
    "ParametricFamily",
    "Prior",
    "QueryResult",
    "Report",
    "Scenario",
    "ScenarioError",
    "StateSpace",
    "UtilityAct",
    "VARIANTS",
    "builtin_machina_suite",
    "bundled_scenario_paths",
    "certainty_equivalent",
    "check_axiom",
    "check_canonical",
    "choquet_integral",
    "constant_act",
    "convex_combination_gap",
    "core_of_capacity",
    "dominates_benefit",
    "estimate_cost_star",
    "estimate_multi_meu_core",
    "evaluate",
    "evaluate_value",
    "higher_filtering_incentives",
    "is_subset",
    "is_supermodular",
    "load_scenario",
    "machina_5051_dual_self_property",
    "mix_acts",
    "mix_lotteries",
    "mix_sets",
    "more_tolerant_ambiguity",
    "more_tolerant_ea_randomization",
    "necessary_axioms",
    "normalize_act",
    "prune_vertices",
    "random_belief_set",
    "random_cap_model",
    "random_finite_family",
    "random_prior_matrix",
    "random_supermodular_capacity",
    "recheck_witness",
    "run_queries",
    "scenario_from_dict",
    "set_equal",
    "shares_optimal_perception",
    "shares_optimal_perception_detail",
    "standard_bet_dictionary",
    "support_value",
    "symmetric_vertex_distance",
]
