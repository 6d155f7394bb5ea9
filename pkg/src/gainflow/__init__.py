"""gainflow: gain-based Lyapunov analysis of evolutionary game dynamics.

Population games, cost-benefit revision protocols and their mean dynamics,
the first/second-order and gross gain functionals, fixed-step integration of
the closed loop, and audits of monotonicity and convergence.
"""

from .analysis import (
    ConvergenceReport,
    MonotonicityReport,
    PropertySuiteReport,
    StationarityReport,
    audit_convergence,
    audit_monotonicity,
    check_stationarity_nash,
    default_budget,
    run_property_suite,
)
from .dynamics import (
    BirthDeathDynamic,
    DynamicsError,
    MeanDynamic,
    RationalizableDynamic,
    ReplicatorDynamic,
    SelectionRule,
    bnn_dynamic,
    make_dynamic,
)
from .gains import (
    GainEvaluator,
    GainSnapshot,
    aggregate_gains,
    birth_death_gains,
    delta_passivity_residual,
    first_order_gain,
    gross_gain,
    multi_aggregate_gain,
    replicator_aggregate_gain,
    replicator_aggregate_gross,
    replicator_lyapunov,
    second_order_gain,
)
from .games import (
    GameError,
    MultiPopulationGame,
    PopulationGame,
    SimplexState,
    StabilityReport,
    anonymous_game,
    best_response_set,
    friedman_game,
    good_rps,
    is_stable_game,
    jacobian,
    make_game,
    matrix_game,
    nash_gap,
    payoff,
    saddle_game,
    static_stability_margin,
    tangent_basis,
)
from .integrate import (
    IntegratorConfig,
    MultiTrajectory,
    Trajectory,
    simulate,
    simulate_multi,
    step,
)
from .protocols import (
    AssumptionReport,
    AvailabilityDistribution,
    CostDistribution,
    ProtocolError,
    RevisionProtocol,
    broken_fixture_i,
    broken_fixture_ii,
    canonical_protocols,
    friedman_asymmetric_protocol,
    make_protocol,
    validate_assumptions,
)
from .scenario import AuditRequest, Scenario, ScenarioError, parse_scenario

__version__ = "0.1.0"

__all__ = [
    "AssumptionReport", "AuditRequest", "AvailabilityDistribution",
    "BirthDeathDynamic", "ConvergenceReport", "CostDistribution",
    "DynamicsError", "GainEvaluator", "GainSnapshot", "GameError",
    "IntegratorConfig", "MeanDynamic", "MonotonicityReport",
    "MultiPopulationGame", "MultiTrajectory", "PopulationGame",
    "PropertySuiteReport", "ProtocolError", "RationalizableDynamic",
    "ReplicatorDynamic", "RevisionProtocol", "Scenario", "ScenarioError",
    "SelectionRule", "SimplexState", "StabilityReport", "StationarityReport",
    "Trajectory", "aggregate_gains", "anonymous_game", "audit_convergence",
    "audit_monotonicity", "best_response_set", "birth_death_gains",
    "bnn_dynamic", "broken_fixture_i", "broken_fixture_ii",
    "canonical_protocols", "check_stationarity_nash", "default_budget",
    "delta_passivity_residual", "first_order_gain",
    "friedman_asymmetric_protocol", "friedman_game", "good_rps", "gross_gain",
    "is_stable_game", "jacobian", "make_dynamic", "make_game", "make_protocol",
    "matrix_game", "multi_aggregate_gain", "nash_gap", "payoff",
    "replicator_aggregate_gain", "replicator_aggregate_gross",
    "replicator_lyapunov", "run_property_suite", "saddle_game",
    "second_order_gain", "simulate", "simulate_multi",
    "static_stability_margin", "step", "tangent_basis",
    "validate_assumptions",
]
