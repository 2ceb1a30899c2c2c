"""Normalized-entropy state detection for multi-agent groups.

Core pieces: weighted event schemes reduced to action-share
distributions, normalized entropy with golden-ratio zone thresholds,
the 27-cell control/resource/function state cube, command-tree cohesion
scoring, and a deterministic simulator of an adaptive energy-harvesting
swarm.
"""

__version__ = "0.1.0"

from .entropy import (
    H_HIGH,
    H_LOW,
    Event,
    NominalDistribution,
    OrderChaosSplit,
    SurplusInformation,
    WeightedEvents,
    Zone,
    ZoneReport,
    classify_zone,
    entropy,
    expectation,
    golden_thresholds,
    normalized_entropy,
    normalized_entropy_weights,
    order_chaos,
    reduce,
    reduce_uniform,
    surplus_information,
    zone_of,
)
from .cube import (
    Axis,
    AxisSample,
    CubeState,
    adaptation_paths,
    adjacent_states,
    all_states,
    axis_h,
    classify_cube,
)
from .errors import ConfigError, DomainError, ParseError, SwarmStateError
from .hierarchy import (
    CohesionClass,
    CohesionResult,
    CommandTree,
    RankTable,
    build_tree,
    cohesion,
    from_edge_list,
    level_distribution,
    rank_from_rejection,
)
from .sim import (
    Environment,
    EnvironmentProfile,
    Harvest,
    Mode,
    Regime,
    Robot,
    RunResult,
    RunSummary,
    Scenario,
    SimConfig,
    SwarmState,
    TickMetrics,
    control_policy,
    init_swarm,
    load_scenario,
    run,
    step,
    swarm_h,
    with_seed,
)

__all__ = [
    "__version__",
    # errors
    "SwarmStateError",
    "DomainError",
    "ConfigError",
    "ParseError",
    # entropy core
    "Event",
    "WeightedEvents",
    "NominalDistribution",
    "Zone",
    "ZoneReport",
    "SurplusInformation",
    "OrderChaosSplit",
    "H_LOW",
    "H_HIGH",
    "expectation",
    "reduce",
    "reduce_uniform",
    "entropy",
    "normalized_entropy",
    "normalized_entropy_weights",
    "surplus_information",
    "order_chaos",
    "golden_thresholds",
    "zone_of",
    "classify_zone",
    # cube
    "Axis",
    "AxisSample",
    "CubeState",
    "all_states",
    "axis_h",
    "classify_cube",
    "adjacent_states",
    "adaptation_paths",
    # hierarchy
    "CommandTree",
    "RankTable",
    "CohesionClass",
    "CohesionResult",
    "build_tree",
    "cohesion",
    "from_edge_list",
    "level_distribution",
    "rank_from_rejection",
    # sim
    "Harvest",
    "Mode",
    "Regime",
    "Robot",
    "EnvironmentProfile",
    "Environment",
    "SimConfig",
    "SwarmState",
    "Scenario",
    "TickMetrics",
    "RunSummary",
    "RunResult",
    "init_swarm",
    "step",
    "swarm_h",
    "control_policy",
    "run",
    "load_scenario",
    "with_seed",
]
