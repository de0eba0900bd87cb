"""Decision support for cyber-incident response in smart grids.

The pipeline: detect an unfolding multi-stage attack by correlating
indicator events against kill-chain-ordered attack-graph templates
(Dempster-Shafer evidence combination), then rank candidate countermeasures
per attack step under six weighted criteria (simple additive weighting, or
an interval-valued Pythagorean fuzzy Choquet integral over a Sugeno
λ-measure), and present the result as an attack-defense tree.
"""

from .catalog import (
    COST_CRITERIA,
    CRITERIA,
    Catalog,
    CountermeasureRecord,
    Criterion,
    CriterionSpec,
    Direction,
    TechniqueRecord,
    catalog_to_obj,
    criterion_from_id,
    load_catalog,
    load_default_catalog,
    serialize_catalog,
)
from .decision import (
    ADTree,
    AdAttackNode,
    DefenseNode,
    NodeRecommendation,
    adtree_from_obj,
    adtree_to_obj,
    build_adtree,
    export_adtree_document,
    export_dot,
    parse_adtree_document,
    recommend,
    recommendations_to_obj,
)
from .errors import (
    DocumentSyntaxError,
    EmptyCandidateError,
    GridResponseError,
    InvariantError,
    MissingCriterionError,
    TotalConflictError,
    UnknownReferenceError,
    UnknownStrategyError,
    UnknownTechniqueError,
    ValueRangeError,
)
from .evidence import (
    CONFLICT_LIMIT,
    DEFAULT_DETECTION_THRESHOLD,
    VACUOUS_MASS,
    CorrelationResult,
    IocEvent,
    belief,
    combine_dempster,
    conflict,
    correlate_events,
    correlate_many,
    correlation_to_obj,
    parse_events,
    plausibility,
    serialize_events,
)
from .mcdm import (
    DEFAULT_DELTA,
    DEFAULT_KAPPA,
    STRATEGIES,
    DecisionMatrix,
    FuzzyMeasure,
    IvpfNumber,
    Ranking,
    WeightVector,
    choquet_aggregate,
    ivpf_choquet_rank,
    ivpfn_score,
    lambda_measure,
    normalize,
    parse_weights,
    rank_countermeasures,
    saw_rank,
    to_ivpfn,
    weights_from_obj,
)
from .model import (
    LOCKHEED_MARTIN,
    AttackEdge,
    AttackGraph,
    AttackNode,
    KillChain,
    KillChainStage,
    MassFunction,
    attack_graph_from_obj,
    attack_graph_to_obj,
    parse_attack_graph,
    serialize_attack_graph,
    topological_order,
)
from .scenario import (
    CONFIDENCE_RANGE,
    NOISE_CONFIDENCE_RANGE,
    NoisePool,
    Scenario,
    ScenarioStep,
    havex_scenario,
    havex_template,
    load_scenario,
    parse_scenario,
    scenario_from_obj,
    stuxnet_scenario,
    stuxnet_template,
)
from .sensitivity import (
    SweepConfig,
    SweepPoint,
    SweepResult,
    export_sweep_csv,
    run_sweep,
    selection_fingerprint,
    stability_report,
    sweep_result_to_obj,
)
from .service import create_app

__version__ = "0.1.0"

__all__ = [
    "ADTree",
    "AdAttackNode",
    "AttackEdge",
    "AttackGraph",
    "AttackNode",
    "CONFIDENCE_RANGE",
    "CONFLICT_LIMIT",
    "COST_CRITERIA",
    "CRITERIA",
    "Catalog",
    "CorrelationResult",
    "CountermeasureRecord",
    "Criterion",
    "CriterionSpec",
    "DEFAULT_DELTA",
    "DEFAULT_DETECTION_THRESHOLD",
    "DEFAULT_KAPPA",
    "DecisionMatrix",
    "DefenseNode",
    "Direction",
    "DocumentSyntaxError",
    "EmptyCandidateError",
    "FuzzyMeasure",
    "GridResponseError",
    "InvariantError",
    "IocEvent",
    "IvpfNumber",
    "KillChain",
    "KillChainStage",
    "LOCKHEED_MARTIN",
    "MassFunction",
    "MissingCriterionError",
    "NOISE_CONFIDENCE_RANGE",
    "NodeRecommendation",
    "NoisePool",
    "Ranking",
    "STRATEGIES",
    "Scenario",
    "ScenarioStep",
    "SweepConfig",
    "SweepPoint",
    "SweepResult",
    "TechniqueRecord",
    "TotalConflictError",
    "UnknownReferenceError",
    "UnknownStrategyError",
    "UnknownTechniqueError",
    "VACUOUS_MASS",
    "ValueRangeError",
    "WeightVector",
    "adtree_from_obj",
    "adtree_to_obj",
    "attack_graph_from_obj",
    "attack_graph_to_obj",
    "belief",
    "build_adtree",
    "catalog_to_obj",
    "choquet_aggregate",
    "combine_dempster",
    "conflict",
    "correlate_events",
    "correlate_many",
    "correlation_to_obj",
    "create_app",
    "criterion_from_id",
    "export_adtree_document",
    "export_dot",
    "export_sweep_csv",
    "havex_scenario",
    "havex_template",
    "ivpf_choquet_rank",
    "ivpfn_score",
    "lambda_measure",
    "load_catalog",
    "load_default_catalog",
    "load_scenario",
    "normalize",
    "parse_adtree_document",
    "parse_attack_graph",
    "parse_events",
    "parse_scenario",
    "parse_weights",
    "plausibility",
    "rank_countermeasures",
    "recommend",
    "recommendations_to_obj",
    "run_sweep",
    "saw_rank",
    "scenario_from_obj",
    "selection_fingerprint",
    "serialize_attack_graph",
    "serialize_catalog",
    "serialize_events",
    "stability_report",
    "stuxnet_scenario",
    "stuxnet_template",
    "sweep_result_to_obj",
    "to_ivpfn",
    "topological_order",
    "weights_from_obj",
]
