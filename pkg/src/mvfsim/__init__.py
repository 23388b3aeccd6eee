"""Dependency-graph simulator for ransomware recovery of production sites.

The package answers one operational question: after an attack, when is it
defensible to declare a minimum viable factory — enough verified capability
to run one constrained production mission — and what goes wrong when teams
declare on the wrong signals.

Layers, bottom up:

  graph        typed dependency graph with per-node recovery state
  feasibility  the per-node feasibility predicate and the five
               success conditions behind a declaration
  scenario     scenario format ("mvf-scenario/1"), parsing, redaction
  actions      the recovery action vocabulary and plan format
  sim          deterministic executor, event log, exhaustive-search oracle
  planners     six baseline strategies, from reckless to careful
  failure_modes / metrics
               failure-mode detection and run scoring ("mvf-report/1")
  catalog      builtin scenarios
  cli / service
               command line and the tabletop exercise HTTP API
"""

from .actions import (
    ActionKind,
    DEFAULT_ACTION_DURATIONS,
    PLAN_FORMAT,
    RecoveryAction,
    RecoveryPlan,
    plan_from_json,
    plan_to_json,
)
from .catalog import builtin_ids, load_builtin
from .failure_modes import FM_CODES, FM_DESCRIPTIONS, FmFinding, detect_failure_modes
from .feasibility import (
    CONDITION_NAMES,
    CONJUNCT_NAMES,
    EvidenceBundle,
    EvidenceItem,
    EvidenceKind,
    InvalidMission,
    Mission,
    MvfDecision,
    ProductionScope,
    Verdict,
    check_success_conditions,
    decide_mvf,
    effective_required_ids,
    evaluate_feasibility,
    evidence_completeness,
)
from .graph import (
    DependencyEdge,
    DependencyGraph,
    DependencyNode,
    EdgeRelation,
    NodeKind,
    RecoveryState,
    SafetyStatus,
    Thresholds,
    find_requires_cycle,
    required_subgraph,
    validate_graph,
)
from .metrics import (
    MetricsReport,
    REPORT_FORMAT,
    compute_metrics,
    metrics_from_log,
    render_machine,
    render_text,
)
from .planners import STRATEGY_NAMES, action_vocabulary, enumerate_plans, plan
from .scenario import (
    ResponderView,
    SCENARIO_FORMAT,
    ScenarioFormatError,
    ScenarioSpec,
    parse_scenario,
    redact_truth,
    render_scenario,
    try_parse_scenario,
)
from .service import create_app
from .sim import (
    OracleResult,
    Outcome,
    RunResult,
    SimEvent,
    SimState,
    apply_action,
    initial_state,
    oracle_search,
    run_plan,
)

__version__ = "0.1.0"

__all__ = [
    "ActionKind",
    "CONDITION_NAMES",
    "CONJUNCT_NAMES",
    "DEFAULT_ACTION_DURATIONS",
    "DependencyEdge",
    "DependencyGraph",
    "DependencyNode",
    "EdgeRelation",
    "EvidenceBundle",
    "EvidenceItem",
    "EvidenceKind",
    "FM_CODES",
    "FM_DESCRIPTIONS",
    "FmFinding",
    "InvalidMission",
    "MetricsReport",
    "Mission",
    "MvfDecision",
    "NodeKind",
    "OracleResult",
    "Outcome",
    "PLAN_FORMAT",
    "ProductionScope",
    "REPORT_FORMAT",
    "RecoveryAction",
    "RecoveryPlan",
    "RecoveryState",
    "ResponderView",
    "RunResult",
    "SCENARIO_FORMAT",
    "STRATEGY_NAMES",
    "SafetyStatus",
    "ScenarioFormatError",
    "ScenarioSpec",
    "SimEvent",
    "SimState",
    "Thresholds",
    "Verdict",
    "action_vocabulary",
    "apply_action",
    "builtin_ids",
    "check_success_conditions",
    "compute_metrics",
    "create_app",
    "decide_mvf",
    "detect_failure_modes",
    "effective_required_ids",
    "enumerate_plans",
    "evaluate_feasibility",
    "evidence_completeness",
    "find_requires_cycle",
    "initial_state",
    "load_builtin",
    "metrics_from_log",
    "oracle_search",
    "parse_scenario",
    "plan",
    "plan_from_json",
    "plan_to_json",
    "redact_truth",
    "render_machine",
    "render_scenario",
    "render_text",
    "required_subgraph",
    "run_plan",
    "try_parse_scenario",
    "validate_graph",
]
