"""Builtin scenarios, constructed in code so the CLI and service can load
them by id without touching the filesystem.

`table9-line-a` is the reference incident: enterprise identity exposed,
MES encrypted with a suspect newest backup, historian integrity uncertain,
supplier portal down, and the production cell isolated behind a gate. The
mission is 48 ticks of one product family. The six baseline planners land
on visibly different verdicts here, which is the point.

`micro-3node` is a three-node teaching scenario small enough for the
exhaustive search oracle. `micro-presatisfied` is the degenerate case
where declaring immediately is already safe.
"""

from __future__ import annotations

from .feasibility import Mission, ProductionScope
from .graph import (
    DependencyEdge,
    DependencyGraph,
    DependencyNode,
    EdgeRelation,
    NodeKind,
    RecoveryState,
    SafetyStatus,
    Thresholds,
)
from .scenario import (
    BackupCompleteness,
    CompromiseState,
    ConstraintKind,
    DegradedProcedure,
    ExpiryAction,
    ExternalConstraint,
    RestorePoint,
    ScenarioSpec,
)
from .actions import DEFAULT_ACTION_DURATIONS

TABLE9_LINE_A = "table9-line-a"
MICRO_3NODE = "micro-3node"
MICRO_PRESATISFIED = "micro-presatisfied"


def builtin_ids() -> tuple[str, ...]:
    return (TABLE9_LINE_A, MICRO_3NODE, MICRO_PRESATISFIED)


def load_builtin(scenario_id: str) -> ScenarioSpec:
    try:
        factory = _FACTORIES[scenario_id]
    except KeyError:
        raise KeyError(f"unknown builtin scenario: {scenario_id}") from None
    return factory()


def _node(node_id: str, kind: NodeKind, name: str, criticality: int) -> DependencyNode:
    return DependencyNode(id=node_id, kind=kind, name=name, criticality=criticality)


def _state(a: int, t: int, e: int, s: SafetyStatus = SafetyStatus.APPROVED) -> RecoveryState:
    return RecoveryState(availability=a, trust=t, evidence=e, safety=s)


def _table9_line_a() -> ScenarioSpec:
    nodes = [
        _node("cell-a", NodeKind.OT_COMPONENT, "Product family A production cell", 3),
        _node("mes", NodeKind.IT_SYSTEM, "Manufacturing execution system", 3),
        _node("idp", NodeKind.IDENTITY, "Enterprise identity provider", 3),
        _node("historian", NodeKind.DATA_STORE, "Process historian", 2),
        _node("supplier-portal", NodeKind.EXTERNAL_PARTNER, "Supplier order portal", 2),
        _node("ot-path-a", NodeKind.NETWORK_PATH, "Isolated OT reconnection path", 2),
        _node("quality-release", NodeKind.PROCEDURE, "Quality release procedure", 2),
        _node("line-operators", NodeKind.PERSON, "Line operator crew", 2),
        _node("plant-manager", NodeKind.PERSON, "Plant manager", 1),
    ]
    edges = [
        DependencyEdge("cell-a", "mes", EdgeRelation.REQUIRES),
        DependencyEdge("cell-a", "ot-path-a", EdgeRelation.CONNECTS_VIA),
        DependencyEdge("cell-a", "quality-release", EdgeRelation.REQUIRES),
        DependencyEdge("cell-a", "line-operators", EdgeRelation.REQUIRES),
        DependencyEdge("cell-a", "supplier-portal", EdgeRelation.SUPPLIED_BY),
        DependencyEdge("mes", "idp", EdgeRelation.AUTHENTICATES_VIA),
        DependencyEdge("quality-release", "historian", EdgeRelation.READS_DATA_FROM),
    ]
    states = {
        # The cell itself is healthy but isolated and its instrumentation
        # coverage is uncertain, hence evidence 0 and safety blocked.
        "cell-a": _state(2, 2, 0, SafetyStatus.BLOCKED),
        "mes": _state(0, 0, 0),
        "idp": _state(2, 1, 1),
        "historian": _state(2, 1, 0),
        "supplier-portal": _state(0, 2, 0),
        "ot-path-a": _state(2, 2, 0),
        "quality-release": _state(2, 2, 2),
        "line-operators": _state(2, 2, 2),
        "plant-manager": _state(2, 2, 2),
    }
    restore_points = [
        RestorePoint(
            id="rp-mes-031",
            target_node="mes",
            age_ticks=2,
            truth_contaminated=True,
            verified=False,
            completeness=BackupCompleteness.COMPLETE,
        ),
        RestorePoint(
            id="rp-mes-027",
            target_node="mes",
            age_ticks=20,
            truth_contaminated=False,
            verified=True,
            completeness=BackupCompleteness.COMPLETE,
            verification_tag="restore-test-2025-W42",
        ),
        RestorePoint(
            id="rp-hist-009",
            target_node="historian",
            age_ticks=16,
            truth_contaminated=False,
            verified=True,
            completeness=BackupCompleteness.COMPLETE,
            verification_tag="restore-test-2025-W41",
        ),
    ]
    compromise = CompromiseState(
        encrypted_nodes=("mes",),
        exposed_credentials=("idp",),
        contaminated_backups=("rp-mes-031",),
        lateral_movement_paths=(("idp", "mes"), ("mes", "historian")),
        ot_visibility_uncertain=("cell-a",),
    )
    procedures = [
        DegradedProcedure(
            id="dp-manual-scheduling",
            substitutes_for="mes",
            max_duration_ticks=24,
            requires_approval_by="plant-manager",
            expiry_action=ExpiryAction.ROLLBACK,
        ),
        DegradedProcedure(
            id="dp-manual-supplier",
            substitutes_for="supplier-portal",
            max_duration_ticks=48,
            requires_approval_by="plant-manager",
            expiry_action=ExpiryAction.ESCALATE,
        ),
        DegradedProcedure(
            id="dp-offline-quality",
            substitutes_for="quality-release",
            max_duration_ticks=24,
            requires_approval_by="plant-manager",
            expiry_action=ExpiryAction.ROLLBACK,
        ),
    ]
    constraints = [
        ExternalConstraint(
            id="ec-customer-deadline",
            kind=ConstraintKind.CUSTOMER_DEADLINE,
            subject="cell-a",
            window=(0, 48),
        ),
    ]
    mission = Mission(
        id="mission-family-a",
        production_scope=ProductionScope(roots=("cell-a",), product_family="family-A"),
        throughput=10.0,
        duration_ticks=48,
        thresholds=Thresholds(a_min=2, t_min=2, e_min=2),
        safety_envelope=("cell-a",),
        quality_requirements=("quality-release",),
        degraded_limits=("dp-manual-scheduling", "dp-manual-supplier", "dp-offline-quality"),
        monitoring_rollback=(
            "Line supervision on site for the first shift",
            "Rollback to isolation if anomaly alarms trigger",
        ),
    )
    return ScenarioSpec(
        id=TABLE9_LINE_A,
        graph=DependencyGraph.build(nodes, edges, states),
        compromise=compromise,
        restore_points=tuple(sorted(restore_points, key=lambda p: p.id)),
        degraded_procedures=tuple(sorted(procedures, key=lambda p: p.id)),
        external_constraints=tuple(constraints),
        missions=(mission,),
        action_durations=dict(sorted(DEFAULT_ACTION_DURATIONS.items())),
        horizon_ticks=72,
    )


def _micro_3node() -> ScenarioSpec:
    nodes = [
        _node("app", NodeKind.IT_SYSTEM, "Batch control application", 3),
        _node("auth", NodeKind.IDENTITY, "Local account directory", 2),
        _node("line", NodeKind.OT_COMPONENT, "Packaging line", 3),
    ]
    edges = [
        DependencyEdge("line", "app", EdgeRelation.REQUIRES),
        DependencyEdge("app", "auth", EdgeRelation.AUTHENTICATES_VIA),
    ]
    states = {
        "app": _state(0, 0, 0),
        "auth": _state(2, 1, 1),
        "line": _state(2, 2, 0, SafetyStatus.BLOCKED),
    }
    restore_points = [
        RestorePoint(
            id="rp-app-01",
            target_node="app",
            age_ticks=1,
            truth_contaminated=True,
            verified=False,
            completeness=BackupCompleteness.COMPLETE,
        ),
        RestorePoint(
            id="rp-app-05",
            target_node="app",
            age_ticks=5,
            truth_contaminated=False,
            verified=True,
            completeness=BackupCompleteness.COMPLETE,
            verification_tag="restore-test-2025-W40",
        ),
    ]
    compromise = CompromiseState(
        encrypted_nodes=("app",),
        exposed_credentials=("auth",),
        contaminated_backups=("rp-app-01",),
        ot_visibility_uncertain=("line",),
    )
    mission = Mission(
        id="micro-mission",
        production_scope=ProductionScope(roots=("line",), product_family="micro"),
        throughput=1.0,
        duration_ticks=8,
        thresholds=Thresholds(a_min=2, t_min=2, e_min=2),
        safety_envelope=("line",),
        monitoring_rollback=("Supervisor observes the first hour of output",),
    )
    return ScenarioSpec(
        id=MICRO_3NODE,
        graph=DependencyGraph.build(nodes, edges, states),
        compromise=compromise,
        restore_points=tuple(sorted(restore_points, key=lambda p: p.id)),
        degraded_procedures=(),
        external_constraints=(),
        missions=(mission,),
        action_durations=dict(sorted(DEFAULT_ACTION_DURATIONS.items())),
        horizon_ticks=32,
    )


def _micro_presatisfied() -> ScenarioSpec:
    nodes = [_node("line-ready", NodeKind.IT_SYSTEM, "Standalone workcell controller", 2)]
    states = {"line-ready": _state(3, 3, 3)}
    mission = Mission(
        id="micro-ready-mission",
        production_scope=ProductionScope(roots=("line-ready",), product_family="micro-ready"),
        throughput=1.0,
        duration_ticks=4,
        thresholds=Thresholds(a_min=2, t_min=2, e_min=2),
        monitoring_rollback=("Observe the first lot",),
    )
    return ScenarioSpec(
        id=MICRO_PRESATISFIED,
        graph=DependencyGraph.build(nodes, [], states),
        compromise=CompromiseState(),
        restore_points=(),
        degraded_procedures=(),
        external_constraints=(),
        missions=(mission,),
        action_durations=dict(sorted(DEFAULT_ACTION_DURATIONS.items())),
        horizon_ticks=8,
    )


_FACTORIES = {
    TABLE9_LINE_A: _table9_line_a,
    MICRO_3NODE: _micro_3node,
    MICRO_PRESATISFIED: _micro_presatisfied,
}
