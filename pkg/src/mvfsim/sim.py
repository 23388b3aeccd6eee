"""Deterministic recovery simulator.

Runs are pure folds: ``apply_action(state, action) -> (state', event)``.
States are immutable, so any prefix of a run can be replayed or forked
(the exercise service leans on this). Time is integer ticks; each action
kind has a duration from the scenario.

Outcome semantics:

  applied    action performed, effects recorded
  blocked    precondition unmet; no time passes, nothing changes
  violation  action performed unsafely; time passes, effects may apply,
             failure-mode tags attached (FM01..FM09)

Violations never abort a run. That is deliberate: the benchmark's job is
to price bad plans, not to refuse them.

Ground truth (backup contamination, credential exposure) influences
transitions exactly where the rules say so — most visibly, restoring a
contaminated backup yields trust 0 no matter what the responder believed.

`oracle_search` exhaustively explores the bounded plan space and returns
the minimum completion tick of any approved, violation-free run, with one
witness plan. Dominance memoisation and branch-and-bound prune only
provably redundant branches (no-ops, violations, states already reached
at least as early with at least as much budget), so the result equals
literal enumeration of `enumerate_plans`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .actions import (
    ActionKind,
    AUTH_EXEMPT_KINDS,
    MISSION_SUBJECT_KINDS,
    RecoveryAction,
    RecoveryPlan,
)
from .feasibility import (
    EvidenceBundle,
    EvidenceItem,
    EvidenceKind,
    MvfDecision,
    Verdict,
    decide_mvf,
    effective_required_ids,
    evidence_completeness,
)
from .graph import (
    DependencyGraph,
    EdgeRelation,
    NodeKind,
    SafetyStatus,
    bump,
    set_state,
)
from .scenario import ConstraintKind, ResponderView, ScenarioSpec, redact_truth


class Outcome(str, Enum):
    APPLIED = "applied"
    BLOCKED = "blocked"
    VIOLATION = "violation"


class GateStage(str, Enum):
    CLOSED = "closed"
    VALIDATED = "validated"
    OPEN = "open"


#: state_deltas entry: (target, field, old, new) with JSON-safe values.
Delta = tuple[str, str, object, object]


@dataclass(frozen=True)
class SimEvent:
    tick: int
    action: RecoveryAction
    outcome: Outcome
    duration: int
    reason: str = ""
    violation_tags: tuple[str, ...] = ()
    state_deltas: tuple[Delta, ...] = ()
    evidence_added: tuple[EvidenceItem, ...] = ()
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class SimState:
    spec: ScenarioSpec
    mission_id: str
    tick: int
    graph: DependencyGraph
    bundle: EvidenceBundle
    gates: dict[str, GateStage]
    validated_offline: frozenset[str]
    scanned_nodes: frozenset[str]
    scanned_points: frozenset[str]
    revealed: frozenset[str]
    exposed_active: frozenset[str]
    substitutions: dict[str, str]
    degraded_intervals: tuple[tuple[str, int, int | None], ...]
    reconnected: frozenset[str]
    unsafe_reconnects: int
    confirmed: frozenset[str]
    touched: frozenset[str]
    assessed: frozenset[str]
    decisions: dict[str, MvfDecision]
    approved_tick: int | None
    ev_seq: int

    def mission(self):
        return self.spec.mission(self.mission_id)


@dataclass(frozen=True)
class RunResult:
    scenario_id: str
    mission_id: str
    planner_name: str
    events: tuple[SimEvent, ...]
    final: SimState
    seed: int | None = None  # reserved for future stochastic variants

    @property
    def decision(self) -> MvfDecision | None:
        return self.final.decisions.get(self.mission_id)


def initial_state(spec: ScenarioSpec, mission_id: str) -> SimState:
    spec.mission(mission_id)  # raises KeyError for unknown missions
    gates = {
        node.id: GateStage.CLOSED
        for node in spec.graph.nodes
        if node.kind == NodeKind.OT_COMPONENT
    }
    touched = frozenset(
        node_id for node_id, state in spec.graph.states.items() if state.evidence > 0
    )
    return SimState(
        spec=spec,
        mission_id=mission_id,
        tick=0,
        graph=spec.graph,
        bundle=EvidenceBundle(),
        gates=gates,
        validated_offline=frozenset(),
        scanned_nodes=frozenset(),
        scanned_points=frozenset(),
        revealed=frozenset(),
        exposed_active=frozenset(spec.compromise.exposed_credentials),
        substitutions={},
        degraded_intervals=(),
        reconnected=frozenset(),
        unsafe_reconnects=0,
        confirmed=frozenset(),
        touched=touched,
        assessed=frozenset(),
        decisions={},
        approved_tick=None,
        ev_seq=0,
    )


# ---------------------------------------------------------------------------
# Action validation (malformed references are caller errors, not run events)
# ---------------------------------------------------------------------------


def validate_action(spec: ScenarioSpec, action: RecoveryAction) -> None:
    """Raise ValueError/KeyError when the action does not fit the scenario."""
    graph = spec.graph
    kind = action.kind
    point_ids = {p.id for p in spec.restore_points}
    has_identities = bool(graph.nodes_of_kind(NodeKind.IDENTITY))

    if kind in MISSION_SUBJECT_KINDS:
        spec.mission(action.subject)
    elif kind == ActionKind.FORENSIC_SCAN:
        if action.subject not in point_ids and not graph.has_node(action.subject):
            raise KeyError(f"unknown scan subject: {action.subject}")
    elif kind == ActionKind.RESTORE:
        point = spec.restore_point(action.restore_point)
        if point.target_node != action.subject:
            raise ValueError(
                f"restore point {point.id} targets {point.target_node}, not {action.subject}"
            )
    elif kind in (ActionKind.REBUILD_IDENTITY, ActionKind.RESET_CREDENTIALS):
        if graph.node(action.subject).kind != NodeKind.IDENTITY:
            raise ValueError(f"{kind.value} subject must be an identity node: {action.subject}")
    elif kind == ActionKind.VALIDATE_OFFLINE:
        graph.node(action.subject)
    elif kind in (ActionKind.OPEN_GATE, ActionKind.RECONNECT):
        if graph.node(action.subject).kind != NodeKind.OT_COMPONENT:
            raise ValueError(f"{kind.value} subject must be an OT component: {action.subject}")
    elif kind in (ActionKind.ENTER_DEGRADED_MODE, ActionKind.EXIT_DEGRADED_MODE):
        spec.procedure(action.subject)
    elif kind == ActionKind.CONFIRM_SUPPLIER:
        if graph.node(action.subject).kind != NodeKind.EXTERNAL_PARTNER:
            raise ValueError(f"confirm_supplier subject must be an external partner: {action.subject}")

    if kind == ActionKind.ASSESS_MISSION_IMPACT:
        if action.auth_via is not None:
            raise ValueError("assess_mission_impact carries no authentication")
        return
    if action.auth_via is None:
        if has_identities:
            raise ValueError(f"{kind.value} requires auth_via (scenario defines identity nodes)")
        return
    if graph.node(action.auth_via).kind != NodeKind.IDENTITY:
        raise ValueError(f"auth_via must be an identity node: {action.auth_via}")


def validate_plan(spec: ScenarioSpec, plan: RecoveryPlan) -> None:
    spec.mission(plan.mission_id)
    for action in plan.actions:
        validate_action(spec, action)


# ---------------------------------------------------------------------------
# Transition rules
# ---------------------------------------------------------------------------


def _point_evidence(state: SimState, point_id: str) -> int:
    """Effective evidence behind a restore point: verified or scanned -> 2."""
    point = state.spec.restore_point(point_id)
    if point.verified or point_id in state.scanned_points:
        return 2
    return 0


def _connecting_paths(graph: DependencyGraph, ot_id: str) -> tuple[str, ...]:
    return tuple(
        sorted(
            edge.target
            for edge in graph.outgoing(ot_id)
            if edge.relation == EdgeRelation.CONNECTS_VIA
            and graph.node(edge.target).kind == NodeKind.NETWORK_PATH
        )
    )


def _window_blocks(state: SimState, kinds: tuple[ConstraintKind, ...], subject: str, start: int, end: int) -> str:
    """Return a blocking reason when an external constraint forbids the span."""
    for constraint in state.spec.external_constraints:
        if constraint.subject != subject or constraint.kind not in kinds:
            continue
        w_start, w_end = constraint.window
        if constraint.kind == ConstraintKind.SUPPLIER_OUTAGE:
            # Outage window: the action may not overlap it.
            if start < w_end and end > w_start:
                return f"supplier unreachable during outage window {list(constraint.window)}"
        elif constraint.kind == ConstraintKind.VENDOR_ACCESS:
            # Access window: the action must fit inside it.
            if not (w_start <= start and end <= w_end):
                return f"vendor access only available in window {list(constraint.window)}"
    return ""


class _Effects:
    """Mutable scratchpad for one transition; collapses into (state, event)."""

    def __init__(self, state: SimState, action: RecoveryAction, duration: int):
        self.state = state
        self.action = action
        self.duration = duration
        self.completion = state.tick + duration
        self.deltas: list[Delta] = []
        self.items: list[EvidenceItem] = []
        self.tags: list[str] = []
        self.warnings: list[str] = []
        self.changes: dict = {}
        self.graph = state.graph
        self.ev_seq = state.ev_seq

    def set_node(self, node_id: str, **fields) -> None:
        old = self.graph.state(node_id)
        new = bump(old, **fields)
        if new == old:
            return
        for name in ("availability", "trust", "evidence", "safety"):
            old_value, new_value = getattr(old, name), getattr(new, name)
            if old_value != new_value:
                if name == "safety":
                    old_value, new_value = old_value.value, new_value.value
                self.deltas.append((node_id, name, old_value, new_value))
        self.graph = set_state(self.graph, node_id, new)

    def add_item(self, kind: EvidenceKind, subject: str, detail: str) -> None:
        self.ev_seq += 1
        item = EvidenceItem(
            id=f"ev-{self.ev_seq:04d}", kind=kind, subject=subject, detail=detail, tick=self.completion
        )
        self.items.append(item)
        self.deltas.append(("bundle", kind.value, None, subject))

    def note(self, target: str, field_name: str, old, new) -> None:
        self.deltas.append((target, field_name, old, new))

    def touch(self, subject: str) -> None:
        if subject not in self.state.touched:
            self.changes["touched"] = self.state.touched | {subject}

    def blocked(self, reason: str) -> tuple[SimState, SimEvent]:
        event = SimEvent(
            tick=self.state.tick,
            action=self.action,
            outcome=Outcome.BLOCKED,
            duration=0,
            reason=reason,
        )
        return self.state, event

    def done(self) -> tuple[SimState, SimEvent]:
        bundle = self.state.bundle
        for item in self.items:
            bundle = bundle.add(item)
        new_state = replace(
            self.state,
            tick=self.completion,
            graph=self.graph,
            bundle=bundle,
            ev_seq=self.ev_seq,
            **self.changes,
        )
        outcome = Outcome.VIOLATION if self.tags else Outcome.APPLIED
        event = SimEvent(
            tick=self.completion,
            action=self.action,
            outcome=outcome,
            duration=self.duration,
            violation_tags=tuple(dict.fromkeys(self.tags)),
            state_deltas=tuple(self.deltas),
            evidence_added=tuple(self.items),
            warnings=tuple(self.warnings),
        )
        return new_state, event


def apply_action(state: SimState, action: RecoveryAction) -> tuple[SimState, SimEvent]:
    """One transition. Raises only for malformed references; domain problems
    surface as blocked/violation events."""
    validate_action(state.spec, action)
    spec = state.spec
    mission = state.mission()
    kind = action.kind
    duration = spec.action_durations[kind.value]
    fx = _Effects(state, action, duration)

    if fx.completion > spec.horizon_ticks:
        return fx.blocked("horizon exceeded")

    # External windows gate field work on the subject.
    if kind in (ActionKind.RESTORE, ActionKind.VALIDATE_OFFLINE, ActionKind.OPEN_GATE):
        reason = _window_blocks(state, (ConstraintKind.VENDOR_ACCESS,), action.subject, state.tick, fx.completion)
        if reason:
            return fx.blocked(reason)
    if kind == ActionKind.CONFIRM_SUPPLIER:
        reason = _window_blocks(state, (ConstraintKind.SUPPLIER_OUTAGE,), action.subject, state.tick, fx.completion)
        if reason:
            return fx.blocked(reason)

    handler = _HANDLERS[kind]
    result = handler(state, action, fx)
    if result is not None:
        return result

    # Authentication trust check. Performed actions only; identity repair and
    # assessment are exempt (clean-room / paperwork).
    if kind not in AUTH_EXEMPT_KINDS and action.auth_via is not None:
        auth_state = fx.graph.state(action.auth_via)
        if auth_state.trust < mission.thresholds.t_min or action.auth_via in state.exposed_active:
            fx.tags.append("FM03")
            fx.warnings.append(f"authenticated via untrusted identity {action.auth_via}")

    # Prerequisite availability check for bring-online actions.
    if kind in (ActionKind.RESTORE, ActionKind.OPEN_GATE, ActionKind.RECONNECT):
        gaps = _dependency_gaps(state, fx, action.subject)
        if gaps:
            fx.warnings.append("dependency gap: " + ", ".join(gaps))

    return fx.done()


def _dependency_gaps(state: SimState, fx: _Effects, subject: str) -> list[str]:
    mission = state.mission()
    try:
        required = set(effective_required_ids(state.graph, mission, state.substitutions))
    except Exception:
        return []
    gaps = []
    for edge in state.graph.outgoing(subject):
        dep = edge.target
        if dep not in required or dep in state.substitutions:
            continue
        if fx.graph.state(dep).availability < mission.thresholds.a_min:
            gaps.append(dep)
    return sorted(set(gaps))


# -- per-kind handlers; returning a (state, event) pair short-circuits (blocked),
#    returning None lets the shared auth/prereq checks and fx.done() finish up.


def _do_assess(state: SimState, action: RecoveryAction, fx: _Effects):
    mission = state.spec.mission(action.subject)
    required = effective_required_ids(state.graph, mission, state.substitutions)
    fx.changes["assessed"] = state.assessed | {mission.id}
    fx.add_item(
        EvidenceKind.DEPENDENCY_CONSISTENCY,
        mission.id,
        f"dependency closure reviewed: {len(required)} nodes",
    )
    fx.note("mission:" + mission.id, "assessed", False, True)
    return None


def _do_scan(state: SimState, action: RecoveryAction, fx: _Effects):
    subject = action.subject
    point_ids = {p.id for p in state.spec.restore_points}
    if subject in point_ids:
        point = state.spec.restore_point(subject)
        fx.changes["scanned_points"] = state.scanned_points | {subject}
        fx.changes["revealed"] = state.revealed | {subject}
        verdict = "contaminated" if point.truth_contaminated else "clean"
        fx.add_item(
            EvidenceKind.COMPROMISE_ASSESSMENT,
            point.target_node,
            f"scan of {point.id}: {verdict}",
        )
        fx.note("point:" + subject, "scanned", False, verdict)
        fx.touch(point.target_node)
        return None
    node_state = state.graph.state(subject)
    compromise = state.spec.compromise
    indicators = []
    if subject in compromise.encrypted_nodes:
        indicators.append("encryption artifacts")
    if subject in state.exposed_active:
        indicators.append("exposed credentials")
    if any(subject in pair for pair in compromise.lateral_movement_paths):
        indicators.append("lateral movement traces")
    fx.set_node(subject, evidence=max(node_state.evidence, 2))
    fx.changes["scanned_nodes"] = state.scanned_nodes | {subject}
    fx.changes["revealed"] = state.revealed | {subject}
    detail = "; ".join(indicators) if indicators else "no current compromise indicators"
    fx.add_item(EvidenceKind.COMPROMISE_ASSESSMENT, subject, detail)
    fx.touch(subject)
    return None


def _do_restore(state: SimState, action: RecoveryAction, fx: _Effects):
    point = state.spec.restore_point(action.restore_point)
    node_state = state.graph.state(action.subject)
    mission = state.mission()

    if point.truth_contaminated:
        trust = 0
    elif point.verified or point.id in state.scanned_points:
        trust = 2
    else:
        trust = 1
    fx.set_node(action.subject, availability=max(node_state.availability, 2), trust=trust)

    if _point_evidence(state, point.id) < mission.thresholds.e_min:
        fx.tags.append("FM02")
        fx.warnings.append(f"restore source {point.id} has no compromise assessment")
    fx.add_item(
        EvidenceKind.RESTORE_SOURCE,
        action.subject,
        f"restored from {point.id} (age {point.age_ticks}, {point.completeness.value})",
    )
    fx.touch(action.subject)
    return None


def _do_identity_fix(state: SimState, action: RecoveryAction, fx: _Effects):
    node_state = state.graph.state(action.subject)
    fx.set_node(
        action.subject,
        trust=max(node_state.trust, 3),
        evidence=max(node_state.evidence, 2),
    )
    if action.subject in state.exposed_active:
        fx.changes["exposed_active"] = state.exposed_active - {action.subject}
        fx.note("exposure:" + action.subject, "cleared", True, False)
    verb = "rebuilt" if action.kind == ActionKind.REBUILD_IDENTITY else "credentials reset"
    fx.add_item(EvidenceKind.IDENTITY_STATE, action.subject, verb)
    fx.touch(action.subject)
    return None


def _do_validate(state: SimState, action: RecoveryAction, fx: _Effects):
    node = state.graph.node(action.subject)
    node_state = state.graph.state(action.subject)
    evidence = 3 if action.subject in state.scanned_nodes else max(node_state.evidence, 2)
    fx.set_node(action.subject, evidence=max(node_state.evidence, evidence))
    fx.changes["validated_offline"] = state.validated_offline | {action.subject}
    if node.kind == NodeKind.OT_COMPONENT and state.gates.get(action.subject) == GateStage.CLOSED:
        gates = dict(state.gates)
        gates[action.subject] = GateStage.VALIDATED
        fx.changes["gates"] = gates
        fx.note("gate:" + action.subject, "stage", GateStage.CLOSED.value, GateStage.VALIDATED.value)
    fx.add_item(EvidenceKind.CONFIGURATION_VALIDATION, action.subject, "validated offline")
    fx.touch(action.subject)
    return None


def _do_open_gate(state: SimState, action: RecoveryAction, fx: _Effects):
    subject = action.subject
    stage = state.gates.get(subject, GateStage.CLOSED)
    if stage == GateStage.OPEN:
        return fx.blocked("gate already open")
    if subject not in state.validated_offline:
        return fx.blocked(f"{subject} has not been validated offline")
    paths = _connecting_paths(state.graph, subject)
    for path in paths:
        if path not in state.validated_offline:
            return fx.blocked(f"connecting path {path} has not been validated offline")
    gates = dict(state.gates)
    gates[subject] = GateStage.OPEN
    fx.changes["gates"] = gates
    fx.note("gate:" + subject, "stage", stage.value, GateStage.OPEN.value)
    fx.add_item(EvidenceKind.OT_REINTEGRATION_CHECK, subject, "gate validated and opened")
    fx.touch(subject)
    return None


def _do_reconnect(state: SimState, action: RecoveryAction, fx: _Effects):
    subject = action.subject
    node_state = state.graph.state(subject)
    if node_state.safety == SafetyStatus.APPROVED:
        return fx.blocked("already reconnected")
    if state.gates.get(subject) == GateStage.OPEN:
        fx.set_node(subject, safety=SafetyStatus.APPROVED)
        fx.changes["reconnected"] = state.reconnected | {subject}
        return None
    # Reconnecting around a closed gate happens; it just gets priced.
    fx.tags.append("FM05")
    fx.warnings.append(f"reconnect attempted without an open gate on {subject}")
    fx.changes["unsafe_reconnects"] = state.unsafe_reconnects + 1
    for path in _connecting_paths(state.graph, subject):
        if state.graph.state(path).evidence == 0:
            fx.tags.append("FM06")
            fx.warnings.append(f"traffic pushed over unvalidated path {path}")
    return None


def _do_enter_degraded(state: SimState, action: RecoveryAction, fx: _Effects):
    procedure = state.spec.procedure(action.subject)
    mission = state.mission()
    if procedure.id not in mission.degraded_limits:
        return fx.blocked(f"procedure {procedure.id} is not allowed for mission {mission.id}")
    if any(p == procedure.id and end is None for p, _, end in state.degraded_intervals):
        return fx.blocked(f"procedure {procedure.id} already active")
    approver_state = state.graph.state(procedure.requires_approval_by)
    if approver_state.availability < 2:
        return fx.blocked(f"approver {procedure.requires_approval_by} unavailable")
    substitutions = dict(state.substitutions)
    substitutions[procedure.substitutes_for] = procedure.id
    fx.changes["substitutions"] = substitutions
    fx.changes["degraded_intervals"] = state.degraded_intervals + ((procedure.id, fx.completion, None),)
    fx.note("degraded:" + procedure.id, "active", False, True)
    fx.note("substitution:" + procedure.substitutes_for, "procedure", None, procedure.id)
    fx.add_item(
        EvidenceKind.DEGRADED_MODE_LIMITS,
        procedure.id,
        f"substitutes {procedure.substitutes_for}; max {procedure.max_duration_ticks} ticks; "
        f"on expiry {procedure.expiry_action.value}; approved by {procedure.requires_approval_by}",
    )
    return None


def _close_interval(intervals, procedure_id: str, end: int):
    out = []
    for proc, start, stop in intervals:
        if proc == procedure_id and stop is None:
            out.append((proc, start, end))
        else:
            out.append((proc, start, stop))
    return tuple(out)


def _do_exit_degraded(state: SimState, action: RecoveryAction, fx: _Effects):
    procedure = state.spec.procedure(action.subject)
    if not any(p == procedure.id and end is None for p, _, end in state.degraded_intervals):
        return fx.blocked(f"procedure {procedure.id} is not active")
    substitutions = {
        node: proc for node, proc in state.substitutions.items() if proc != procedure.id
    }
    fx.changes["substitutions"] = substitutions
    fx.changes["degraded_intervals"] = _close_interval(state.degraded_intervals, procedure.id, fx.completion)
    fx.note("degraded:" + procedure.id, "active", True, False)
    for node, proc in sorted(state.substitutions.items()):
        if proc == procedure.id:
            fx.note("substitution:" + node, "procedure", proc, None)
    return None


def _do_confirm_supplier(state: SimState, action: RecoveryAction, fx: _Effects):
    node_state = state.graph.state(action.subject)
    fx.set_node(
        action.subject,
        availability=max(node_state.availability, 2),
        evidence=max(node_state.evidence, 2),
    )
    fx.changes["confirmed"] = state.confirmed | {action.subject}
    fx.add_item(
        EvidenceKind.DEPENDENCY_CONSISTENCY,
        action.subject,
        "supplier confirmed over manual channel",
    )
    fx.touch(action.subject)
    return None


def _do_declare(state: SimState, action: RecoveryAction, fx: _Effects):
    mission = state.spec.mission(action.subject)
    decision = decide_mvf(
        fx.graph, mission, state.bundle, state.substitutions, state.unsafe_reconnects
    )

    required = effective_required_ids(fx.graph, mission, state.substitutions)
    unassessed = [
        node_id
        for node_id in required
        if node_id not in state.substitutions
        and fx.graph.state(node_id).evidence == 0
        and node_id not in state.touched
    ]
    if unassessed:
        fx.tags.append("FM01")
        fx.warnings.append("declared with never-assessed dependencies: " + ", ".join(unassessed))
    completeness = evidence_completeness(state.bundle, mission, fx.graph, state.substitutions)
    if completeness < mission.min_evidence_completeness:
        fx.tags.append("FM04")
        fx.warnings.append(f"declared with evidence completeness {completeness:.2f}")
    for node_id in required:
        node = fx.graph.node(node_id)
        if (
            node.kind == NodeKind.EXTERNAL_PARTNER
            and node_id not in state.substitutions
            and fx.graph.state(node_id).availability < mission.thresholds.a_min
        ):
            fx.tags.append("FM09")
            fx.warnings.append(f"external partner {node_id} unavailable and not substituted")

    decisions = dict(state.decisions)
    decisions[mission.id] = decision
    fx.changes["decisions"] = decisions
    fx.note("mission:" + mission.id, "verdict", None, decision.verdict.value)

    if decision.verdict == Verdict.APPROVED:
        if state.approved_tick is None:
            fx.changes["approved_tick"] = fx.completion
        fx.add_item(
            EvidenceKind.MONITORING_PLAN,
            mission.id,
            "; ".join(mission.monitoring_rollback),
        )
        open_points = [
            p.id
            for p in state.spec.restore_points
            if p.id not in state.scanned_points and not p.verified
        ]
        active = sorted(p for p, _, end in state.degraded_intervals if end is None)
        risk_bits = []
        if open_points:
            risk_bits.append("unassessed restore points: " + ", ".join(sorted(open_points)))
        if active:
            risk_bits.append("active degraded procedures: " + ", ".join(active))
        fx.add_item(
            EvidenceKind.RESIDUAL_RISK,
            mission.id,
            "; ".join(risk_bits) if risk_bits else "no open risk items recorded",
        )
    return None


def _do_rollback(state: SimState, action: RecoveryAction, fx: _Effects):
    mission = state.spec.mission(action.subject)
    required = effective_required_ids(state.graph, mission, state.substitutions)
    fx.changes["substitutions"] = {}
    fx.changes["degraded_intervals"] = tuple(
        (proc, start, fx.completion if end is None else end)
        for proc, start, end in state.degraded_intervals
    )
    for proc, _, end in state.degraded_intervals:
        if end is None:
            fx.note("degraded:" + proc, "active", True, False)
    for node, proc in sorted(state.substitutions.items()):
        fx.note("substitution:" + node, "procedure", proc, None)
    reconnected = set(state.reconnected)
    for node_id in required:
        if node_id in state.reconnected:
            fx.set_node(node_id, safety=SafetyStatus.BLOCKED)
            reconnected.discard(node_id)
    fx.changes["reconnected"] = frozenset(reconnected)
    fx.note("mission:" + mission.id, "rolled_back", False, True)
    return None


_HANDLERS = {
    ActionKind.ASSESS_MISSION_IMPACT: _do_assess,
    ActionKind.FORENSIC_SCAN: _do_scan,
    ActionKind.RESTORE: _do_restore,
    ActionKind.REBUILD_IDENTITY: _do_identity_fix,
    ActionKind.RESET_CREDENTIALS: _do_identity_fix,
    ActionKind.VALIDATE_OFFLINE: _do_validate,
    ActionKind.OPEN_GATE: _do_open_gate,
    ActionKind.RECONNECT: _do_reconnect,
    ActionKind.ENTER_DEGRADED_MODE: _do_enter_degraded,
    ActionKind.EXIT_DEGRADED_MODE: _do_exit_degraded,
    ActionKind.CONFIRM_SUPPLIER: _do_confirm_supplier,
    ActionKind.DECLARE_MVF: _do_declare,
    ActionKind.ROLLBACK: _do_rollback,
}


def run_plan(spec: ScenarioSpec, plan: RecoveryPlan) -> RunResult:
    """Execute a plan start to finish. Deterministic: same spec + plan give
    byte-identical serialized results."""
    validate_plan(spec, plan)
    state = initial_state(spec, plan.mission_id)
    events: list[SimEvent] = []
    for action in plan.actions:
        state, event = apply_action(state, action)
        events.append(event)
    return RunResult(
        scenario_id=spec.id,
        mission_id=plan.mission_id,
        planner_name=plan.planner_name,
        events=tuple(events),
        final=state,
    )


# ---------------------------------------------------------------------------
# Event serialization (the log is the contract: metrics recompute from it)
# ---------------------------------------------------------------------------


def event_to_json(event: SimEvent) -> dict:
    from .actions import action_to_json

    return {
        "tick": event.tick,
        "action": action_to_json(event.action),
        "outcome": event.outcome.value,
        "duration": event.duration,
        "reason": event.reason,
        "violation_tags": list(event.violation_tags),
        "state_deltas": [list(delta) for delta in event.state_deltas],
        "evidence_added": [
            {
                "id": item.id,
                "kind": item.kind.value,
                "subject": item.subject,
                "detail": item.detail,
                "tick": item.tick,
            }
            for item in event.evidence_added
        ],
        "warnings": list(event.warnings),
    }


def event_from_json(payload: dict) -> SimEvent:
    from .actions import action_from_json

    return SimEvent(
        tick=payload["tick"],
        action=action_from_json(payload["action"]),
        outcome=Outcome(payload["outcome"]),
        duration=payload["duration"],
        reason=payload.get("reason", ""),
        violation_tags=tuple(payload.get("violation_tags", ())),
        state_deltas=tuple(tuple(delta) for delta in payload.get("state_deltas", ())),
        evidence_added=tuple(
            EvidenceItem(
                id=item["id"],
                kind=EvidenceKind(item["kind"]),
                subject=item["subject"],
                detail=item.get("detail", ""),
                tick=item.get("tick", 0),
            )
            for item in payload.get("evidence_added", ())
        ),
        warnings=tuple(payload.get("warnings", ())),
    )


# ---------------------------------------------------------------------------
# Exhaustive search oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OracleResult:
    scenario_id: str
    mission_id: str
    max_len: int
    min_ticks: int | None
    witness: RecoveryPlan | None
    explored: int


def _state_key(state: SimState):
    return (
        tuple(sorted((nid, s.availability, s.trust, s.evidence, s.safety.value) for nid, s in state.graph.states.items())),
        tuple(sorted((nid, stage.value) for nid, stage in state.gates.items())),
        frozenset(state.substitutions.items()),
        state.exposed_active,
        state.scanned_points,
        state.scanned_nodes,
        state.validated_offline,
        state.reconnected,
        state.confirmed,
        state.touched,
        state.assessed,
        frozenset((item.kind.value, item.subject) for item in state.bundle.items),
    )


def oracle_search(
    spec: ScenarioSpec,
    mission_id: str,
    max_len: int = 12,
    upper_bound: int | None = None,
) -> OracleResult:
    """Minimum completion tick over all bounded plans that end approved with
    zero violations, plus one witness plan (first minimal plan in canonical
    enumeration order). min_ticks is None when no such plan exists.

    `upper_bound`, when given, prunes branches strictly above it; a correct
    bound (e.g. an achieved planner time) only speeds things up.
    """
    from .planners import action_vocabulary, check_enumeration_bounds

    view = redact_truth(spec)
    vocabulary = action_vocabulary(view, mission_id)
    check_enumeration_bounds(max_len, len(vocabulary))

    start = initial_state(spec, mission_id)
    best_ticks: int | None = None
    best_plan: list[RecoveryAction] | None = None
    explored = 0
    # state key -> list of non-dominated (tick, depth) visits
    seen: dict[object, list[tuple[int, int]]] = {}

    def dominated(key, tick: int, depth: int) -> bool:
        visits = seen.get(key)
        if visits is None:
            seen[key] = [(tick, depth)]
            return False
        for v_tick, v_depth in visits:
            if v_tick <= tick and v_depth <= depth:
                return True
        visits[:] = [(t, d) for t, d in visits if not (tick <= t and depth <= d)]
        visits.append((tick, depth))
        return False

    def walk(state: SimState, depth: int, prefix: list[RecoveryAction]) -> None:
        nonlocal best_ticks, best_plan, explored
        if depth >= max_len:
            return
        for action in vocabulary:
            bound = best_ticks if best_ticks is not None else upper_bound
            if bound is not None and state.tick > bound:
                return
            new_state, event = apply_action(state, action)
            explored += 1
            if event.outcome == Outcome.BLOCKED:
                continue
            if event.violation_tags:
                continue
            if bound is not None and new_state.tick > bound:
                continue
            if best_ticks is not None and new_state.tick >= best_ticks:
                continue
            prefix.append(action)
            if action.kind == ActionKind.DECLARE_MVF:
                decision = new_state.decisions.get(mission_id)
                if decision is not None and decision.verdict == Verdict.APPROVED:
                    best_ticks = new_state.tick
                    best_plan = list(prefix)
                    prefix.pop()
                    continue
            if _state_key(new_state) == _state_key(state):
                prefix.pop()
                continue
            if not dominated(_state_key(new_state), new_state.tick, depth + 1):
                walk(new_state, depth + 1, prefix)
            prefix.pop()

    walk(start, 0, [])

    witness = None
    if best_plan is not None:
        witness = RecoveryPlan(planner_name="oracle", mission_id=mission_id, actions=tuple(best_plan))
    return OracleResult(
        scenario_id=spec.id,
        mission_id=mission_id,
        max_len=max_len,
        min_ticks=best_ticks,
        witness=witness,
        explored=explored,
    )
