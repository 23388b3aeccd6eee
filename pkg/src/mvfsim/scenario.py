"""Scenario documents: plant graph + compromise + backups + missions.

A scenario is everything the benchmark needs to replay an incident:

  * the dependency graph with initial recovery states,
  * the compromise ground truth (what the attacker actually touched),
  * the restore point catalog,
  * degraded procedures (manual workarounds with approvals and limits),
  * external constraints (supplier outages, deadlines, vendor windows),
  * one or more candidate missions,
  * action durations and the planning horizon.

Wire format is UTF-8 JSON with a mandatory ``"format": "mvf-scenario/1"``
marker. Parsing is strict: unknown keys are rejected, and every problem is
reported as a diagnostic with a path (and a line for syntax errors) rather
than as a bare exception message.

Ground truth fields are prefixed ``truth_`` or live in dedicated sets
(contaminated_backups, lateral_movement_paths). `redact_truth` strips them
into a ResponderView, which is the only thing planners and exercise
participants ever see.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from enum import Enum

from .actions import ActionKind, DEFAULT_ACTION_DURATIONS
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
    validate_graph,
)

SCENARIO_FORMAT = "mvf-scenario/1"

_TOP_LEVEL_KEYS = {
    "format",
    "id",
    "graph",
    "compromise",
    "restore_points",
    "degraded_procedures",
    "external_constraints",
    "missions",
    "action_durations",
    "horizon_ticks",
}


class ConstraintKind(str, Enum):
    SUPPLIER_OUTAGE = "supplier_outage"
    CUSTOMER_DEADLINE = "customer_deadline"
    REGULATORY_REQUIREMENT = "regulatory_requirement"
    VENDOR_ACCESS = "vendor_access"


class ExpiryAction(str, Enum):
    ROLLBACK = "rollback"
    ESCALATE = "escalate"


class BackupCompleteness(str, Enum):
    COMPLETE = "complete"
    PARTIAL = "partial"


@dataclass(frozen=True)
class RestorePoint:
    id: str
    target_node: str
    age_ticks: int
    truth_contaminated: bool
    verified: bool
    completeness: BackupCompleteness = BackupCompleteness.COMPLETE
    verification_tag: str | None = None

    def __post_init__(self) -> None:
        if self.age_ticks < 0:
            raise ValueError(f"restore point {self.id}: age_ticks must be >= 0")
        if self.verified and not self.verification_tag:
            raise ValueError(f"restore point {self.id}: verified=true requires a verification_tag")


@dataclass(frozen=True)
class CompromiseState:
    """Attacker ground truth. Everything here except the first two fields
    and the visibility set is hidden from responders until debrief."""

    encrypted_nodes: tuple[str, ...] = ()
    exposed_credentials: tuple[str, ...] = ()
    contaminated_backups: tuple[str, ...] = ()
    lateral_movement_paths: tuple[tuple[str, str], ...] = ()
    ot_visibility_uncertain: tuple[str, ...] = ()


@dataclass(frozen=True)
class DegradedProcedure:
    id: str
    substitutes_for: str
    max_duration_ticks: int
    requires_approval_by: str
    expiry_action: ExpiryAction

    def __post_init__(self) -> None:
        if self.max_duration_ticks <= 0:
            raise ValueError(f"degraded procedure {self.id}: max_duration_ticks must be positive")


@dataclass(frozen=True)
class ExternalConstraint:
    id: str
    kind: ConstraintKind
    subject: str
    window: tuple[int, int]  # [start, end) in ticks

    def __post_init__(self) -> None:
        start, end = self.window
        if start < 0 or end <= start:
            raise ValueError(f"external constraint {self.id}: window must satisfy 0 <= start < end")


@dataclass(frozen=True)
class ScenarioSpec:
    id: str
    graph: DependencyGraph
    compromise: CompromiseState
    restore_points: tuple[RestorePoint, ...]
    degraded_procedures: tuple[DegradedProcedure, ...]
    external_constraints: tuple[ExternalConstraint, ...]
    missions: tuple[Mission, ...]
    action_durations: dict[str, int]
    horizon_ticks: int

    def restore_point(self, point_id: str) -> RestorePoint:
        for point in self.restore_points:
            if point.id == point_id:
                return point
        raise KeyError(f"unknown restore point: {point_id}")

    def restore_points_for(self, node_id: str) -> tuple[RestorePoint, ...]:
        return tuple(p for p in self.restore_points if p.target_node == node_id)

    def procedure(self, procedure_id: str) -> DegradedProcedure:
        for procedure in self.degraded_procedures:
            if procedure.id == procedure_id:
                return procedure
        raise KeyError(f"unknown degraded procedure: {procedure_id}")

    def mission(self, mission_id: str) -> Mission:
        for mission in self.missions:
            if mission.id == mission_id:
                return mission
        raise KeyError(f"unknown mission: {mission_id}")

    def duration_of(self, kind: ActionKind) -> int:
        return self.action_durations[kind.value]


@dataclass(frozen=True)
class Diagnostic:
    path: str
    message: str
    line: int | None = None

    def render(self) -> str:
        location = f" (line {self.line})" if self.line is not None else ""
        return f"{self.path}: {self.message}{location}"


class ScenarioFormatError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = tuple(diagnostics)
        super().__init__("; ".join(d.render() for d in diagnostics) or "invalid scenario")


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


class _Reader:
    """Collects diagnostics while walking the document."""

    def __init__(self) -> None:
        self.diagnostics: list[Diagnostic] = []

    def error(self, path: str, message: str) -> None:
        self.diagnostics.append(Diagnostic(path=path, message=message))

    def require_keys(self, path: str, obj: dict, allowed: set[str], required: set[str]) -> bool:
        ok = True
        unknown = set(obj) - allowed
        for key in sorted(unknown):
            self.error(f"{path}.{key}", "unknown key")
            ok = False
        for key in sorted(required - set(obj)):
            self.error(path, f"missing key {key!r}")
            ok = False
        return ok

    def str_field(self, path: str, obj: dict, key: str, default=None) -> str | None:
        value = obj.get(key, default)
        if not isinstance(value, str) or not value:
            self.error(f"{path}.{key}", "must be a non-empty string")
            return None
        return value

    def int_field(self, path: str, obj: dict, key: str, minimum: int | None = None) -> int | None:
        value = obj.get(key)
        if not isinstance(value, int) or isinstance(value, bool):
            self.error(f"{path}.{key}", "must be an integer")
            return None
        if minimum is not None and value < minimum:
            self.error(f"{path}.{key}", f"must be >= {minimum}")
            return None
        return value

    def bool_field(self, path: str, obj: dict, key: str) -> bool | None:
        value = obj.get(key)
        if not isinstance(value, bool):
            self.error(f"{path}.{key}", "must be a boolean")
            return None
        return value

    def str_list(self, path: str, value) -> list[str] | None:
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            self.error(path, "must be a list of strings")
            return None
        return value


def parse_scenario(text: str) -> ScenarioSpec:
    """Parse and validate a scenario document. Raises ScenarioFormatError
    carrying the full diagnostic list on any problem."""
    spec, diagnostics = try_parse_scenario(text)
    if spec is None:
        raise ScenarioFormatError(diagnostics)
    return spec


def _path_lines(text: str) -> dict[str, int]:
    """Map every JSON path in `text` to the line its value starts on.

    Only called on text json.loads already accepted, so the lexer can lean
    on well-formedness. First occurrence wins for duplicate keys.
    """
    lines: dict[str, int] = {}
    stack: list[list] = []  # ["obj", key] or ["arr", index]
    line = 1
    i = 0
    length = len(text)

    def record() -> None:
        parts = ["$"]
        for kind, label in stack:
            parts.append(f".{label}" if kind == "obj" else f"[{label}]")
        lines.setdefault("".join(parts), line)

    while i < length:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
        elif ch in " \t\r":
            i += 1
        elif ch == '"':
            start = i
            i += 1
            while i < length:
                if text[i] == "\\":
                    i += 2
                elif text[i] == '"':
                    i += 1
                    break
                else:
                    i += 1
            j = i
            while j < length and text[j] in " \t\r\n":
                j += 1
            if j < length and text[j] == ":" and stack and stack[-1][0] == "obj":
                stack[-1][1] = json.loads(text[start:i])
            else:
                record()
        elif ch == "{":
            record()
            stack.append(["obj", ""])
            i += 1
        elif ch == "[":
            record()
            stack.append(["arr", 0])
            i += 1
        elif ch in "}]":
            stack.pop()
            i += 1
        elif ch == ",":
            if stack and stack[-1][0] == "arr":
                stack[-1][1] += 1
            i += 1
        elif ch == ":":
            i += 1
        else:  # number / true / false / null
            record()
            while i < length and text[i] not in ",}] \t\r\n":
                i += 1
    return lines


_PATH_TAIL = re.compile(r"(\.[^.\[\]]+|\[\d+\])$")


def _with_lines(diagnostics: list[Diagnostic], text: str) -> list[Diagnostic]:
    """Backfill line numbers by resolving each diagnostic path, falling back
    to enclosing containers when the exact path names nothing in the text
    (unknown-key reports point at keys that do exist, missing-key reports
    point at parents)."""
    if not diagnostics:
        return diagnostics
    located = _path_lines(text)
    out = []
    for diagnostic in diagnostics:
        if diagnostic.line is not None:
            out.append(diagnostic)
            continue
        probe = diagnostic.path
        while probe and probe not in located:
            shorter = _PATH_TAIL.sub("", probe)
            probe = shorter if shorter != probe else ""
        out.append(replace(diagnostic, line=located.get(probe or "$")))
    return out


def try_parse_scenario(text: str) -> tuple[ScenarioSpec | None, list[Diagnostic]]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        return None, [Diagnostic(path="$", message=f"not valid JSON: {exc.msg}", line=exc.lineno)]

    if not isinstance(payload, dict):
        return None, [Diagnostic(path="$", message="top level must be an object")]

    reader = _Reader()
    reader.require_keys("$", payload, _TOP_LEVEL_KEYS, _TOP_LEVEL_KEYS)

    if payload.get("format") != SCENARIO_FORMAT and "format" in payload:
        reader.error("$.format", f"must be {SCENARIO_FORMAT!r}, got {payload.get('format')!r}")

    scenario_id = reader.str_field("$", payload, "id") if "id" in payload else None

    graph = _parse_graph(reader, payload.get("graph"))
    node_ids = {n.id for n in graph.nodes} if graph else set()
    identity_ids = {n.id for n in graph.nodes if n.kind == NodeKind.IDENTITY} if graph else set()
    person_ids = {n.id for n in graph.nodes if n.kind == NodeKind.PERSON} if graph else set()

    restore_points = _parse_restore_points(reader, payload.get("restore_points"), node_ids)
    compromise = _parse_compromise(
        reader, payload.get("compromise"), node_ids, identity_ids, {p.id for p in restore_points}
    )
    _check_contamination_consistency(reader, compromise, restore_points)

    procedures = _parse_procedures(reader, payload.get("degraded_procedures"), node_ids, person_ids)
    constraints = _parse_constraints(reader, payload.get("external_constraints"), node_ids)
    missions = _parse_missions(reader, payload.get("missions"), node_ids, {p.id for p in procedures})
    durations = _parse_durations(reader, payload.get("action_durations"))
    horizon = reader.int_field("$", payload, "horizon_ticks", minimum=1) if "horizon_ticks" in payload else None

    if reader.diagnostics or graph is None or scenario_id is None or horizon is None:
        problems = reader.diagnostics or [Diagnostic(path="$", message="invalid scenario")]
        return None, _with_lines(problems, text)

    spec = ScenarioSpec(
        id=scenario_id,
        graph=graph,
        compromise=compromise,
        restore_points=tuple(sorted(restore_points, key=lambda p: p.id)),
        degraded_procedures=tuple(sorted(procedures, key=lambda p: p.id)),
        external_constraints=tuple(sorted(constraints, key=lambda c: c.id)),
        missions=tuple(sorted(missions, key=lambda m: m.id)),
        action_durations=durations,
        horizon_ticks=horizon,
    )
    return spec, []


def _parse_graph(reader: _Reader, payload) -> DependencyGraph | None:
    if not isinstance(payload, dict):
        reader.error("$.graph", "must be an object")
        return None
    reader.require_keys("$.graph", payload, {"nodes", "edges", "states"}, {"nodes", "edges", "states"})

    nodes: list[DependencyNode] = []
    raw_nodes = payload.get("nodes")
    if not isinstance(raw_nodes, list):
        reader.error("$.graph.nodes", "must be a list")
        raw_nodes = []
    for index, raw in enumerate(raw_nodes):
        path = f"$.graph.nodes[{index}]"
        if not isinstance(raw, dict):
            reader.error(path, "must be an object")
            continue
        if not reader.require_keys(path, raw, {"id", "kind", "name", "criticality"}, {"id", "kind", "name", "criticality"}):
            continue
        node_id = reader.str_field(path, raw, "id")
        name = reader.str_field(path, raw, "name")
        criticality = reader.int_field(path, raw, "criticality")
        kind_raw = raw.get("kind")
        try:
            kind = NodeKind(kind_raw)
        except ValueError:
            reader.error(f"{path}.kind", f"unknown node kind {kind_raw!r}")
            continue
        if node_id is None or name is None or criticality is None:
            continue
        try:
            nodes.append(DependencyNode(id=node_id, kind=kind, name=name, criticality=criticality))
        except ValueError as exc:
            reader.error(path, str(exc))

    edges: list[DependencyEdge] = []
    raw_edges = payload.get("edges")
    if not isinstance(raw_edges, list):
        reader.error("$.graph.edges", "must be a list")
        raw_edges = []
    for index, raw in enumerate(raw_edges):
        path = f"$.graph.edges[{index}]"
        if not isinstance(raw, dict):
            reader.error(path, "must be an object")
            continue
        if not reader.require_keys(path, raw, {"source", "target", "relation"}, {"source", "target", "relation"}):
            continue
        source = reader.str_field(path, raw, "source")
        target = reader.str_field(path, raw, "target")
        relation_raw = raw.get("relation")
        try:
            relation = EdgeRelation(relation_raw)
        except ValueError:
            reader.error(f"{path}.relation", f"unknown relation {relation_raw!r}")
            continue
        if source is None or target is None:
            continue
        edges.append(DependencyEdge(source=source, target=target, relation=relation))

    states: dict[str, RecoveryState] = {}
    raw_states = payload.get("states")
    if not isinstance(raw_states, dict):
        reader.error("$.graph.states", "must be an object")
        raw_states = {}
    for node_id, raw in sorted(raw_states.items()):
        path = f"$.graph.states.{node_id}"
        if not isinstance(raw, dict):
            reader.error(path, "must be an object")
            continue
        keys = {"availability", "trust", "evidence", "safety"}
        if not reader.require_keys(path, raw, keys, keys):
            continue
        availability = reader.int_field(path, raw, "availability")
        trust = reader.int_field(path, raw, "trust")
        evidence = reader.int_field(path, raw, "evidence")
        safety_raw = raw.get("safety")
        try:
            safety = SafetyStatus(safety_raw)
        except ValueError:
            reader.error(f"{path}.safety", f"unknown safety status {safety_raw!r}")
            continue
        if availability is None or trust is None or evidence is None:
            continue
        try:
            states[node_id] = RecoveryState(
                availability=availability, trust=trust, evidence=evidence, safety=safety
            )
        except ValueError as exc:
            reader.error(path, str(exc))

    node_ids = {n.id for n in nodes}
    for node_id in sorted(states):
        if node_id not in node_ids:
            reader.error(f"$.graph.states.{node_id}", "state for unknown node")
    for node in nodes:
        if node.id not in states:
            reader.error("$.graph.states", f"missing state for node {node.id}")

    graph = DependencyGraph.build(nodes, edges, states)
    result = validate_graph(graph)
    for violation in result.violations:
        if violation.code in ("missing-state", "orphan-state"):
            continue  # already reported with better paths above
        reader.error(f"$.graph({violation.code})", violation.message)
    return graph


def _parse_compromise(reader, payload, node_ids, identity_ids, point_ids) -> CompromiseState:
    if not isinstance(payload, dict):
        reader.error("$.compromise", "must be an object")
        return CompromiseState()
    keys = {
        "encrypted_nodes",
        "exposed_credentials",
        "contaminated_backups",
        "lateral_movement_paths",
        "ot_visibility_uncertain",
    }
    reader.require_keys("$.compromise", payload, keys, keys)

    def ids_field(key: str, universe: set[str], describe: str) -> tuple[str, ...]:
        values = reader.str_list(f"$.compromise.{key}", payload.get(key, []))
        if values is None:
            return ()
        for value in values:
            if value not in universe:
                reader.error(f"$.compromise.{key}", f"unknown {describe} {value!r}")
        return tuple(sorted(set(values)))

    encrypted = ids_field("encrypted_nodes", node_ids, "node")
    exposed = ids_field("exposed_credentials", node_ids, "node")
    for node_id in exposed:
        if node_id not in identity_ids:
            reader.error("$.compromise.exposed_credentials", f"{node_id} is not an identity node")
    contaminated = ids_field("contaminated_backups", point_ids, "restore point")
    uncertain = ids_field("ot_visibility_uncertain", node_ids, "node")

    lateral: list[tuple[str, str]] = []
    raw_lateral = payload.get("lateral_movement_paths", [])
    if not isinstance(raw_lateral, list):
        reader.error("$.compromise.lateral_movement_paths", "must be a list of [from, to] pairs")
    else:
        for index, pair in enumerate(raw_lateral):
            path = f"$.compromise.lateral_movement_paths[{index}]"
            if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(p, str) for p in pair)):
                reader.error(path, "must be a [from, to] pair of node ids")
                continue
            for node_id in pair:
                if node_id not in node_ids:
                    reader.error(path, f"unknown node {node_id!r}")
            lateral.append((pair[0], pair[1]))

    return CompromiseState(
        encrypted_nodes=encrypted,
        exposed_credentials=exposed,
        contaminated_backups=contaminated,
        lateral_movement_paths=tuple(sorted(set(lateral))),
        ot_visibility_uncertain=uncertain,
    )


def _check_contamination_consistency(reader, compromise, restore_points) -> None:
    declared = set(compromise.contaminated_backups)
    actual = {p.id for p in restore_points if p.truth_contaminated}
    for point_id in sorted(declared - actual):
        reader.error(
            "$.compromise.contaminated_backups",
            f"{point_id} listed but restore point is not marked truth_contaminated",
        )
    for point_id in sorted(actual - declared):
        reader.error(
            "$.compromise.contaminated_backups",
            f"restore point {point_id} is truth_contaminated but not listed",
        )


def _parse_restore_points(reader, payload, node_ids) -> list[RestorePoint]:
    points: list[RestorePoint] = []
    if not isinstance(payload, list):
        reader.error("$.restore_points", "must be a list")
        return points
    seen: set[str] = set()
    for index, raw in enumerate(payload):
        path = f"$.restore_points[{index}]"
        if not isinstance(raw, dict):
            reader.error(path, "must be an object")
            continue
        allowed = {"id", "target_node", "age_ticks", "truth_contaminated", "verified", "completeness", "verification_tag"}
        required = allowed - {"verification_tag"}
        if not reader.require_keys(path, raw, allowed, required):
            continue
        point_id = reader.str_field(path, raw, "id")
        target = reader.str_field(path, raw, "target_node")
        age = reader.int_field(path, raw, "age_ticks", minimum=0)
        contaminated = reader.bool_field(path, raw, "truth_contaminated")
        verified = reader.bool_field(path, raw, "verified")
        completeness_raw = raw.get("completeness")
        try:
            completeness = BackupCompleteness(completeness_raw)
        except ValueError:
            reader.error(f"{path}.completeness", f"must be one of complete/partial, got {completeness_raw!r}")
            continue
        tag = raw.get("verification_tag")
        if tag is not None and not isinstance(tag, str):
            reader.error(f"{path}.verification_tag", "must be a string when present")
            continue
        if None in (point_id, target, age, contaminated, verified):
            continue
        if point_id in seen:
            reader.error(path, f"duplicate restore point id {point_id}")
            continue
        seen.add(point_id)
        if target not in node_ids:
            reader.error(f"{path}.target_node", f"unknown node {target!r}")
            continue
        try:
            points.append(
                RestorePoint(
                    id=point_id,
                    target_node=target,
                    age_ticks=age,
                    truth_contaminated=contaminated,
                    verified=verified,
                    completeness=completeness,
                    verification_tag=tag,
                )
            )
        except ValueError as exc:
            reader.error(path, str(exc))
    return points


def _parse_procedures(reader, payload, node_ids, person_ids) -> list[DegradedProcedure]:
    procedures: list[DegradedProcedure] = []
    if not isinstance(payload, list):
        reader.error("$.degraded_procedures", "must be a list")
        return procedures
    seen: set[str] = set()
    for index, raw in enumerate(payload):
        path = f"$.degraded_procedures[{index}]"
        if not isinstance(raw, dict):
            reader.error(path, "must be an object")
            continue
        keys = {"id", "substitutes_for", "max_duration_ticks", "requires_approval_by", "expiry_action"}
        if not reader.require_keys(path, raw, keys, keys):
            continue
        procedure_id = reader.str_field(path, raw, "id")
        substitutes = reader.str_field(path, raw, "substitutes_for")
        max_duration = reader.int_field(path, raw, "max_duration_ticks", minimum=1)
        approver = reader.str_field(path, raw, "requires_approval_by")
        expiry_raw = raw.get("expiry_action")
        try:
            expiry = ExpiryAction(expiry_raw)
        except ValueError:
            reader.error(f"{path}.expiry_action", f"must be one of rollback/escalate, got {expiry_raw!r}")
            continue
        if None in (procedure_id, substitutes, max_duration, approver):
            continue
        if procedure_id in seen:
            reader.error(path, f"duplicate degraded procedure id {procedure_id}")
            continue
        seen.add(procedure_id)
        if substitutes not in node_ids:
            reader.error(f"{path}.substitutes_for", f"unknown node {substitutes!r}")
            continue
        if approver not in person_ids:
            reader.error(f"{path}.requires_approval_by", f"{approver!r} is not a person node")
            continue
        procedures.append(
            DegradedProcedure(
                id=procedure_id,
                substitutes_for=substitutes,
                max_duration_ticks=max_duration,
                requires_approval_by=approver,
                expiry_action=expiry,
            )
        )
    return procedures


def _parse_constraints(reader, payload, node_ids) -> list[ExternalConstraint]:
    constraints: list[ExternalConstraint] = []
    if not isinstance(payload, list):
        reader.error("$.external_constraints", "must be a list")
        return constraints
    seen: set[str] = set()
    for index, raw in enumerate(payload):
        path = f"$.external_constraints[{index}]"
        if not isinstance(raw, dict):
            reader.error(path, "must be an object")
            continue
        keys = {"id", "kind", "subject", "window"}
        if not reader.require_keys(path, raw, keys, keys):
            continue
        constraint_id = reader.str_field(path, raw, "id")
        subject = reader.str_field(path, raw, "subject")
        kind_raw = raw.get("kind")
        try:
            kind = ConstraintKind(kind_raw)
        except ValueError:
            reader.error(f"{path}.kind", f"unknown constraint kind {kind_raw!r}")
            continue
        window_raw = raw.get("window")
        if not (
            isinstance(window_raw, list)
            and len(window_raw) == 2
            and all(isinstance(v, int) and not isinstance(v, bool) for v in window_raw)
        ):
            reader.error(f"{path}.window", "must be a [start, end] pair of integers")
            continue
        if None in (constraint_id, subject):
            continue
        if constraint_id in seen:
            reader.error(path, f"duplicate constraint id {constraint_id}")
            continue
        seen.add(constraint_id)
        if subject not in node_ids:
            reader.error(f"{path}.subject", f"unknown node {subject!r}")
            continue
        try:
            constraints.append(
                ExternalConstraint(id=constraint_id, kind=kind, subject=subject, window=(window_raw[0], window_raw[1]))
            )
        except ValueError as exc:
            reader.error(path, str(exc))
    return constraints


def _parse_missions(reader, payload, node_ids, procedure_ids) -> list[Mission]:
    missions: list[Mission] = []
    if not isinstance(payload, list):
        reader.error("$.missions", "must be a list")
        return missions
    if not payload:
        reader.error("$.missions", "at least one mission is required")
    seen: set[str] = set()
    for index, raw in enumerate(payload):
        path = f"$.missions[{index}]"
        if not isinstance(raw, dict):
            reader.error(path, "must be an object")
            continue
        allowed = {
            "id",
            "production_scope",
            "throughput",
            "duration_ticks",
            "thresholds",
            "safety_envelope",
            "quality_requirements",
            "degraded_limits",
            "monitoring_rollback",
            "min_evidence_completeness",
        }
        required = allowed - {"min_evidence_completeness"}
        if not reader.require_keys(path, raw, allowed, required):
            continue
        mission_id = reader.str_field(path, raw, "id")
        duration = reader.int_field(path, raw, "duration_ticks", minimum=1)
        throughput = raw.get("throughput")
        if not isinstance(throughput, (int, float)) or isinstance(throughput, bool) or throughput <= 0:
            reader.error(f"{path}.throughput", "must be a positive number")
            continue

        scope_raw = raw.get("production_scope")
        scope = None
        if not isinstance(scope_raw, dict):
            reader.error(f"{path}.production_scope", "must be an object")
        else:
            reader.require_keys(f"{path}.production_scope", scope_raw, {"roots", "product_family"}, {"roots", "product_family"})
            roots = reader.str_list(f"{path}.production_scope.roots", scope_raw.get("roots", []))
            family = reader.str_field(f"{path}.production_scope", scope_raw, "product_family")
            if roots is not None and family is not None:
                missing_roots = [r for r in roots if r not in node_ids]
                for root in missing_roots:
                    reader.error(f"{path}.production_scope.roots", f"unknown node {root!r}")
                if not roots:
                    reader.error(f"{path}.production_scope.roots", "must not be empty")
                elif not missing_roots:
                    scope = ProductionScope(roots=tuple(sorted(set(roots))), product_family=family)

        thresholds_raw = raw.get("thresholds")
        thresholds = None
        if not isinstance(thresholds_raw, dict):
            reader.error(f"{path}.thresholds", "must be an object")
        else:
            keys = {"a_min", "t_min", "e_min"}
            reader.require_keys(f"{path}.thresholds", thresholds_raw, keys, keys)
            a_min = reader.int_field(f"{path}.thresholds", thresholds_raw, "a_min")
            t_min = reader.int_field(f"{path}.thresholds", thresholds_raw, "t_min")
            e_min = reader.int_field(f"{path}.thresholds", thresholds_raw, "e_min")
            if None not in (a_min, t_min, e_min):
                try:
                    thresholds = Thresholds(a_min=a_min, t_min=t_min, e_min=e_min)
                except ValueError as exc:
                    reader.error(f"{path}.thresholds", str(exc))

        def ref_list(key: str, universe: set[str], describe: str) -> tuple[str, ...] | None:
            values = reader.str_list(f"{path}.{key}", raw.get(key, []))
            if values is None:
                return None
            for value in values:
                if value not in universe:
                    reader.error(f"{path}.{key}", f"unknown {describe} {value!r}")
                    return None
            return tuple(sorted(set(values)))

        envelope = ref_list("safety_envelope", node_ids, "node")
        quality = ref_list("quality_requirements", node_ids, "node")
        degraded = ref_list("degraded_limits", procedure_ids, "degraded procedure")
        monitoring = reader.str_list(f"{path}.monitoring_rollback", raw.get("monitoring_rollback", []))

        completeness = raw.get("min_evidence_completeness", 1.0)
        if not isinstance(completeness, (int, float)) or isinstance(completeness, bool):
            reader.error(f"{path}.min_evidence_completeness", "must be a number in [0, 1]")
            continue

        if None in (mission_id, duration, scope, thresholds, envelope, quality, degraded) or monitoring is None:
            continue
        if mission_id in seen:
            reader.error(path, f"duplicate mission id {mission_id}")
            continue
        seen.add(mission_id)
        try:
            missions.append(
                Mission(
                    id=mission_id,
                    production_scope=scope,
                    throughput=float(throughput),
                    duration_ticks=duration,
                    thresholds=thresholds,
                    safety_envelope=envelope,
                    quality_requirements=quality,
                    degraded_limits=degraded,
                    monitoring_rollback=tuple(monitoring),
                    min_evidence_completeness=float(completeness),
                )
            )
        except ValueError as exc:
            reader.error(path, str(exc))
    return missions


def _parse_durations(reader, payload) -> dict[str, int]:
    durations = dict(DEFAULT_ACTION_DURATIONS)
    if payload is None:
        return durations
    if not isinstance(payload, dict):
        reader.error("$.action_durations", "must be an object")
        return durations
    known = {kind.value for kind in ActionKind}
    for key in sorted(payload):
        value = payload[key]
        if key not in known:
            reader.error(f"$.action_durations.{key}", "unknown action kind")
            continue
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            reader.error(f"$.action_durations.{key}", "must be an integer >= 0")
            continue
        durations[key] = value
    return dict(sorted(durations.items()))


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def scenario_to_json(spec: ScenarioSpec) -> dict:
    return {
        "format": SCENARIO_FORMAT,
        "id": spec.id,
        "graph": {
            "nodes": [
                {"id": n.id, "kind": n.kind.value, "name": n.name, "criticality": n.criticality}
                for n in spec.graph.nodes
            ],
            "edges": [
                {"source": e.source, "target": e.target, "relation": e.relation.value}
                for e in spec.graph.edges
            ],
            "states": {
                node_id: {
                    "availability": s.availability,
                    "trust": s.trust,
                    "evidence": s.evidence,
                    "safety": s.safety.value,
                }
                for node_id, s in sorted(spec.graph.states.items())
            },
        },
        "compromise": {
            "encrypted_nodes": list(spec.compromise.encrypted_nodes),
            "exposed_credentials": list(spec.compromise.exposed_credentials),
            "contaminated_backups": list(spec.compromise.contaminated_backups),
            "lateral_movement_paths": [list(pair) for pair in spec.compromise.lateral_movement_paths],
            "ot_visibility_uncertain": list(spec.compromise.ot_visibility_uncertain),
        },
        "restore_points": [
            {
                "id": p.id,
                "target_node": p.target_node,
                "age_ticks": p.age_ticks,
                "truth_contaminated": p.truth_contaminated,
                "verified": p.verified,
                "completeness": p.completeness.value,
                **({"verification_tag": p.verification_tag} if p.verification_tag is not None else {}),
            }
            for p in spec.restore_points
        ],
        "degraded_procedures": [
            {
                "id": p.id,
                "substitutes_for": p.substitutes_for,
                "max_duration_ticks": p.max_duration_ticks,
                "requires_approval_by": p.requires_approval_by,
                "expiry_action": p.expiry_action.value,
            }
            for p in spec.degraded_procedures
        ],
        "external_constraints": [
            {"id": c.id, "kind": c.kind.value, "subject": c.subject, "window": list(c.window)}
            for c in spec.external_constraints
        ],
        "missions": [
            {
                "id": m.id,
                "production_scope": {
                    "roots": list(m.production_scope.roots),
                    "product_family": m.production_scope.product_family,
                },
                "throughput": m.throughput,
                "duration_ticks": m.duration_ticks,
                "thresholds": {
                    "a_min": m.thresholds.a_min,
                    "t_min": m.thresholds.t_min,
                    "e_min": m.thresholds.e_min,
                },
                "safety_envelope": list(m.safety_envelope),
                "quality_requirements": list(m.quality_requirements),
                "degraded_limits": list(m.degraded_limits),
                "monitoring_rollback": list(m.monitoring_rollback),
                "min_evidence_completeness": m.min_evidence_completeness,
            }
            for m in spec.missions
        ],
        "action_durations": dict(sorted(spec.action_durations.items())),
        "horizon_ticks": spec.horizon_ticks,
    }


def render_scenario(spec: ScenarioSpec) -> str:
    """Canonical UTF-8 JSON. parse(render(s)) == s, field for field."""
    return json.dumps(scenario_to_json(spec), indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# Redaction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RestorePointView:
    """What a responder knows about a backup before scanning it."""

    id: str
    target_node: str
    age_ticks: int
    verified: bool
    completeness: BackupCompleteness
    verification_tag: str | None = None


@dataclass(frozen=True)
class VisibleCompromise:
    """Incident facts responders legitimately know on day one."""

    encrypted_nodes: tuple[str, ...] = ()
    exposed_credentials: tuple[str, ...] = ()
    ot_visibility_uncertain: tuple[str, ...] = ()


@dataclass(frozen=True)
class ResponderView:
    """Everything a planner or exercise participant may see. Contains no
    ground-truth contamination or lateral-movement data, by construction."""

    scenario_id: str
    graph: DependencyGraph
    compromise: VisibleCompromise
    restore_points: tuple[RestorePointView, ...]
    degraded_procedures: tuple[DegradedProcedure, ...]
    external_constraints: tuple[ExternalConstraint, ...]
    missions: tuple[Mission, ...]
    action_durations: dict[str, int] = field(default_factory=dict)
    horizon_ticks: int = 0

    def restore_points_for(self, node_id: str) -> tuple[RestorePointView, ...]:
        return tuple(p for p in self.restore_points if p.target_node == node_id)

    def mission(self, mission_id: str) -> Mission:
        for mission in self.missions:
            if mission.id == mission_id:
                return mission
        raise KeyError(f"unknown mission: {mission_id}")


def redact_truth(source: ScenarioSpec | ResponderView) -> ResponderView:
    """Strip ground truth. Idempotent: a view passes through unchanged."""
    if isinstance(source, ResponderView):
        return source
    return ResponderView(
        scenario_id=source.id,
        graph=source.graph,
        compromise=VisibleCompromise(
            encrypted_nodes=source.compromise.encrypted_nodes,
            exposed_credentials=source.compromise.exposed_credentials,
            ot_visibility_uncertain=source.compromise.ot_visibility_uncertain,
        ),
        restore_points=tuple(
            RestorePointView(
                id=p.id,
                target_node=p.target_node,
                age_ticks=p.age_ticks,
                verified=p.verified,
                completeness=p.completeness,
                verification_tag=p.verification_tag,
            )
            for p in source.restore_points
        ),
        degraded_procedures=source.degraded_procedures,
        external_constraints=source.external_constraints,
        missions=source.missions,
        action_durations=dict(source.action_durations),
        horizon_ticks=source.horizon_ticks,
    )


def view_to_json(view: ResponderView) -> dict:
    """Serializable responder view; used by the exercise service and tested
    to contain no ground-truth field names."""
    return {
        "scenario_id": view.scenario_id,
        "graph": {
            "nodes": [
                {"id": n.id, "kind": n.kind.value, "name": n.name, "criticality": n.criticality}
                for n in view.graph.nodes
            ],
            "edges": [
                {"source": e.source, "target": e.target, "relation": e.relation.value}
                for e in view.graph.edges
            ],
            "states": {
                node_id: {
                    "availability": s.availability,
                    "trust": s.trust,
                    "evidence": s.evidence,
                    "safety": s.safety.value,
                }
                for node_id, s in sorted(view.graph.states.items())
            },
        },
        "compromise": {
            "encrypted_nodes": list(view.compromise.encrypted_nodes),
            "exposed_credentials": list(view.compromise.exposed_credentials),
            "ot_visibility_uncertain": list(view.compromise.ot_visibility_uncertain),
        },
        "restore_points": [
            {
                "id": p.id,
                "target_node": p.target_node,
                "age_ticks": p.age_ticks,
                "verified": p.verified,
                "completeness": p.completeness.value,
                **({"verification_tag": p.verification_tag} if p.verification_tag is not None else {}),
            }
            for p in view.restore_points
        ],
        "degraded_procedures": [
            {
                "id": p.id,
                "substitutes_for": p.substitutes_for,
                "max_duration_ticks": p.max_duration_ticks,
                "requires_approval_by": p.requires_approval_by,
                "expiry_action": p.expiry_action.value,
            }
            for p in view.degraded_procedures
        ],
        "external_constraints": [
            {"id": c.id, "kind": c.kind.value, "subject": c.subject, "window": list(c.window)}
            for c in view.external_constraints
        ],
        "missions": [
            {
                "id": m.id,
                "production_scope": {
                    "roots": list(m.production_scope.roots),
                    "product_family": m.production_scope.product_family,
                },
                "throughput": m.throughput,
                "duration_ticks": m.duration_ticks,
                "thresholds": {
                    "a_min": m.thresholds.a_min,
                    "t_min": m.thresholds.t_min,
                    "e_min": m.thresholds.e_min,
                },
                "safety_envelope": list(m.safety_envelope),
                "quality_requirements": list(m.quality_requirements),
                "degraded_limits": list(m.degraded_limits),
                "monitoring_rollback": list(m.monitoring_rollback),
                "min_evidence_completeness": m.min_evidence_completeness,
            }
            for m in view.missions
        ],
        "action_durations": dict(sorted(view.action_durations.items())),
        "horizon_ticks": view.horizon_ticks,
    }
