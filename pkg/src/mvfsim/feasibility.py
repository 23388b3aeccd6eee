"""Minimum-viable-factory feasibility: when is a constrained mission safe to run?

The central question after a ransomware event is not "is everything back"
but "can we run *this one mission* now". A mission is feasible when every
node in its dependency closure D(M) clears four per-node conjuncts:

    availability >= a_min  AND  trust >= t_min  AND
    evidence >= e_min      AND  safety = approved

The safety conjunct applies to OT components only: they are the nodes
that pass through a reintegration gate. Other kinds carry a safety field
for reporting but it never gates feasibility.

A degraded procedure may substitute a node; the substituted node (and the
subtree only it pulls in) is exempted from the conjuncts because the
procedure replaces the function.

On top of the per-node predicate sit five run-level success conditions:

    capability     scope resolvable, throughput/duration positive,
                   quality requirements available or substituted
    dependency     availability conjunct over effective D(M)
    trust          trust conjunct over effective D(M)
    evidence       evidence conjunct over effective D(M), plus the
                   proof bundle complete to the mission's threshold
    reintegration  safety conjunct over the OT components of effective
                   D(M), and no reconnect ever bypassed a gate

Verdict mapping: approved = all five hold; conditional = only evidence
and/or reintegration fail; rejected otherwise. `evaluate_feasibility` is
the pure graph predicate (no bundle, monotone in every attribute);
`decide_mvf` is the full decision used when a mission is declared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .graph import (
    DependencyGraph,
    NodeKind,
    SafetyStatus,
    Thresholds,
    required_subgraph,
)


class EvidenceKind(str, Enum):
    RESTORE_SOURCE = "restore_source"
    COMPROMISE_ASSESSMENT = "compromise_assessment"
    IDENTITY_STATE = "identity_state"
    CONFIGURATION_VALIDATION = "configuration_validation"
    DEPENDENCY_CONSISTENCY = "dependency_consistency"
    OT_REINTEGRATION_CHECK = "ot_reintegration_check"
    DEGRADED_MODE_LIMITS = "degraded_mode_limits"
    MONITORING_PLAN = "monitoring_plan"
    RESIDUAL_RISK = "residual_risk"


class Verdict(str, Enum):
    APPROVED = "approved"
    CONDITIONAL = "conditional"
    REJECTED = "rejected"


# Run-level success conditions, in reporting order.
CONDITION_NAMES = ("capability", "dependency", "trust", "evidence", "reintegration")

# Per-node conjunct names, in reporting order.
CONJUNCT_NAMES = ("availability", "trust", "evidence", "safety")


class InvalidMission(ValueError):
    """Mission scope cannot be resolved against the graph."""


@dataclass(frozen=True)
class ProductionScope:
    roots: tuple[str, ...]
    product_family: str

    def __post_init__(self) -> None:
        if not self.roots:
            raise ValueError("production scope needs at least one root node")
        if not self.product_family:
            raise ValueError("production scope needs a product family label")


@dataclass(frozen=True)
class Mission:
    """One constrained production mission: what to run, for how long, under
    which thresholds and compensating limits."""

    id: str
    production_scope: ProductionScope
    throughput: float
    duration_ticks: int
    thresholds: Thresholds
    safety_envelope: tuple[str, ...] = ()
    quality_requirements: tuple[str, ...] = ()
    degraded_limits: tuple[str, ...] = ()
    monitoring_rollback: tuple[str, ...] = ()
    min_evidence_completeness: float = 1.0

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("mission id must be non-empty")
        if self.throughput <= 0:
            raise ValueError(f"mission {self.id}: throughput must be positive")
        if self.duration_ticks <= 0:
            raise ValueError(f"mission {self.id}: duration_ticks must be positive")
        if not self.monitoring_rollback:
            raise ValueError(f"mission {self.id}: monitoring/rollback plan must not be empty")
        if not 0.0 <= self.min_evidence_completeness <= 1.0:
            raise ValueError(f"mission {self.id}: min_evidence_completeness must be in [0, 1]")


@dataclass(frozen=True)
class EvidenceItem:
    id: str
    kind: EvidenceKind
    subject: str
    detail: str = ""
    tick: int = 0


@dataclass(frozen=True)
class EvidenceBundle:
    """Append-only collection of proof items backing a recovery decision."""

    items: tuple[EvidenceItem, ...] = ()

    def add(self, item: EvidenceItem) -> "EvidenceBundle":
        return EvidenceBundle(items=self.items + (item,))

    def has(self, kind: EvidenceKind, subject: str) -> bool:
        return any(i.kind == kind and i.subject == subject for i in self.items)

    def subjects(self, kind: EvidenceKind) -> tuple[str, ...]:
        return tuple(sorted({i.subject for i in self.items if i.kind == kind}))

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class MvfDecision:
    mission_id: str
    verdict: Verdict
    failed_conditions: tuple[str, ...]
    per_dependency_findings: dict[str, tuple[str, ...]] = field(default_factory=dict)
    reason_codes: tuple[str, ...] = ()


def effective_required_ids(
    graph: DependencyGraph,
    mission: Mission,
    substitutions: dict[str, str] | None = None,
) -> tuple[str, ...]:
    """Effective D(M): closure from the mission roots over all relations,
    not expanding below substituted nodes. Raises InvalidMission when the
    scope does not resolve or resolves to nothing."""
    subs = substitutions or {}
    try:
        required = required_subgraph(graph, mission.production_scope.roots, stop_at=set(subs))
    except KeyError as exc:
        raise InvalidMission(f"invalid mission {mission.id}: {exc.args[0]}") from None
    if not required:
        raise InvalidMission(f"invalid mission {mission.id}: empty dependency set")
    return required


def check_substitutions(mission: Mission, substitutions: dict[str, str]) -> None:
    for node_id, procedure_id in substitutions.items():
        if procedure_id not in mission.degraded_limits:
            raise ValueError(
                f"substitution {node_id} -> {procedure_id} is not among mission "
                f"{mission.id} degraded limits"
            )


def node_conjunct_findings(
    graph: DependencyGraph,
    mission: Mission,
    substitutions: dict[str, str] | None = None,
) -> dict[str, tuple[str, ...]]:
    """Which conjuncts fail, per non-substituted node of effective D(M).

    Keys appear only for failing nodes; conjunct names keep CONJUNCT_NAMES order.
    """
    subs = substitutions or {}
    thresholds = mission.thresholds
    findings: dict[str, tuple[str, ...]] = {}
    for node_id in effective_required_ids(graph, mission, subs):
        if node_id in subs:
            continue
        state = graph.state(node_id)
        failed = []
        if state.availability < thresholds.a_min:
            failed.append("availability")
        if state.trust < thresholds.t_min:
            failed.append("trust")
        if state.evidence < thresholds.e_min:
            failed.append("evidence")
        if (
            graph.node(node_id).kind == NodeKind.OT_COMPONENT
            and state.safety != SafetyStatus.APPROVED
        ):
            failed.append("safety")
        if failed:
            findings[node_id] = tuple(failed)
    return dict(sorted(findings.items()))


def unmet_quality_requirements(
    graph: DependencyGraph,
    mission: Mission,
    substitutions: dict[str, str] | None = None,
) -> tuple[str, ...]:
    """Quality gate is binary: each required node is available or substituted."""
    subs = substitutions or {}
    unmet = []
    for node_id in mission.quality_requirements:
        if node_id in subs:
            continue
        if not graph.has_node(node_id):
            unmet.append(node_id)
            continue
        if graph.state(node_id).availability < mission.thresholds.a_min:
            unmet.append(node_id)
    return tuple(unmet)


# Failure-mode codes attached to predicate findings, keyed by (node kind, conjunct).
# Fallbacks by conjunct alone cover the remaining kinds.
_REASON_BY_KIND_CONJUNCT: dict[tuple[NodeKind, str], str] = {
    (NodeKind.IDENTITY, "trust"): "FM03",
    (NodeKind.NETWORK_PATH, "trust"): "FM06",
    (NodeKind.NETWORK_PATH, "evidence"): "FM06",
    (NodeKind.EXTERNAL_PARTNER, "availability"): "FM09",
    (NodeKind.OT_COMPONENT, "safety"): "FM05",
}
_REASON_BY_CONJUNCT = {
    "availability": "FM01",
    "trust": "FM02",
    "evidence": "FM04",
    "safety": "FM05",
}


def _reason_codes(graph: DependencyGraph, findings: dict[str, tuple[str, ...]]) -> tuple[str, ...]:
    codes: set[str] = set()
    for node_id, conjuncts in findings.items():
        kind = graph.node(node_id).kind
        for conjunct in conjuncts:
            codes.add(_REASON_BY_KIND_CONJUNCT.get((kind, conjunct), _REASON_BY_CONJUNCT[conjunct]))
    return tuple(sorted(codes))


def _verdict_from_failed(failed: set[str]) -> Verdict:
    if not failed:
        return Verdict.APPROVED
    if failed <= {"evidence", "reintegration"}:
        return Verdict.CONDITIONAL
    return Verdict.REJECTED


def evaluate_feasibility(
    graph: DependencyGraph,
    mission: Mission,
    substitutions: dict[str, str] | None = None,
) -> MvfDecision:
    """The pure graph predicate. Bundle completeness is deliberately not
    consulted here, which makes the verdict monotone under any single
    attribute increase."""
    subs = dict(substitutions or {})
    check_substitutions(mission, subs)
    findings = node_conjunct_findings(graph, mission, subs)
    quality_unmet = unmet_quality_requirements(graph, mission, subs)

    failed: set[str] = set()
    if quality_unmet:
        failed.add("capability")
    for conjuncts in findings.values():
        for conjunct in conjuncts:
            if conjunct == "availability":
                failed.add("dependency")
            elif conjunct == "trust":
                failed.add("trust")
            elif conjunct == "evidence":
                failed.add("evidence")
            elif conjunct == "safety":
                failed.add("reintegration")

    reason_codes = set(_reason_codes(graph, findings))
    if quality_unmet:
        reason_codes.add("FM07")

    return MvfDecision(
        mission_id=mission.id,
        verdict=_verdict_from_failed(failed),
        failed_conditions=tuple(name for name in CONDITION_NAMES if name in failed),
        per_dependency_findings=findings,
        reason_codes=tuple(sorted(reason_codes)),
    )


# ---------------------------------------------------------------------------
# Evidence bundle completeness
# ---------------------------------------------------------------------------

#: Requirement = (kind, subject) pair that must appear in the bundle.
Requirement = tuple[EvidenceKind, str]


def completeness_requirements(
    bundle: EvidenceBundle,
    mission: Mission,
    graph: DependencyGraph,
    substitutions: dict[str, str] | None = None,
) -> tuple[tuple[Requirement, ...], tuple[Requirement, ...]]:
    """(required, missing) for the gating denominator.

    Derived deterministically from bundle + graph + mission:
      * restore_source and compromise_assessment per restored node
        (restored = subjects of restore_source items; assessments are
        recorded against the target node, not the backup id),
      * identity_state per identity in effective D(M),
      * ot_reintegration_check per OT node that reached safety=approved,
      * degraded_mode_limits per active substitution.

    monitoring_plan and residual_risk are produced *by* an approved
    declaration, so they are excluded from the gate to avoid circularity.
    """
    subs = substitutions or {}
    required: list[Requirement] = []

    restored = bundle.subjects(EvidenceKind.RESTORE_SOURCE)
    for node_id in restored:
        required.append((EvidenceKind.RESTORE_SOURCE, node_id))
        required.append((EvidenceKind.COMPROMISE_ASSESSMENT, node_id))

    required_ids = effective_required_ids(graph, mission, subs)
    for node_id in required_ids:
        if node_id in subs:
            continue
        node = graph.node(node_id)
        if node.kind == NodeKind.IDENTITY:
            required.append((EvidenceKind.IDENTITY_STATE, node_id))
        elif node.kind == NodeKind.OT_COMPONENT and graph.state(node_id).safety == SafetyStatus.APPROVED:
            required.append((EvidenceKind.OT_REINTEGRATION_CHECK, node_id))

    for procedure_id in sorted(set(subs.values())):
        required.append((EvidenceKind.DEGRADED_MODE_LIMITS, procedure_id))

    required_sorted = tuple(sorted(set(required), key=lambda r: (r[0].value, r[1])))
    missing = tuple(r for r in required_sorted if not bundle.has(r[0], r[1]))
    return required_sorted, missing


def evidence_completeness(
    bundle: EvidenceBundle,
    mission: Mission,
    graph: DependencyGraph,
    substitutions: dict[str, str] | None = None,
) -> float:
    """Fraction of required proof items present, in [0, 1]. Vacuously 1.0
    when nothing is required (nothing restored, no identities, no OT)."""
    required, missing = completeness_requirements(bundle, mission, graph, substitutions)
    if not required:
        return 1.0
    return (len(required) - len(missing)) / len(required)


# ---------------------------------------------------------------------------
# Run-level success conditions and the full declaration decision
# ---------------------------------------------------------------------------


def check_success_conditions(
    graph: DependencyGraph,
    mission: Mission,
    bundle: EvidenceBundle,
    substitutions: dict[str, str] | None = None,
    unsafe_reconnects: int = 0,
) -> dict[str, bool]:
    """The five run-level booleans, keyed in CONDITION_NAMES order."""
    subs = dict(substitutions or {})
    check_substitutions(mission, subs)
    findings = node_conjunct_findings(graph, mission, subs)
    quality_unmet = unmet_quality_requirements(graph, mission, subs)

    def conjunct_ok(name: str) -> bool:
        return not any(name in conjuncts for conjuncts in findings.values())

    completeness = evidence_completeness(bundle, mission, graph, subs)
    return {
        "capability": not quality_unmet,
        "dependency": conjunct_ok("availability"),
        "trust": conjunct_ok("trust"),
        "evidence": conjunct_ok("evidence") and completeness >= mission.min_evidence_completeness,
        "reintegration": conjunct_ok("safety") and unsafe_reconnects == 0,
    }


def decide_mvf(
    graph: DependencyGraph,
    mission: Mission,
    bundle: EvidenceBundle,
    substitutions: dict[str, str] | None = None,
    unsafe_reconnects: int = 0,
) -> MvfDecision:
    """Full declaration decision: five conditions plus per-node findings.

    An approved decision implies `evaluate_feasibility` approves the same
    graph/substitutions, because the conditions strictly strengthen the
    per-node predicate.
    """
    subs = dict(substitutions or {})
    conditions = check_success_conditions(graph, mission, bundle, subs, unsafe_reconnects)
    findings = node_conjunct_findings(graph, mission, subs)
    failed = {name for name, ok in conditions.items() if not ok}

    reason_codes = set(_reason_codes(graph, findings))
    completeness = evidence_completeness(bundle, mission, graph, subs)
    if completeness < mission.min_evidence_completeness:
        reason_codes.add("FM04")
    if unsafe_reconnects:
        reason_codes.add("FM05")
    if unmet_quality_requirements(graph, mission, subs):
        reason_codes.add("FM07")

    return MvfDecision(
        mission_id=mission.id,
        verdict=_verdict_from_failed(failed),
        failed_conditions=tuple(name for name in CONDITION_NAMES if name in failed),
        per_dependency_findings=findings,
        reason_codes=tuple(sorted(reason_codes)),
    )
