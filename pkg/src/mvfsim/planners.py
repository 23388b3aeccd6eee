"""Baseline recovery planners.

Every planner is open loop: it reads a redacted ResponderView, emits a
fixed action sequence, and never sees execution outcomes. That mirrors a
recovery runbook written at the start of an incident, and it keeps the
comparison honest — a planner cannot quietly adapt to ground truth it
should not have.

All planners are deterministic. Ordering is always explicit (sorted ids,
criticality-desc, topological), so the same view yields the same plan,
byte for byte.

The planners intentionally span a competence gradient, from "restore the
newest backup and reconnect" folklore to a sequence that tries to earn an
approved declaration with a complete evidence trail. None of them cheat:
the fast ones are fast because they skip verification, and the simulator
prices that.
"""

from __future__ import annotations

import heapq
from typing import Callable, Iterator

from .actions import ActionKind, RecoveryAction, RecoveryPlan
from .feasibility import Mission, effective_required_ids
from .graph import NodeKind
from .scenario import ResponderView, RestorePointView

NEWEST_BACKUP_FIRST = "newest_backup_first"
ASSET_CRITICALITY_FIRST = "asset_criticality_first"
IT_FIRST = "it_first"
OT_ISOLATED_FIRST = "ot_isolated_first"
DEPENDENCY_AWARE = "dependency_aware"
EVIDENCE_AWARE_MVF = "evidence_aware_mvf"

STRATEGY_NAMES: tuple[str, ...] = (
    NEWEST_BACKUP_FIRST,
    ASSET_CRITICALITY_FIRST,
    IT_FIRST,
    OT_ISOLATED_FIRST,
    DEPENDENCY_AWARE,
    EVIDENCE_AWARE_MVF,
)

# Enumeration guard rails. Anything past these bounds is not a benchmark
# run any more, it is a space heater.
MAX_ENUMERATION_LEN = 12
MAX_VOCABULARY = 20


class _Ctx:
    """Shared per-(view, mission) lookups used by all strategies."""

    def __init__(self, view: ResponderView, mission_id: str):
        self.view = view
        self.mission: Mission = view.mission(mission_id)
        self.graph = view.graph
        self.required: tuple[str, ...] = effective_required_ids(self.graph, self.mission, {})
        self.required_set = set(self.required)

        identities = sorted(
            n for n in self.required if self.graph.node(n).kind == NodeKind.IDENTITY
        )
        if not identities:
            identities = sorted(n.id for n in self.graph.nodes_of_kind(NodeKind.IDENTITY))
        self.identities = identities
        self.auth: str | None = identities[0] if identities else None

        self.points: dict[str, list[RestorePointView]] = {}
        for point in view.restore_points:
            self.points.setdefault(point.target_node, []).append(point)
        for rps in self.points.values():
            rps.sort(key=lambda p: p.id)

        self.ot_components = self._of_kind(NodeKind.OT_COMPONENT)
        self.network_paths = self._of_kind(NodeKind.NETWORK_PATH)
        self.partners = self._of_kind(NodeKind.EXTERNAL_PARTNER)

    def _of_kind(self, kind: NodeKind) -> list[str]:
        return sorted(n for n in self.required if self.graph.node(n).kind == kind)

    def act(self, kind: ActionKind, subject: str, restore_point: str | None = None) -> RecoveryAction:
        auth = None if kind == ActionKind.ASSESS_MISSION_IMPACT else self.auth
        return RecoveryAction(kind=kind, subject=subject, auth_via=auth, restore_point=restore_point)

    def newest_point(self, node_id: str) -> RestorePointView | None:
        rps = self.points.get(node_id)
        if not rps:
            return None
        return min(rps, key=lambda p: (p.age_ticks, p.id))

    def best_point(self, node_id: str) -> RestorePointView | None:
        """Verified-preferred: freshest verified point, else freshest overall."""
        rps = self.points.get(node_id)
        if not rps:
            return None
        verified = [p for p in rps if p.verified]
        pool = verified if verified else rps
        return min(pool, key=lambda p: (p.age_ticks, p.id))

    def topo(self, node_ids: list[str]) -> list[str]:
        """Dependencies-first order over `requires` edges, restricted to the
        given nodes. Ties break criticality-desc then id."""
        ids = set(node_ids)
        deps: dict[str, set[str]] = {n: set() for n in ids}
        users: dict[str, set[str]] = {n: set() for n in ids}
        for n in ids:
            for edge in self.graph.outgoing(n):
                if edge.relation.value == "requires" and edge.target in ids:
                    deps[n].add(edge.target)
                    users[edge.target].add(n)
        heap = [(-self.graph.node(n).criticality, n) for n in ids if not deps[n]]
        heapq.heapify(heap)
        out: list[str] = []
        while heap:
            _, n = heapq.heappop(heap)
            out.append(n)
            for m in sorted(users[n]):
                deps[m].discard(n)
                if not deps[m]:
                    heapq.heappush(heap, (-self.graph.node(m).criticality, m))
        return out

    def restore_targets(self) -> list[str]:
        """Nodes worth restoring: availability or trust below threshold and a
        restore point exists. Topologically ordered."""
        t = self.mission.thresholds
        candidates = [
            n
            for n in self.required
            if n in self.points
            and (
                self.graph.state(n).availability < t.a_min
                or self.graph.state(n).trust < t.t_min
            )
        ]
        return self.topo(candidates)

    def unavailable_partners(self) -> list[str]:
        t = self.mission.thresholds
        return [
            n for n in self.partners if self.graph.state(n).availability < t.a_min
        ]

    def allowed_procedures(self) -> list:
        return [
            p
            for p in sorted(self.view.degraded_procedures, key=lambda p: p.id)
            if p.id in self.mission.degraded_limits and p.substitutes_for in self.required_set
        ]


def _ot_bring_up(ctx: _Ctx) -> list[RecoveryAction]:
    """Validate OT cells and their paths, open gates, reconnect."""
    actions = []
    for ot in ctx.ot_components:
        actions.append(ctx.act(ActionKind.VALIDATE_OFFLINE, ot))
    for path in ctx.network_paths:
        actions.append(ctx.act(ActionKind.VALIDATE_OFFLINE, path))
    for ot in ctx.ot_components:
        actions.append(ctx.act(ActionKind.OPEN_GATE, ot))
    for ot in ctx.ot_components:
        actions.append(ctx.act(ActionKind.RECONNECT, ot))
    return actions


def _plan_newest_backup_first(ctx: _Ctx) -> list[RecoveryAction]:
    # Runbook folklore: newest backup, straight back online.
    actions = []
    for node in sorted(set(ctx.view.compromise.encrypted_nodes) & ctx.required_set):
        point = ctx.newest_point(node)
        if point is not None:
            actions.append(ctx.act(ActionKind.RESTORE, node, restore_point=point.id))
    for ot in ctx.ot_components:
        actions.append(ctx.act(ActionKind.RECONNECT, ot))
    return actions


def _plan_asset_criticality_first(ctx: _Ctx) -> list[RecoveryAction]:
    # Highest criticality first, freshest point, no questions asked.
    t = ctx.mission.thresholds
    targets = [
        n
        for n in ctx.required
        if n in ctx.points and ctx.graph.state(n).availability < t.a_min
    ]
    targets.sort(key=lambda n: (-ctx.graph.node(n).criticality, n))
    actions = []
    for node in targets:
        point = ctx.newest_point(node)
        actions.append(ctx.act(ActionKind.RESTORE, node, restore_point=point.id))
    for ot in ctx.ot_components:
        actions.append(ctx.act(ActionKind.RECONNECT, ot))
    return actions


def _plan_it_first(ctx: _Ctx) -> list[RecoveryAction]:
    # Rebuild the directory, restore IT in dependency order, only then touch OT.
    t = ctx.mission.thresholds
    actions = [ctx.act(ActionKind.REBUILD_IDENTITY, n) for n in ctx.identities if n in ctx.required_set]
    targets = [
        n
        for n in ctx.required
        if n in ctx.points
        and ctx.graph.node(n).kind in (NodeKind.IT_SYSTEM, NodeKind.DATA_STORE)
        and ctx.graph.state(n).availability < t.a_min
    ]
    for node in ctx.topo(targets):
        point = ctx.newest_point(node)
        actions.append(ctx.act(ActionKind.RESTORE, node, restore_point=point.id))
    actions.extend(_ot_bring_up(ctx))
    return actions


def _plan_ot_isolated_first(ctx: _Ctx) -> list[RecoveryAction]:
    # Cut the cell loose: substitute every upstream dependency that has an
    # approved degraded procedure, then bring the cell up in isolation.
    actions = []
    for procedure in ctx.allowed_procedures():
        actions.append(ctx.act(ActionKind.ENTER_DEGRADED_MODE, procedure.id))
    actions.extend(_ot_bring_up(ctx))
    return actions


def _plan_dependency_aware(ctx: _Ctx) -> list[RecoveryAction]:
    # Repair the dependency closure in order; substitute what cannot be
    # repaired. Declares on availability and trust alone — no evidence work.
    actions = [ctx.act(ActionKind.REBUILD_IDENTITY, n) for n in ctx.identities if n in ctx.required_set]
    for node in ctx.restore_targets():
        point = ctx.best_point(node)
        actions.append(ctx.act(ActionKind.RESTORE, node, restore_point=point.id))
    substitutable = {p.substitutes_for: p for p in ctx.allowed_procedures()}
    for partner in ctx.unavailable_partners():
        if partner in substitutable:
            actions.append(ctx.act(ActionKind.ENTER_DEGRADED_MODE, substitutable[partner].id))
    return actions


def _plan_evidence_aware_mvf(ctx: _Ctx) -> list[RecoveryAction]:
    # The full checklist: clean credentials, assess restore sources before
    # using them, validate everything that moved, gate, reconnect, confirm
    # suppliers, and only then declare.
    actions = [ctx.act(ActionKind.RESET_CREDENTIALS, n) for n in ctx.identities if n in ctx.required_set]
    targets = ctx.restore_targets()
    for node in targets:
        for point in ctx.points[node]:
            actions.append(ctx.act(ActionKind.FORENSIC_SCAN, point.id))
    for node in targets:
        point = ctx.best_point(node)
        actions.append(ctx.act(ActionKind.RESTORE, node, restore_point=point.id))
    for node in targets:
        actions.append(ctx.act(ActionKind.VALIDATE_OFFLINE, node))
    for partner in ctx.unavailable_partners():
        actions.append(ctx.act(ActionKind.CONFIRM_SUPPLIER, partner))
    actions.extend(_ot_bring_up(ctx))
    return actions


_STRATEGIES: dict[str, Callable[[_Ctx], list[RecoveryAction]]] = {
    NEWEST_BACKUP_FIRST: _plan_newest_backup_first,
    ASSET_CRITICALITY_FIRST: _plan_asset_criticality_first,
    IT_FIRST: _plan_it_first,
    OT_ISOLATED_FIRST: _plan_ot_isolated_first,
    DEPENDENCY_AWARE: _plan_dependency_aware,
    EVIDENCE_AWARE_MVF: _plan_evidence_aware_mvf,
}


def plan(view: ResponderView, mission_id: str, strategy: str) -> RecoveryPlan:
    """Build the fixed action sequence for one strategy against one mission.

    Every plan opens with a mission impact assessment and closes with a
    declaration; what happens in between is the strategy's character.
    """
    if strategy not in _STRATEGIES:
        raise KeyError(f"unknown strategy: {strategy}")
    ctx = _Ctx(view, mission_id)
    actions = [ctx.act(ActionKind.ASSESS_MISSION_IMPACT, mission_id)]
    actions.extend(_STRATEGIES[strategy](ctx))
    actions.append(ctx.act(ActionKind.DECLARE_MVF, mission_id))
    return RecoveryPlan(planner_name=strategy, mission_id=mission_id, actions=tuple(actions))


# ---------------------------------------------------------------------------
# Bounded enumeration (oracle support)
# ---------------------------------------------------------------------------


def check_enumeration_bounds(max_len: int, vocabulary_size: int) -> None:
    if max_len > MAX_ENUMERATION_LEN:
        raise ValueError(
            f"max_len {max_len} above enumeration bound {MAX_ENUMERATION_LEN}"
        )
    if vocabulary_size > MAX_VOCABULARY:
        raise ValueError(
            f"action vocabulary of {vocabulary_size} above enumeration bound {MAX_VOCABULARY}"
        )


def action_vocabulary(view: ResponderView, mission_id: str) -> tuple[RecoveryAction, ...]:
    """The closed action set exhaustive search ranges over.

    Kept deliberately tight so bounded enumeration stays meaningful:
    subjects come from the mission's dependency closure, scans target
    restore points (node sweeps add nothing the predicate can see that a
    validation does not), credentials are reset rather than rebuilt (same
    effect, shorter), and teardown actions are omitted because no minimal
    run un-does its own work. Validation targets are the nodes that can be
    restored plus OT cells and their network paths.
    """
    ctx = _Ctx(view, mission_id)
    vocabulary: list[RecoveryAction] = [ctx.act(ActionKind.ASSESS_MISSION_IMPACT, mission_id)]

    scan_points = []
    for node in sorted(ctx.points):
        if node in ctx.required_set:
            scan_points.extend(ctx.points[node])
    for point in sorted(scan_points, key=lambda p: p.id):
        vocabulary.append(ctx.act(ActionKind.FORENSIC_SCAN, point.id))
    for node in sorted(ctx.points):
        if node in ctx.required_set:
            for point in ctx.points[node]:
                vocabulary.append(ctx.act(ActionKind.RESTORE, node, restore_point=point.id))
    for identity in ctx.identities:
        vocabulary.append(ctx.act(ActionKind.RESET_CREDENTIALS, identity))
    validate_targets = sorted(
        (set(ctx.points) & ctx.required_set)
        | set(ctx.ot_components)
        | set(ctx.network_paths)
    )
    for node in validate_targets:
        vocabulary.append(ctx.act(ActionKind.VALIDATE_OFFLINE, node))
    for ot in ctx.ot_components:
        vocabulary.append(ctx.act(ActionKind.OPEN_GATE, ot))
    for ot in ctx.ot_components:
        vocabulary.append(ctx.act(ActionKind.RECONNECT, ot))
    for procedure in ctx.allowed_procedures():
        vocabulary.append(ctx.act(ActionKind.ENTER_DEGRADED_MODE, procedure.id))
    for partner in ctx.partners:
        vocabulary.append(ctx.act(ActionKind.CONFIRM_SUPPLIER, partner))
    vocabulary.append(ctx.act(ActionKind.DECLARE_MVF, mission_id))
    return tuple(vocabulary)


def enumerate_plans(
    view: ResponderView, mission_id: str, max_len: int
) -> Iterator[RecoveryPlan]:
    """Yield every action sequence of length 1..max_len over the vocabulary,
    shortest first, lexicographic by vocabulary position within a length.

    This is the reference definition of the search space; `oracle_search`
    must agree with running every plan this yields.
    """
    vocabulary = action_vocabulary(view, mission_id)
    check_enumeration_bounds(max_len, len(vocabulary))

    def by_length(length: int, prefix: tuple[RecoveryAction, ...]) -> Iterator[RecoveryPlan]:
        if length == 0:
            yield RecoveryPlan(
                planner_name="enumeration", mission_id=mission_id, actions=prefix
            )
            return
        for action in vocabulary:
            yield from by_length(length - 1, prefix + (action,))

    for length in range(1, max_len + 1):
        yield from by_length(length, ())
