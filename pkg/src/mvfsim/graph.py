"""Dependency graph for production recovery planning.

A plant is modeled as a directed graph of heterogeneous nodes (IT systems,
OT components, identity providers, data stores, people, suppliers, network
paths, procedures). Edges say *why* one node needs another: a production
cell ``requires`` its MES, the MES ``authenticates_via`` the enterprise
identity provider, and so on. Every node carries a recovery state with four
coordinates:

    availability  0..3   is it reachable/usable at all
    trust         0..3   do we believe it is uncompromised
    evidence      0..3   how well that belief is substantiated
    safety        unknown | blocked | approved

Ordinal readings: 0 = unknown/none, 1 = claimed/partial, 2 = validated,
3 = independently verified.

Graphs are immutable. `set_state` returns a new graph; simulation code
folds over actions producing successive graphs, which keeps runs trivially
replayable.

Typical use::

    graph = DependencyGraph.build(nodes, edges, states)
    result = validate_graph(graph)
    if not result.ok:
        raise ValueError(result.violations)
    needed = required_subgraph(graph, ["cell-a"])
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum


class NodeKind(str, Enum):
    IT_SYSTEM = "it_system"
    OT_COMPONENT = "ot_component"
    IDENTITY = "identity"
    DATA_STORE = "data_store"
    PERSON = "person"
    EXTERNAL_PARTNER = "external_partner"
    NETWORK_PATH = "network_path"
    PROCEDURE = "procedure"


class EdgeRelation(str, Enum):
    REQUIRES = "requires"
    AUTHENTICATES_VIA = "authenticates_via"
    READS_DATA_FROM = "reads_data_from"
    CONTROLLED_BY = "controlled_by"
    SUPPLIED_BY = "supplied_by"
    CONNECTS_VIA = "connects_via"


class SafetyStatus(str, Enum):
    UNKNOWN = "unknown"
    BLOCKED = "blocked"
    APPROVED = "approved"


# Ordinal scale shared by availability / trust / evidence.
ORDINAL_MIN = 0
ORDINAL_MAX = 3


@dataclass(frozen=True)
class DependencyNode:
    id: str
    kind: NodeKind
    name: str
    criticality: int  # 1 (nice to have) .. 3 (mission critical)

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("node id must be non-empty")
        if self.criticality not in (1, 2, 3):
            raise ValueError(f"node {self.id}: criticality must be 1..3, got {self.criticality}")


@dataclass(frozen=True)
class DependencyEdge:
    source: str
    target: str
    relation: EdgeRelation


@dataclass(frozen=True)
class RecoveryState:
    availability: int = 0
    trust: int = 0
    evidence: int = 0
    safety: SafetyStatus = SafetyStatus.UNKNOWN

    def __post_init__(self) -> None:
        for name in ("availability", "trust", "evidence"):
            value = getattr(self, name)
            if not isinstance(value, int) or not ORDINAL_MIN <= value <= ORDINAL_MAX:
                raise ValueError(f"{name} must be an integer in {ORDINAL_MIN}..{ORDINAL_MAX}, got {value!r}")


@dataclass(frozen=True)
class Thresholds:
    """Minimum acceptable levels for the feasibility conjuncts."""

    a_min: int = 2
    t_min: int = 2
    e_min: int = 2

    def __post_init__(self) -> None:
        for name in ("a_min", "t_min", "e_min"):
            value = getattr(self, name)
            if not isinstance(value, int) or not ORDINAL_MIN <= value <= ORDINAL_MAX:
                raise ValueError(f"{name} must be an integer in {ORDINAL_MIN}..{ORDINAL_MAX}, got {value!r}")


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    subject: str = ""


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple[Violation, ...] = ()


@dataclass(frozen=True)
class DependencyGraph:
    """Immutable graph: nodes sorted by id, edges sorted, states per node."""

    nodes: tuple[DependencyNode, ...]
    edges: tuple[DependencyEdge, ...]
    states: dict[str, RecoveryState] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        nodes,
        edges,
        states: dict[str, RecoveryState] | None = None,
    ) -> "DependencyGraph":
        """Normalise collections so equal graphs compare equal regardless of input order."""
        node_tuple = tuple(sorted(nodes, key=lambda n: n.id))
        edge_tuple = tuple(sorted(edges, key=lambda e: (e.source, e.target, e.relation.value)))
        state_map = dict(states or {})
        # Any node without an explicit state starts fully unknown.
        for node in node_tuple:
            state_map.setdefault(node.id, RecoveryState())
        ordered = {node_id: state_map[node_id] for node_id in sorted(state_map)}
        return cls(nodes=node_tuple, edges=edge_tuple, states=ordered)

    def node(self, node_id: str) -> DependencyNode:
        for candidate in self.nodes:
            if candidate.id == node_id:
                return candidate
        raise KeyError(f"unknown node id: {node_id}")

    def has_node(self, node_id: str) -> bool:
        return any(candidate.id == node_id for candidate in self.nodes)

    def state(self, node_id: str) -> RecoveryState:
        try:
            return self.states[node_id]
        except KeyError:
            raise KeyError(f"unknown node id: {node_id}") from None

    def outgoing(self, node_id: str) -> tuple[DependencyEdge, ...]:
        return tuple(edge for edge in self.edges if edge.source == node_id)

    def nodes_of_kind(self, kind: NodeKind) -> tuple[DependencyNode, ...]:
        return tuple(node for node in self.nodes if node.kind == kind)


def validate_graph(graph: DependencyGraph) -> ValidationResult:
    """Structural checks: unique ids, edge endpoints exist, no self-loops,
    states cover exactly the node set, and the `requires` relation is acyclic.

    Other relations may form cycles (mutual authentication is real); only
    `requires` must be a DAG because restore order is derived from it.
    """
    violations: list[Violation] = []

    seen: set[str] = set()
    for node in graph.nodes:
        if node.id in seen:
            violations.append(Violation("duplicate-node", f"duplicate node id {node.id}", node.id))
        seen.add(node.id)

    ids = {node.id for node in graph.nodes}
    for edge in graph.edges:
        if edge.source == edge.target:
            violations.append(
                Violation("self-loop", f"self-loop on {edge.source} ({edge.relation.value})", edge.source)
            )
        for endpoint in (edge.source, edge.target):
            if endpoint not in ids:
                violations.append(
                    Violation(
                        "dangling-edge",
                        f"edge {edge.source} -> {edge.target} ({edge.relation.value}) references unknown node {endpoint}",
                        endpoint,
                    )
                )

    for node_id in graph.states:
        if node_id not in ids:
            violations.append(Violation("orphan-state", f"state for unknown node {node_id}", node_id))
    for node_id in ids:
        if node_id not in graph.states:
            violations.append(Violation("missing-state", f"no recovery state for node {node_id}", node_id))

    cycle = find_requires_cycle(graph)
    if cycle:
        violations.append(
            Violation("requires-cycle", "requires cycle: " + " -> ".join(cycle), cycle[0])
        )

    return ValidationResult(ok=not violations, violations=tuple(violations))


def find_requires_cycle(graph: DependencyGraph) -> list[str]:
    """Return one cycle over `requires` edges as [a, b, ..., a], or [] if acyclic.

    Iterative DFS with colouring; recursion would overflow on adversarial
    deep graphs from fuzzers.
    """
    adjacency: dict[str, list[str]] = {}
    for edge in graph.edges:
        if edge.relation == EdgeRelation.REQUIRES and edge.source != edge.target:
            adjacency.setdefault(edge.source, []).append(edge.target)
    for targets in adjacency.values():
        targets.sort()

    WHITE, GREY, BLACK = 0, 1, 2
    colour: dict[str, int] = {}
    parent: dict[str, str] = {}

    for start in sorted(adjacency):
        if colour.get(start, WHITE) != WHITE:
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        colour[start] = GREY
        while stack:
            node_id, index = stack[-1]
            targets = adjacency.get(node_id, [])
            if index >= len(targets):
                stack.pop()
                colour[node_id] = BLACK
                continue
            stack[-1] = (node_id, index + 1)
            nxt = targets[index]
            state = colour.get(nxt, WHITE)
            if state == WHITE:
                colour[nxt] = GREY
                parent[nxt] = node_id
                stack.append((nxt, 0))
            elif state == GREY:
                # Found a back edge; walk parents to reconstruct the loop.
                cycle = [nxt]
                cursor = node_id
                while cursor != nxt:
                    cycle.append(cursor)
                    cursor = parent[cursor]
                cycle.append(nxt)
                cycle.reverse()
                return cycle
    return []


def required_subgraph(graph: DependencyGraph, roots, stop_at: frozenset[str] | set[str] = frozenset()) -> tuple[str, ...]:
    """Dependency closure D(M): every node reachable from the roots across
    *all* edge relations, roots included, as a sorted id tuple.

    `stop_at` nodes are included when reached but not expanded — used when a
    degraded procedure substitutes a node, making its own dependencies moot.

    Raises KeyError naming the first unknown root.
    """
    ids = {node.id for node in graph.nodes}
    for root in roots:
        if root not in ids:
            raise KeyError(f"unknown node id: {root}")

    adjacency: dict[str, list[str]] = {}
    for edge in graph.edges:
        adjacency.setdefault(edge.source, []).append(edge.target)

    closure: set[str] = set()
    frontier = sorted(set(roots))
    while frontier:
        node_id = frontier.pop()
        if node_id in closure:
            continue
        closure.add(node_id)
        if node_id in stop_at:
            continue
        for target in adjacency.get(node_id, ()):
            if target not in closure:
                frontier.append(target)
    return tuple(sorted(closure))


def set_state(graph: DependencyGraph, node_id: str, state: RecoveryState) -> DependencyGraph:
    """Return a new graph with one node's state replaced. The input graph is untouched."""
    if node_id not in graph.states:
        raise KeyError(f"unknown node id: {node_id}")
    new_states = dict(graph.states)
    new_states[node_id] = state
    return replace(graph, states=new_states)


def bump(state: RecoveryState, **changes) -> RecoveryState:
    """Convenience for partial state updates: bump(state, trust=3, evidence=2)."""
    return replace(state, **changes)
