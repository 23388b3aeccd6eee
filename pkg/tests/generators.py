"""Seeded random model builders shared across test modules.

All functions take a random.Random so every test fixes its own seed and
replays byte-for-byte. Sizes stay small on purpose: the point is hitting
odd structural combinations, not volume.
"""

import random

from mvfsim.actions import DEFAULT_ACTION_DURATIONS
from mvfsim.feasibility import Mission, ProductionScope
from mvfsim.graph import (
    DependencyEdge,
    DependencyGraph,
    DependencyNode,
    EdgeRelation,
    NodeKind,
    RecoveryState,
    SafetyStatus,
    Thresholds,
)
from mvfsim.scenario import (
    BackupCompleteness,
    CompromiseState,
    ConstraintKind,
    DegradedProcedure,
    ExpiryAction,
    ExternalConstraint,
    RestorePoint,
    ScenarioSpec,
    parse_scenario,
    render_scenario,
)

KINDS = list(NodeKind)
RELATIONS = list(EdgeRelation)
SAFETIES = list(SafetyStatus)


def random_graph(rng: random.Random, max_nodes: int = 10, acyclic_requires: bool = False) -> DependencyGraph:
    count = rng.randint(1, max_nodes)
    nodes = [
        DependencyNode(
            id=f"n{i:02d}",
            kind=rng.choice(KINDS),
            name=f"node {i}",
            criticality=rng.randint(1, 3),
        )
        for i in range(count)
    ]
    edges = []
    if count > 1:
        for _ in range(rng.randint(0, count * 2)):
            source, target = rng.sample(nodes, 2)
            relation = rng.choice(RELATIONS)
            if acyclic_requires and relation == EdgeRelation.REQUIRES and source.id > target.id:
                # id order doubles as a topological order, so requires edges
                # pointing "up" can never close a cycle
                source, target = target, source
            edges.append(DependencyEdge(source=source.id, target=target.id, relation=relation))
    states = {
        n.id: RecoveryState(
            availability=rng.randint(0, 3),
            trust=rng.randint(0, 3),
            evidence=rng.randint(0, 3),
            safety=rng.choice(SAFETIES),
        )
        for n in nodes
    }
    return DependencyGraph.build(nodes, edges, states)


def random_mission(rng: random.Random, graph: DependencyGraph, degraded_limits=()) -> Mission:
    ids = [n.id for n in graph.nodes]
    roots = sorted(rng.sample(ids, rng.randint(1, min(3, len(ids)))))
    quality = []
    if rng.random() < 0.4:
        quality = sorted(rng.sample(ids, rng.randint(1, min(2, len(ids)))))
    if rng.random() < 0.1:
        quality.append("ghost-requirement")  # deliberately dangling
    return Mission(
        id="m-random",
        production_scope=ProductionScope(roots=tuple(roots), product_family="fam"),
        throughput=float(rng.randint(1, 20)),
        duration_ticks=rng.randint(4, 48),
        thresholds=Thresholds(
            a_min=rng.randint(1, 3), t_min=rng.randint(1, 3), e_min=rng.randint(1, 3)
        ),
        quality_requirements=tuple(quality),
        degraded_limits=tuple(sorted(degraded_limits)),
        monitoring_rollback=("watch",),
    )


def random_case(rng: random.Random, max_nodes: int = 10):
    """(graph, mission, substitutions) triple for predicate equivalence runs."""
    graph = random_graph(rng, max_nodes)
    substitutions = {}
    if rng.random() < 0.5:
        ids = [n.id for n in graph.nodes]
        for node_id in rng.sample(ids, min(len(ids), rng.randint(1, 2))):
            substitutions[node_id] = f"proc-{node_id}"
    mission = random_mission(rng, graph, degraded_limits=substitutions.values())
    return graph, mission, substitutions


def random_scenario(rng: random.Random, max_nodes: int = 8) -> ScenarioSpec:
    """A fully valid scenario document as the parser would normalise it."""
    graph = random_graph(rng, max_nodes, acyclic_requires=True)
    ids = [n.id for n in graph.nodes]
    identities = [n.id for n in graph.nodes if n.kind == NodeKind.IDENTITY]
    people = [n.id for n in graph.nodes if n.kind == NodeKind.PERSON]

    points = []
    for i in range(rng.randint(0, 3)):
        verified = rng.random() < 0.5
        points.append(
            RestorePoint(
                id=f"rp-{i:02d}",
                target_node=rng.choice(ids),
                age_ticks=rng.randint(0, 40),
                truth_contaminated=rng.random() < 0.3,
                verified=verified,
                completeness=rng.choice(list(BackupCompleteness)),
                verification_tag=f"tag-{i}" if verified else None,
            )
        )
    points.sort(key=lambda p: p.id)

    procedures = []
    if people:
        for i in range(rng.randint(0, 2)):
            procedures.append(
                DegradedProcedure(
                    id=f"dp-{i:02d}",
                    substitutes_for=rng.choice(ids),
                    max_duration_ticks=rng.randint(1, 40),
                    requires_approval_by=rng.choice(people),
                    expiry_action=rng.choice(list(ExpiryAction)),
                )
            )

    constraints = []
    for i in range(rng.randint(0, 2)):
        start = rng.randint(0, 20)
        constraints.append(
            ExternalConstraint(
                id=f"ec-{i:02d}",
                kind=rng.choice(list(ConstraintKind)),
                subject=rng.choice(ids),
                window=(start, start + rng.randint(1, 20)),
            )
        )

    compromise = CompromiseState(
        encrypted_nodes=tuple(sorted(rng.sample(ids, rng.randint(0, min(2, len(ids)))))),
        exposed_credentials=tuple(sorted(rng.sample(identities, rng.randint(0, len(identities)))))
        if identities
        else (),
        contaminated_backups=tuple(sorted(p.id for p in points if p.truth_contaminated)),
        lateral_movement_paths=tuple(
            sorted(
                tuple(rng.sample(ids, 2))
                for _ in range(rng.randint(0, 2))
                if len(ids) > 1
            )
        ),
        ot_visibility_uncertain=tuple(sorted(rng.sample(ids, rng.randint(0, min(2, len(ids)))))),
    )

    degraded_ids = [p.id for p in procedures]
    mission = Mission(
        id="m-00",
        production_scope=ProductionScope(
            roots=tuple(sorted(rng.sample(ids, rng.randint(1, min(2, len(ids)))))),
            product_family="fam",
        ),
        throughput=float(rng.randint(1, 10)),
        duration_ticks=rng.randint(4, 30),
        thresholds=Thresholds(a_min=rng.randint(1, 3), t_min=rng.randint(1, 3), e_min=rng.randint(1, 3)),
        quality_requirements=tuple(sorted(rng.sample(ids, rng.randint(0, 1)))),
        degraded_limits=tuple(sorted(rng.sample(degraded_ids, rng.randint(0, len(degraded_ids)))))
        if degraded_ids
        else (),
        monitoring_rollback=("watch dashboards", "rollback on drift"),
        min_evidence_completeness=rng.choice([1.0, 1.0, 0.5, 0.75]),
    )

    durations = dict(DEFAULT_ACTION_DURATIONS)
    if rng.random() < 0.4:
        durations["restore"] = rng.randint(1, 9)
        durations["forensic_scan"] = rng.randint(1, 6)

    spec = ScenarioSpec(
        id=f"random-{rng.randint(0, 10**6):06d}",
        graph=graph,
        compromise=compromise,
        restore_points=tuple(points),
        degraded_procedures=tuple(sorted(procedures, key=lambda p: p.id)),
        external_constraints=tuple(sorted(constraints, key=lambda c: c.id)),
        missions=(mission,),
        action_durations=durations,
        horizon_ticks=rng.randint(10, 120),
    )
    # One pass through the canonical writer so round-trip comparisons start
    # from parser-shaped data (sorted, deduplicated, defaults filled in).
    return parse_scenario(render_scenario(spec))
