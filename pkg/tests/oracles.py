"""Hand-rolled reference implementations the tests compare against.

Everything in this file is deliberately written from scratch: different
traversal styles, no shared helpers with the package, verdicts rebuilt
from first principles. If the library and these disagree, one of them is
wrong, and the disagreement is the test failure we want to see.
"""

from collections import deque


def reachable_ids(graph, roots, stop_at=()):
    """Breadth-first closure over every edge relation, roots included.

    Nodes listed in stop_at are kept when reached but their outgoing
    edges are ignored.
    """
    forward = {}
    for edge in graph.edges:
        forward.setdefault(edge.source, []).append(edge.target)
    halt = set(stop_at)
    seen = set()
    queue = deque(roots)
    while queue:
        node_id = queue.popleft()
        if node_id in seen:
            continue
        seen.add(node_id)
        if node_id in halt:
            continue
        for nxt in forward.get(node_id, []):
            if nxt not in seen:
                queue.append(nxt)
    return sorted(seen)


def conjunct_verdict(graph, mission, substitutions=None):
    """Re-derive the feasibility verdict with a plain double loop.

    Returns (verdict_string, failed_condition_set). The safety conjunct
    only applies to ot_component nodes; substituted nodes are skipped
    entirely; quality requirements must be available or substituted.
    """
    subs = dict(substitutions or {})
    needed = reachable_ids(graph, mission.production_scope.roots, stop_at=subs)
    limits = mission.thresholds
    failed = set()
    for node_id in needed:
        if node_id in subs:
            continue
        state = graph.state(node_id)
        if state.availability < limits.a_min:
            failed.add("dependency")
        if state.trust < limits.t_min:
            failed.add("trust")
        if state.evidence < limits.e_min:
            failed.add("evidence")
        is_ot = graph.node(node_id).kind.value == "ot_component"
        if is_ot and state.safety.value != "approved":
            failed.add("reintegration")
    for wanted in mission.quality_requirements:
        if wanted in subs:
            continue
        if not graph.has_node(wanted):
            failed.add("capability")
        elif graph.state(wanted).availability < limits.a_min:
            failed.add("capability")
    if not failed:
        return "approved", failed
    if failed - {"evidence", "reintegration"}:
        return "rejected", failed
    return "conditional", failed


def count_sequences(alphabet_size, max_len):
    """Number of action sequences of length 1..max_len, recursively.

    Written as recursion on purpose so it shares nothing with the
    generator it checks.
    """
    if max_len <= 0:
        return 0
    return alphabet_size + alphabet_size * count_sequences(alphabet_size, max_len - 1)


def has_requires_cycle(graph):
    """Cycle check over requires edges by repeated leaf stripping.

    A graph is acyclic exactly when every node can be removed in an
    order where no remaining node still points at it.
    """
    targets = {}
    indegree = {}
    for edge in graph.edges:
        if edge.relation.value != "requires" or edge.source == edge.target:
            continue
        targets.setdefault(edge.source, []).append(edge.target)
        indegree[edge.target] = indegree.get(edge.target, 0) + 1
        indegree.setdefault(edge.source, 0)
    ready = [n for n, d in indegree.items() if d == 0]
    removed = 0
    while ready:
        node = ready.pop()
        removed += 1
        for nxt in targets.get(node, []):
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                ready.append(nxt)
    return removed != len(indegree)
