"""Recovery failure-mode catalog and detector.

Nine recurring ways factory recoveries go wrong, each with a stable code.
FM01..FM06 and FM09 are tagged on the events where they happen; FM07 and
FM08 are run-level patterns the detector synthesises from the end state
and the degraded-mode timeline. The detector only aggregates — it never
re-runs anything, so it works identically on a live run and on a
replayed event log.
"""

from __future__ import annotations

from dataclasses import dataclass

from .feasibility import Mission, effective_required_ids
from .graph import DependencyGraph, NodeKind
from .scenario import ScenarioSpec

FM_DESCRIPTIONS: dict[str, str] = {
    "FM01": "declared with never-assessed dependencies",
    "FM02": "restored from a source with no compromise assessment",
    "FM03": "action authenticated via an untrusted or exposed identity",
    "FM04": "declared below the required evidence completeness",
    "FM05": "reconnected without an open reintegration gate",
    "FM06": "traffic pushed over an unexamined network path",
    "FM07": "systems restored yet the mission still rejected",
    "FM08": "degraded procedure overran its time limit",
    "FM09": "declared while an external partner was unavailable",
}

FM_CODES: tuple[str, ...] = tuple(sorted(FM_DESCRIPTIONS))

#: FM07 threshold: this fraction of IT systems back does not a recovery make.
IT_RESTORED_FRACTION = 0.8


@dataclass(frozen=True)
class FmFinding:
    code: str
    description: str
    occurrences: int
    subjects: tuple[str, ...] = ()


def _overrun_procedures(
    spec: ScenarioSpec,
    degraded_intervals: tuple[tuple[str, int, int | None], ...],
    approved_tick: int | None,
    mission: Mission,
    final_tick: int,
) -> tuple[str, ...]:
    """Procedures whose needed lifetime exceeds their limit.

    Open intervals project to the end of the declared mission window when
    the mission was approved (the plan has committed the crutch for that
    long), otherwise to the end of the run.
    """
    window_end = (
        approved_tick + mission.duration_ticks if approved_tick is not None else None
    )
    overrun = []
    for procedure_id, start, end in degraded_intervals:
        needed_end = end
        if needed_end is None:
            needed_end = window_end if window_end is not None else final_tick
        needed_end = max(needed_end, start)
        if needed_end - start > spec.procedure(procedure_id).max_duration_ticks:
            overrun.append(procedure_id)
    return tuple(sorted(set(overrun)))


def detect_failure_modes(
    events,
    final_graph: DependencyGraph,
    mission: Mission,
    spec: ScenarioSpec,
    *,
    substitutions: dict[str, str],
    degraded_intervals: tuple[tuple[str, int, int | None], ...],
    approved_tick: int | None,
    final_tick: int,
    verdict: str,
) -> tuple[FmFinding, ...]:
    """Aggregate event tags and synthesise the run-level modes.

    Returns findings sorted by code; absent modes are absent, not zero.
    """
    occurrences: dict[str, int] = {}
    subjects: dict[str, set[str]] = {}
    for event in events:
        for code in event.violation_tags:
            occurrences[code] = occurrences.get(code, 0) + 1
            subjects.setdefault(code, set()).add(event.action.subject)

    # FM08: degraded procedures past their limit, in-run or projected.
    overrun = _overrun_procedures(spec, degraded_intervals, approved_tick, mission, final_tick)
    if overrun:
        occurrences["FM08"] = len(overrun)
        subjects["FM08"] = set(overrun)

    # FM07: the IT fleet is back but the mission still is not. Fires only on
    # a rejected declaration with a meaningful IT denominator.
    if verdict == "rejected":
        it_nodes = [
            node_id
            for node_id in effective_required_ids(final_graph, mission, substitutions)
            if node_id not in substitutions
            and final_graph.node(node_id).kind == NodeKind.IT_SYSTEM
        ]
        if it_nodes:
            restored = [
                n
                for n in it_nodes
                if final_graph.state(n).availability >= mission.thresholds.a_min
            ]
            if len(restored) / len(it_nodes) >= IT_RESTORED_FRACTION:
                occurrences["FM07"] = len(restored)
                subjects["FM07"] = set(restored)

    return tuple(
        FmFinding(
            code=code,
            description=FM_DESCRIPTIONS[code],
            occurrences=occurrences[code],
            subjects=tuple(sorted(subjects.get(code, ()))),
        )
        for code in sorted(occurrences)
    )
