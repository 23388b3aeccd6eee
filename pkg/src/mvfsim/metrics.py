"""Run scoring and reports.

Everything here is computed twice on purpose: `compute_metrics` reads the
in-memory run result, `metrics_from_log` re-derives the same numbers from
the serialized event log by mechanically replaying `state_deltas`. The
two must agree exactly — that equality is what makes the log a usable
audit artifact rather than a pretty printout.

The replay path never executes actions. It folds deltas over the starting
graph and rebuilds the evidence bundle from `evidence_added`, which keeps
it honest: anything the metrics need must be in the log.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .failure_modes import FmFinding, detect_failure_modes
from .feasibility import (
    EvidenceBundle,
    Mission,
    effective_required_ids,
    evidence_completeness,
)
from .graph import DependencyGraph, NodeKind, SafetyStatus, bump, set_state
from .scenario import ScenarioSpec
from .sim import ActionKind, Outcome, RunResult, SimEvent, event_from_json

REPORT_FORMAT = "mvf-report/1"

VERDICT_UNDECLARED = "undeclared"


@dataclass(frozen=True)
class RunFacts:
    """The minimal inputs metric math needs, however they were obtained."""

    scenario_id: str
    mission_id: str
    planner_name: str
    events: tuple[SimEvent, ...]
    final_graph: DependencyGraph
    bundle: EvidenceBundle
    substitutions: dict[str, str]
    degraded_intervals: tuple[tuple[str, int, int | None], ...]
    approved_tick: int | None
    final_tick: int
    verdict: str


@dataclass(frozen=True)
class MetricsReport:
    scenario_id: str
    mission_id: str
    planner_name: str
    verdict: str
    time_to_mvf: int | None
    actions_attempted: int
    actions_blocked: int
    dependency_violations: int
    untrusted_identities_reused: int
    false_clean_restores: int
    unsafe_reconnection_attempts: int
    evidence_completeness: float
    degraded_mode_duration: int
    degraded_limit_violations: int
    production_validity: float
    valid_throughput: float
    dependencies_satisfied: bool
    supplier_coordination: bool
    fm_findings: tuple[FmFinding, ...]

    @property
    def fm_codes(self) -> tuple[str, ...]:
        return tuple(f.code for f in self.fm_findings)


def facts_from_result(result: RunResult) -> RunFacts:
    final = result.final
    decision = result.decision
    return RunFacts(
        scenario_id=result.scenario_id,
        mission_id=result.mission_id,
        planner_name=result.planner_name,
        events=result.events,
        final_graph=final.graph,
        bundle=final.bundle,
        substitutions=dict(final.substitutions),
        degraded_intervals=final.degraded_intervals,
        approved_tick=final.approved_tick,
        final_tick=final.tick,
        verdict=decision.verdict.value if decision else VERDICT_UNDECLARED,
    )


def facts_from_log(
    spec: ScenarioSpec,
    mission_id: str,
    events: tuple[SimEvent, ...],
    planner_name: str = "",
) -> RunFacts:
    """Rebuild run facts from the log alone. Deltas are applied verbatim;
    nothing is simulated."""
    graph = spec.graph
    bundle = EvidenceBundle()
    substitutions: dict[str, str] = {}
    open_intervals: dict[str, int] = {}
    intervals: list[tuple[str, int, int | None]] = []
    approved_tick: int | None = None
    verdict = VERDICT_UNDECLARED
    final_tick = 0

    for event in events:
        final_tick = max(final_tick, event.tick)
        for item in event.evidence_added:
            bundle = bundle.add(item)
        for target, field_name, _old, new in event.state_deltas:
            if ":" not in target:
                if field_name == "safety":
                    graph = set_state(graph, target, bump(graph.state(target), safety=SafetyStatus(new)))
                elif field_name in ("availability", "trust", "evidence"):
                    graph = set_state(graph, target, bump(graph.state(target), **{field_name: int(new)}))
                continue
            prefix, _, name = target.partition(":")
            if prefix == "substitution" and field_name == "procedure":
                if new is None:
                    substitutions.pop(name, None)
                else:
                    substitutions[name] = str(new)
            elif prefix == "degraded" and field_name == "active":
                if new:
                    open_intervals[name] = event.tick
                else:
                    start = open_intervals.pop(name, event.tick)
                    intervals.append((name, start, event.tick))
            elif prefix == "mission" and field_name == "verdict":
                verdict = str(new)
                if verdict == "approved" and approved_tick is None:
                    approved_tick = event.tick
    for name in sorted(open_intervals):
        intervals.append((name, open_intervals[name], None))
    intervals.sort(key=lambda iv: (iv[1], iv[0]))

    return RunFacts(
        scenario_id=spec.id,
        mission_id=mission_id,
        planner_name=planner_name,
        events=tuple(events),
        final_graph=graph,
        bundle=bundle,
        substitutions=substitutions,
        degraded_intervals=tuple(intervals),
        approved_tick=approved_tick,
        final_tick=final_tick,
        verdict=verdict,
    )


def _degraded_numbers(
    spec: ScenarioSpec, mission: Mission, facts: RunFacts
) -> tuple[int, int, float]:
    """(total degraded ticks, limit violations, production validity).

    Validity runs from approval to the first rollback-on-expiry inside the
    mission window; escalate-on-expiry counts a violation but does not cut
    the window. Unapproved runs have validity 0.
    """
    approved = facts.approved_tick
    window_end = approved + mission.duration_ticks if approved is not None else None

    violations = 0
    rollback_cuts: list[int] = []
    for procedure_id, start, end in facts.degraded_intervals:
        procedure = spec.procedure(procedure_id)
        needed_end = end
        if needed_end is None:
            needed_end = window_end if window_end is not None else facts.final_tick
        needed_end = max(needed_end, start)
        if needed_end - start > procedure.max_duration_ticks:
            violations += 1
            if (
                end is None
                and window_end is not None
                and procedure.expiry_action.value == "rollback"
            ):
                rollback_cuts.append(start + procedure.max_duration_ticks)

    cut = min(rollback_cuts) if rollback_cuts else None
    if approved is None:
        validity = 0.0
    elif cut is None:
        validity = 1.0
    else:
        validity = max(0.0, min(1.0, (cut - approved) / mission.duration_ticks))

    total = 0
    for procedure_id, start, end in facts.degraded_intervals:
        capped_end = end
        if capped_end is None:
            capped_end = window_end if window_end is not None else facts.final_tick
            if cut is not None:
                capped_end = min(capped_end, cut)
        total += max(0, capped_end - start)
    return total, violations, validity


def compute_metrics_from_facts(spec: ScenarioSpec, facts: RunFacts) -> MetricsReport:
    mission = spec.mission(facts.mission_id)
    events = facts.events

    contaminated = set(spec.compromise.contaminated_backups)
    scanned: set[str] = set()
    false_clean = 0
    for event in events:
        action = event.action
        if event.outcome == Outcome.BLOCKED:
            continue
        if action.kind == ActionKind.FORENSIC_SCAN:
            scanned.add(action.subject)
        elif action.kind == ActionKind.RESTORE:
            if action.restore_point in contaminated and action.restore_point not in scanned:
                false_clean += 1

    unsafe = sum(
        1
        for event in events
        if event.action.kind == ActionKind.RECONNECT and "FM05" in event.violation_tags
    )
    untrusted = sum(1 for event in events if "FM03" in event.violation_tags)
    dependency_violations = sum(
        1
        for event in events
        if any(w.startswith("dependency gap:") for w in event.warnings)
    )
    blocked = sum(1 for event in events if event.outcome == Outcome.BLOCKED)

    completeness = evidence_completeness(
        facts.bundle, mission, facts.final_graph, facts.substitutions
    )
    degraded_total, limit_violations, validity = _degraded_numbers(spec, mission, facts)

    required = effective_required_ids(facts.final_graph, mission, facts.substitutions)
    deps_ok = all(
        facts.final_graph.state(n).availability >= mission.thresholds.a_min
        for n in required
        if n not in facts.substitutions
    )
    partners = [
        n
        for n in required
        if facts.final_graph.node(n).kind == NodeKind.EXTERNAL_PARTNER
    ]
    suppliers_ok = all(
        n in facts.substitutions
        or facts.final_graph.state(n).availability >= mission.thresholds.a_min
        for n in partners
    )

    findings = detect_failure_modes(
        events,
        facts.final_graph,
        mission,
        spec,
        substitutions=facts.substitutions,
        degraded_intervals=facts.degraded_intervals,
        approved_tick=facts.approved_tick,
        final_tick=facts.final_tick,
        verdict=facts.verdict,
    )

    return MetricsReport(
        scenario_id=facts.scenario_id,
        mission_id=facts.mission_id,
        planner_name=facts.planner_name,
        verdict=facts.verdict,
        time_to_mvf=facts.approved_tick,
        actions_attempted=len(events),
        actions_blocked=blocked,
        dependency_violations=dependency_violations,
        untrusted_identities_reused=untrusted,
        false_clean_restores=false_clean,
        unsafe_reconnection_attempts=unsafe,
        evidence_completeness=completeness,
        degraded_mode_duration=degraded_total,
        degraded_limit_violations=limit_violations,
        production_validity=validity,
        valid_throughput=mission.throughput * validity,
        dependencies_satisfied=deps_ok,
        supplier_coordination=suppliers_ok,
        fm_findings=findings,
    )


def compute_metrics(spec: ScenarioSpec, result: RunResult) -> MetricsReport:
    return compute_metrics_from_facts(spec, facts_from_result(result))


def metrics_from_log(
    spec: ScenarioSpec,
    mission_id: str,
    event_payloads: list[dict],
    planner_name: str = "",
) -> MetricsReport:
    """Score a run from its serialized event log alone."""
    events = tuple(event_from_json(p) for p in event_payloads)
    facts = facts_from_log(spec, mission_id, events, planner_name)
    return compute_metrics_from_facts(spec, facts)


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

#: (attribute, label, better) — better: -1 lower wins, +1 higher wins, 0 n/a.
_METRIC_ROWS: tuple[tuple[str, str, int], ...] = (
    ("verdict", "verdict", 0),
    ("time_to_mvf", "time to MVF (ticks)", -1),
    ("evidence_completeness", "evidence completeness", 1),
    ("dependency_violations", "dependency violations", -1),
    ("untrusted_identities_reused", "untrusted identities reused", -1),
    ("false_clean_restores", "false-clean restores", -1),
    ("unsafe_reconnection_attempts", "unsafe reconnection attempts", -1),
    ("degraded_mode_duration", "degraded-mode duration (ticks)", -1),
    ("degraded_limit_violations", "degraded limit violations", -1),
    ("production_validity", "production validity", 1),
    ("valid_throughput", "valid throughput", 1),
    ("dependencies_satisfied", "dependencies satisfied", 1),
    ("supplier_coordination", "supplier coordination", 1),
)


def _json_value(value):
    if isinstance(value, float):
        return round(value, 6)
    return value


def report_to_json(report: MetricsReport) -> dict:
    payload = {
        "planner": report.planner_name,
        "verdict": report.verdict,
        "time_to_mvf": report.time_to_mvf,
        "actions_attempted": report.actions_attempted,
        "actions_blocked": report.actions_blocked,
        "dependency_violations": report.dependency_violations,
        "untrusted_identities_reused": report.untrusted_identities_reused,
        "false_clean_restores": report.false_clean_restores,
        "unsafe_reconnection_attempts": report.unsafe_reconnection_attempts,
        "evidence_completeness": _json_value(report.evidence_completeness),
        "degraded_mode_duration": report.degraded_mode_duration,
        "degraded_limit_violations": report.degraded_limit_violations,
        "production_validity": _json_value(report.production_validity),
        "valid_throughput": _json_value(report.valid_throughput),
        "dependencies_satisfied": report.dependencies_satisfied,
        "supplier_coordination": report.supplier_coordination,
        "failure_modes": [
            {
                "code": f.code,
                "description": f.description,
                "occurrences": f.occurrences,
                "subjects": list(f.subjects),
            }
            for f in report.fm_findings
        ],
    }
    return payload


def comparison_to_json(reports: list[MetricsReport]) -> dict:
    if not reports:
        raise ValueError("nothing to compare")
    return {
        "format": REPORT_FORMAT,
        "scenario": reports[0].scenario_id,
        "mission": reports[0].mission_id,
        "runs": [report_to_json(r) for r in reports],
    }


def render_machine(reports: list[MetricsReport]) -> str:
    return json.dumps(comparison_to_json(reports), indent=2) + "\n"


def _format_cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.2f}"
    return str(value)


def render_text(reports: list[MetricsReport]) -> str:
    """Side-by-side table, one planner per column, plus failure-mode lines."""
    if not reports:
        raise ValueError("nothing to compare")
    names = [r.planner_name or "(run)" for r in reports]
    label_width = max(len(label) for _, label, _ in _METRIC_ROWS) + 2
    col_widths = [max(len(n), 12) for n in names]

    lines = [f"scenario {reports[0].scenario_id}  mission {reports[0].mission_id}"]
    header = " " * label_width + "  ".join(n.rjust(w) for n, w in zip(names, col_widths))
    lines.append(header)
    lines.append("-" * len(header))
    for attr, label, better in _METRIC_ROWS:
        values = [getattr(r, attr) for r in reports]
        cells = [_format_cell(v) for v in values]
        if better and len(reports) > 1:
            comparable = [
                (i, v) for i, v in enumerate(values) if isinstance(v, (int, float)) and not isinstance(v, bool)
            ]
            if comparable:
                best = (min if better < 0 else max)(v for _, v in comparable)
                cells = [
                    c + "*" if (i, values[i]) in comparable and values[i] == best else c
                    for i, c in enumerate(cells)
                ]
        row = label.ljust(label_width) + "  ".join(c.rjust(w) for c, w in zip(cells, col_widths))
        lines.append(row)
    for report in reports:
        codes = ", ".join(
            f"{f.code}x{f.occurrences}" for f in report.fm_findings
        )
        lines.append(f"{report.planner_name or '(run)'}: failure modes: {codes or 'none'}")
    lines.append("(* best value in row)")
    return "\n".join(lines) + "\n"
