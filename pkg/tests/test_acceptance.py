"""Acceptance suite.

Eight criteria, one test each, every test printing a single
"acceptance N: PASS/FAIL" line directly to the terminal (bypassing
pytest's capture) so a scripted run can grep the outcome. Each test
also fails normally on any violated check, so this file never reports
green while an expectation quietly degraded.
"""

import itertools
import json
import random
import time
from contextlib import contextmanager

import pytest

from mvfsim.actions import ActionKind, RecoveryAction, RecoveryPlan
from mvfsim.catalog import builtin_ids, load_builtin
from mvfsim.cli import main
from mvfsim.feasibility import Verdict, evaluate_feasibility
from mvfsim.graph import NodeKind, SafetyStatus, bump, set_state
from mvfsim.metrics import compute_metrics, metrics_from_log
from mvfsim.planners import (
    DEPENDENCY_AWARE,
    EVIDENCE_AWARE_MVF,
    NEWEST_BACKUP_FIRST,
    STRATEGY_NAMES,
    plan,
)
from mvfsim.scenario import redact_truth
from mvfsim.sim import Outcome, apply_action, event_to_json, initial_state, oracle_search, run_plan

from generators import random_case, random_scenario
from oracles import conjunct_verdict


@contextmanager
def criterion(capsys, number, detail=""):
    try:
        yield
    except BaseException:
        with capsys.disabled():
            print(f"acceptance {number}: FAIL")
        raise
    with capsys.disabled():
        suffix = f"  ({detail})" if detail else ""
        print(f"acceptance {number}: PASS{suffix}")


def _first_restore_tick(result):
    for event in result.events:
        if event.action.kind is ActionKind.RESTORE and event.outcome is not Outcome.BLOCKED:
            return event.tick
    return None


def test_criterion_1_flagship_golden_comparison(capsys):
    with criterion(capsys, 1, "flagship verdicts and hygiene ordering"):
        started = time.monotonic()
        code = main(
            [
                "compare",
                "table9-line-a",
                "--strategies",
                "newest_backup_first,dependency_aware,evidence_aware_mvf",
                "--json",
            ]
        )
        elapsed = time.monotonic() - started
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        runs = {r["planner"]: r for r in payload["runs"]}
        newest = runs["newest_backup_first"]
        careful = runs["dependency_aware"]
        exemplar = runs["evidence_aware_mvf"]

        assert newest["verdict"] == "rejected"
        assert careful["verdict"] == "conditional"
        assert exemplar["verdict"] == "approved"

        assert newest["untrusted_identities_reused"] >= 1
        assert newest["false_clean_restores"] >= 1
        assert newest["unsafe_reconnection_attempts"] >= 1

        assert careful["false_clean_restores"] == 0
        assert careful["evidence_completeness"] < exemplar["evidence_completeness"]

        assert exemplar["failure_modes"] == []
        assert exemplar["evidence_completeness"] > max(
            newest["evidence_completeness"], careful["evidence_completeness"]
        )
        assert exemplar["time_to_mvf"] is not None

        # the conditional verdict must trace to the evidence condition, and
        # the exemplar's declaration cannot precede the others' first restores
        spec = load_builtin("table9-line-a")
        view = redact_truth(spec)
        mission = spec.missions[0].id
        careful_result = run_plan(spec, plan(view, mission, DEPENDENCY_AWARE))
        assert "evidence" in careful_result.decision.failed_conditions
        for strategy in (NEWEST_BACKUP_FIRST, DEPENDENCY_AWARE):
            other = run_plan(spec, plan(view, mission, strategy))
            first_restore = _first_restore_tick(other)
            assert first_restore is not None
            assert exemplar["time_to_mvf"] >= first_restore

        assert elapsed < 1.0


def test_criterion_2_predicate_matches_brute_force(capsys):
    with criterion(capsys, 2, "1000 random graphs, 0 mismatches"):
        started = time.monotonic()
        rng = random.Random(0xACCE01)
        mismatches = 0
        for _ in range(1000):
            graph, mission, substitutions = random_case(rng, max_nodes=10)
            decision = evaluate_feasibility(graph, mission, substitutions)
            expected_verdict, _ = conjunct_verdict(graph, mission, substitutions)
            if decision.verdict.value != expected_verdict:
                mismatches += 1
        elapsed = time.monotonic() - started
        assert mismatches == 0
        assert elapsed < 5.0


def test_criterion_3_monotonicity(capsys):
    with criterion(capsys, 3, "1000 single-attribute increases, 0 flips"):
        rng = random.Random(0xACCE03)
        checked = 0
        flips = 0
        while checked < 1000:
            graph, mission, substitutions = random_case(rng, max_nodes=10)
            before = evaluate_feasibility(graph, mission, substitutions)
            node_id = rng.choice([n.id for n in graph.nodes])
            state = graph.state(node_id)
            options = [a for a in ("availability", "trust", "evidence") if getattr(state, a) < 3]
            if state.safety is not SafetyStatus.APPROVED:
                options.append("safety")
            if not options:
                continue
            attr = rng.choice(options)
            if attr == "safety":
                bumped = bump(state, safety=SafetyStatus.APPROVED)
            else:
                bumped = bump(state, **{attr: getattr(state, attr) + 1})
            after = evaluate_feasibility(
                set_state(graph, node_id, bumped), mission, substitutions
            )
            checked += 1
            if before.verdict is Verdict.APPROVED and after.verdict is not Verdict.APPROVED:
                flips += 1
        assert flips == 0


def test_criterion_4_closed_loop_reverification(capsys):
    with criterion(capsys, 4, "all builtins x 6 strategies re-verify"):
        discrepancies = 0
        for scenario_id in builtin_ids():
            spec = load_builtin(scenario_id)
            view = redact_truth(spec)
            mission_id = spec.missions[0].id
            for strategy in STRATEGY_NAMES:
                result = run_plan(spec, plan(view, mission_id, strategy))
                decision = result.decision
                if decision is None or decision.verdict is not Verdict.APPROVED:
                    continue
                final = result.final
                recheck = evaluate_feasibility(
                    final.graph, spec.mission(mission_id), final.substitutions
                )
                if recheck.verdict is not Verdict.APPROVED:
                    discrepancies += 1
        assert discrepancies == 0


def test_criterion_5_oracle_bound_on_micro_scenarios(capsys):
    with criterion(capsys, 5, "search minimum bounds the best planner"):
        started = time.monotonic()
        micro = [
            scenario_id
            for scenario_id in builtin_ids()
            if len(load_builtin(scenario_id).graph.nodes) <= 8
        ]
        assert micro, "no micro builtins to check"
        for scenario_id in micro:
            spec = load_builtin(scenario_id)
            mission_id = spec.missions[0].id
            searched = oracle_search(spec, mission_id, max_len=12)
            assert searched.min_ticks is not None
            replay = run_plan(spec, searched.witness)
            assert replay.decision is not None
            assert replay.decision.verdict is Verdict.APPROVED
            assert not any(e.outcome is Outcome.VIOLATION for e in replay.events)
            assert replay.final.approved_tick == searched.min_ticks

            best = run_plan(
                spec, plan(redact_truth(spec), mission_id, EVIDENCE_AWARE_MVF)
            )
            if (
                best.decision is not None
                and best.decision.verdict is Verdict.APPROVED
            ):
                assert searched.min_ticks <= best.final.approved_tick
        assert time.monotonic() - started < 60.0


def test_criterion_6_determinism_of_reports(capsys):
    with criterion(capsys, 6, "10 repetitions byte-identical"):
        run_argv = ["run", "table9-line-a", "--strategy", "evidence_aware_mvf", "--json"]
        compare_argv = ["compare", "micro-3node", "--json"]
        outputs = {"run": set(), "compare": set()}
        for _ in range(10):
            main(run_argv)
            outputs["run"].add(capsys.readouterr().out)
            main(compare_argv)
            outputs["compare"].add(capsys.readouterr().out)
        assert len(outputs["run"]) == 1
        assert len(outputs["compare"]) == 1


def test_criterion_7_log_sufficiency(capsys):
    with criterion(capsys, 7, "log-recomputed metrics equal in-process"):
        for scenario_id in builtin_ids():
            spec = load_builtin(scenario_id)
            view = redact_truth(spec)
            mission_id = spec.missions[0].id
            for strategy in STRATEGY_NAMES:
                result = run_plan(spec, plan(view, mission_id, strategy))
                live = compute_metrics(spec, result)
                payloads = json.loads(
                    json.dumps([event_to_json(e) for e in result.events])
                )
                replayed = metrics_from_log(spec, mission_id, payloads, strategy)
                assert replayed == live


def _fuzz_actions(rng, spec, count):
    graph = spec.graph
    identities = [n.id for n in graph.nodes_of_kind(NodeKind.IDENTITY)]
    auth = identities[0] if identities else None
    mission = spec.missions[0]
    pool = []
    for node in graph.nodes:
        pool.append(RecoveryAction(ActionKind.FORENSIC_SCAN, node.id, auth_via=auth))
        pool.append(RecoveryAction(ActionKind.VALIDATE_OFFLINE, node.id, auth_via=auth))
        if node.kind == NodeKind.OT_COMPONENT:
            pool.append(RecoveryAction(ActionKind.OPEN_GATE, node.id, auth_via=auth))
            pool.append(RecoveryAction(ActionKind.RECONNECT, node.id, auth_via=auth))
            pool.append(RecoveryAction(ActionKind.RECONNECT, node.id, auth_via=auth))
        if node.kind == NodeKind.IDENTITY:
            pool.append(RecoveryAction(ActionKind.RESET_CREDENTIALS, node.id, auth_via=auth))
    for point in spec.restore_points:
        pool.append(
            RecoveryAction(
                ActionKind.RESTORE, point.target_node, auth_via=auth, restore_point=point.id
            )
        )
    for procedure in spec.degraded_procedures:
        pool.append(RecoveryAction(ActionKind.ENTER_DEGRADED_MODE, procedure.id, auth_via=auth))
    pool.append(RecoveryAction(ActionKind.ASSESS_MISSION_IMPACT, mission.id))
    pool.append(RecoveryAction(ActionKind.DECLARE_MVF, mission.id, auth_via=auth))
    pool.append(RecoveryAction(ActionKind.ROLLBACK, mission.id, auth_via=auth))
    return [rng.choice(pool) for _ in range(count)]


def test_criterion_8_gate_safety_invariant(capsys):
    with criterion(capsys, 8, "10000 fuzzed sequences, 0 unsafe approvals"):
        rng = random.Random(0xACCE08)
        sequences = 0
        violations = 0
        while sequences < 10_000:
            spec = random_scenario(rng, max_nodes=6)
            ot_nodes = [
                n.id for n in spec.graph.nodes_of_kind(NodeKind.OT_COMPONENT)
            ]
            for _ in range(100):
                sequences += 1
                state = initial_state(spec, spec.missions[0].id)
                approved_at_start = {
                    n
                    for n in ot_nodes
                    if state.graph.state(n).safety is SafetyStatus.APPROVED
                }
                opened: set[str] = set()
                for action in _fuzz_actions(rng, spec, 8):
                    state, event = apply_action(state, action)
                    if (
                        action.kind is ActionKind.OPEN_GATE
                        and event.outcome is not Outcome.BLOCKED
                    ):
                        opened.add(action.subject)
                    for node_id in ot_nodes:
                        if node_id in approved_at_start or node_id in opened:
                            continue
                        if state.graph.state(node_id).safety is SafetyStatus.APPROVED:
                            violations += 1
                if sequences >= 10_000:
                    break
        assert sequences >= 10_000
        assert violations == 0
