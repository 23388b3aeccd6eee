"""CLI contract tests: exit codes, output shapes, file side effects.

Everything drives `main(argv)` in-process; stdout/stderr are captured
through capsys so the assertions see exactly what a shell would.
"""

import json

import pytest

from mvfsim.cli import (
    EXIT_INVALID,
    EXIT_NOT_APPROVED,
    EXIT_OK,
    EXIT_USAGE,
    main,
)
from mvfsim.catalog import builtin_ids
from mvfsim.scenario import render_scenario


@pytest.fixture(autouse=True)
def plain_output(monkeypatch):
    monkeypatch.setenv("MVF_NO_COLOR", "1")


class TestScenarios:
    def test_lists_builtins(self, capsys):
        assert main(["scenarios"]) == EXIT_OK
        out = capsys.readouterr().out
        for builtin_id in builtin_ids():
            assert builtin_id in out


class TestValidate:
    def test_builtin_ok(self, capsys):
        assert main(["validate", "table9-line-a"]) == EXIT_OK
        assert "ok (builtin)" in capsys.readouterr().out

    def test_valid_file_ok(self, tmp_path, capsys, micro3):
        path = tmp_path / "scenario.json"
        path.write_text(render_scenario(micro3))
        assert main(["validate", str(path)]) == EXIT_OK
        assert "ok (" in capsys.readouterr().out

    def test_truncated_file_reports_position(self, tmp_path, capsys, micro3):
        path = tmp_path / "cut.json"
        path.write_text(render_scenario(micro3)[:200])
        assert main(["validate", str(path)]) == EXIT_INVALID
        err = capsys.readouterr().err
        assert "line" in err
        assert "problem(s)" in err

    def test_semantic_problem_lists_diagnostics(self, tmp_path, capsys, micro3):
        doc = json.loads(render_scenario(micro3))
        doc["missions"] = []
        path = tmp_path / "no-missions.json"
        path.write_text(json.dumps(doc))
        assert main(["validate", str(path)]) == EXIT_INVALID
        assert "mission" in capsys.readouterr().err

    def test_missing_file_is_usage_error(self, capsys):
        assert main(["validate", "/tmp/does-not-exist-anywhere.json"]) == EXIT_USAGE
        assert "no such file" in capsys.readouterr().err


class TestRun:
    def test_approved_run_exits_zero(self, capsys):
        code = main(["run", "table9-line-a", "--strategy", "evidence_aware_mvf"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "approved" in out

    def test_rejected_run_exits_three(self, capsys):
        code = main(["run", "table9-line-a", "--strategy", "newest_backup_first"])
        assert code == EXIT_NOT_APPROVED
        assert "rejected" in capsys.readouterr().out

    def test_unknown_strategy_exits_two_and_lists_names(self, capsys):
        code = main(["run", "table9-line-a", "--strategy", "wing_it"])
        assert code == EXIT_USAGE
        err = capsys.readouterr().err
        assert "wing_it" in err
        assert "evidence_aware_mvf" in err

    def test_unknown_mission_exits_two(self, capsys):
        code = main(
            ["run", "table9-line-a", "--strategy", "evidence_aware_mvf", "--mission", "nope"]
        )
        assert code == EXIT_USAGE
        assert "nope" in capsys.readouterr().err

    def test_unknown_scenario_exits_two(self, capsys):
        code = main(["run", "bogus-id", "--strategy", "evidence_aware_mvf"])
        assert code == EXIT_USAGE
        err = capsys.readouterr().err
        assert "bogus-id" in err
        assert "table9-line-a" in err  # the message lists what exists

    def test_trace_line_format(self, capsys):
        main(["run", "table9-line-a", "--strategy", "newest_backup_first", "--trace"])
        lines = capsys.readouterr().out.splitlines()
        trace = [l for l in lines if l.startswith("tick=")]
        assert trace, "expected trace lines"
        first = trace[0]
        assert " action=" in first and " outcome=" in first and " tags=[" in first

    def test_json_flag_emits_report(self, capsys):
        main(["run", "table9-line-a", "--strategy", "evidence_aware_mvf", "--json"])
        payload = json.loads(capsys.readouterr().out)
        assert payload["runs"][0]["verdict"] == "approved"

    def test_out_writes_machine_report(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        main(
            [
                "run",
                "table9-line-a",
                "--strategy",
                "evidence_aware_mvf",
                "--out",
                str(out),
            ]
        )
        payload = json.loads(out.read_text())
        assert payload["runs"][0]["time_to_mvf"] == 42

    def test_log_round_trips_through_run(self, tmp_path, capsys):
        log = tmp_path / "events.json"
        main(
            [
                "run",
                "table9-line-a",
                "--strategy",
                "dependency_aware",
                "--log",
                str(log),
            ]
        )
        payload = json.loads(log.read_text())
        assert payload["scenario"] == "table9-line-a"
        assert payload["planner"] == "dependency_aware"
        assert payload["events"], "expected serialized events"
        assert {"tick", "action", "outcome"} <= set(payload["events"][0])

    def test_plan_file_replay(self, tmp_path, capsys):
        log = tmp_path / "plan.json"
        from mvfsim.actions import plan_to_json
        from mvfsim.catalog import load_builtin
        from mvfsim.planners import plan as build_plan
        from mvfsim.scenario import redact_truth

        spec = load_builtin("micro-3node")
        built = build_plan(redact_truth(spec), spec.missions[0].id, "evidence_aware_mvf")
        log.write_text(json.dumps(plan_to_json(built)))
        code = main(["run", "micro-3node", "--plan-file", str(log)])
        assert code == EXIT_OK

    def test_plan_file_mission_conflict(self, tmp_path, capsys):
        plan_path = tmp_path / "plan.json"
        plan_path.write_text(
            json.dumps(
                {
                    "format": "mvf-plan/1",
                    "planner_name": "x",
                    "mission": "line-a-mvp",
                    "actions": [],
                }
            )
        )
        code = main(
            ["run", "table9-line-a", "--plan-file", str(plan_path), "--mission", "other"]
        )
        assert code == EXIT_USAGE
        assert "disagrees" in capsys.readouterr().err

    def test_garbage_plan_file_exits_one(self, tmp_path, capsys):
        plan_path = tmp_path / "plan.json"
        plan_path.write_text("{not json")
        code = main(["run", "table9-line-a", "--plan-file", str(plan_path)])
        assert code == EXIT_INVALID
        assert "not JSON" in capsys.readouterr().err

    def test_strategy_and_plan_file_mutually_exclusive(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(
                [
                    "run",
                    "table9-line-a",
                    "--strategy",
                    "evidence_aware_mvf",
                    "--plan-file",
                    "x.json",
                ]
            )
        assert excinfo.value.code == 2

    def test_repeat_invocations_identical(self, capsys):
        main(["run", "table9-line-a", "--strategy", "evidence_aware_mvf", "--json"])
        first = capsys.readouterr().out
        main(["run", "table9-line-a", "--strategy", "evidence_aware_mvf", "--json"])
        second = capsys.readouterr().out
        assert first == second


class TestCompare:
    def test_default_compares_all_six(self, capsys):
        assert main(["compare", "table9-line-a", "--json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["runs"]) == 6

    def test_all_keyword(self, capsys):
        assert main(["compare", "table9-line-a", "--strategies", "all", "--json"]) == EXIT_OK
        assert len(json.loads(capsys.readouterr().out)["runs"]) == 6

    def test_subset(self, capsys):
        code = main(
            [
                "compare",
                "table9-line-a",
                "--strategies",
                "newest_backup_first,evidence_aware_mvf",
                "--json",
            ]
        )
        assert code == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert [r["planner"] for r in payload["runs"]] == [
            "newest_backup_first",
            "evidence_aware_mvf",
        ]

    def test_unknown_strategy_in_list(self, capsys):
        code = main(["compare", "table9-line-a", "--strategies", "newest_backup_first,nope"])
        assert code == EXIT_USAGE
        assert "nope" in capsys.readouterr().err

    def test_text_table_on_stdout(self, capsys):
        assert main(["compare", "micro-3node"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "time to MVF (ticks)" in out
        assert "failure modes" in out

    def test_out_file(self, tmp_path, capsys):
        out = tmp_path / "cmp.json"
        main(["compare", "micro-3node", "--out", str(out)])
        assert json.loads(out.read_text())["scenario"] == "micro-3node"


class TestOracle:
    def test_presatisfied_json(self, capsys):
        code = main(["oracle", "micro-presatisfied", "--max-len", "3", "--json"])
        assert code == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["min_ticks"] == 0
        assert payload["witness"]["actions"]

    def test_infeasible_states_so(self, capsys):
        code = main(["oracle", "micro-3node", "--max-len", "2"])
        assert code == EXIT_OK
        assert "no approved plan within 2 actions" in capsys.readouterr().out

    def test_witness_lines_printed(self, capsys):
        code = main(["oracle", "micro-presatisfied", "--max-len", "2"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "minimum completion: tick 0" in out
        assert "declare_mvf" in out

    def test_excessive_max_len_exits_one(self, capsys):
        code = main(["oracle", "micro-3node", "--max-len", "99"])
        assert code == EXIT_INVALID
        assert "enumeration bound" in capsys.readouterr().err


class TestServe:
    def test_blank_token_rejected(self, capsys):
        code = main(["serve", "--facilitator-token", "  "])
        assert code == EXIT_USAGE
        assert "token" in capsys.readouterr().err

    def test_unknown_default_scenario_rejected(self, capsys):
        code = main(["serve", "--scenario", "not-a-thing", "--facilitator-token", "tok"])
        assert code == EXIT_USAGE
        assert "not-a-thing" in capsys.readouterr().err
