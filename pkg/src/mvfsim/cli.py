"""Command-line front end.

Exit codes are part of the contract:

  0  success; for `run`, the mission was approved
  1  the input was understood but invalid (scenario format, bad plan file)
  2  usage or environment problems (missing file, busy port, bad flag values)
  3  `run` completed but the verdict was rejected or conditional
  4  internal error (a bug in this package, not in your input)

The verdict-as-exit-code rule makes shell assertions one-liners:
`mvfsim run table9-line-a --strategy evidence_aware_mvf && echo approved`.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import catalog
from .actions import plan_from_json
from .metrics import compute_metrics, render_machine, render_text
from .planners import STRATEGY_NAMES, plan
from .scenario import (
    ScenarioFormatError,
    ScenarioSpec,
    redact_truth,
    try_parse_scenario,
)
from .sim import event_to_json, oracle_search, run_plan

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_NOT_APPROVED = 3
EXIT_INTERNAL = 4


def _color_enabled(stream) -> bool:
    if os.environ.get("MVF_NO_COLOR"):
        return False
    return hasattr(stream, "isatty") and stream.isatty()


_STYLES = {"red": "31", "green": "32", "yellow": "33", "bold": "1"}


def _style(text: str, style: str, enabled: bool) -> str:
    if not enabled:
        return text
    return f"\x1b[{_STYLES[style]}m{text}\x1b[0m"


class _UsageError(Exception):
    pass


class _InputError(Exception):
    pass


def _load_scenario(ref: str) -> ScenarioSpec:
    """A scenario argument is a builtin id or a file path."""
    if ref in catalog.builtin_ids():
        return catalog.load_builtin(ref)
    path = Path(ref)
    if not path.exists():
        raise _UsageError(
            f"{ref!r} is neither a builtin scenario ({', '.join(catalog.builtin_ids())}) nor a file"
        )
    spec, diagnostics = try_parse_scenario(path.read_text(encoding="utf-8"))
    if spec is None:
        raise ScenarioFormatError(diagnostics)
    return spec


def _pick_mission(spec: ScenarioSpec, mission_id: str | None) -> str:
    if mission_id is not None:
        try:
            spec.mission(mission_id)
        except KeyError:
            raise _UsageError(
                f"no mission {mission_id!r} in {spec.id}; "
                f"defined: {', '.join(m.id for m in spec.missions)}"
            ) from None
        return mission_id
    if len(spec.missions) == 1:
        return spec.missions[0].id
    raise _UsageError(
        "scenario defines several missions; pick one with --mission "
        f"({', '.join(m.id for m in spec.missions)})"
    )


def _trace_lines(events) -> list[str]:
    lines = []
    for event in events:
        tags = ",".join(event.violation_tags)
        line = f"tick={event.tick} action={event.action.label()} outcome={event.outcome.value} tags=[{tags}]"
        if event.reason:
            line += f' reason="{event.reason}"'
        lines.append(line)
    return lines


def _cmd_scenarios(_args) -> int:
    for builtin_id in catalog.builtin_ids():
        spec = catalog.load_builtin(builtin_id)
        missions = ", ".join(m.id for m in spec.missions)
        print(f"{builtin_id}: {len(spec.graph.nodes)} nodes, missions: {missions}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    color = _color_enabled(sys.stderr)
    if args.scenario in catalog.builtin_ids():
        print(f"{args.scenario}: ok (builtin)")
        return EXIT_OK
    path = Path(args.scenario)
    if not path.exists():
        raise _UsageError(f"no such file: {args.scenario}")
    spec, diagnostics = try_parse_scenario(path.read_text(encoding="utf-8"))
    if spec is None:
        for diagnostic in diagnostics:
            print(_style(diagnostic.render(), "red", color), file=sys.stderr)
        print(f"{args.scenario}: {len(diagnostics)} problem(s)", file=sys.stderr)
        return EXIT_INVALID
    print(f"{args.scenario}: ok ({len(spec.graph.nodes)} nodes, {len(spec.missions)} mission(s))")
    return EXIT_OK


def _cmd_run(args) -> int:
    spec = _load_scenario(args.scenario)
    if args.strategy is not None:
        mission_id = _pick_mission(spec, args.mission)
        if args.strategy not in STRATEGY_NAMES:
            raise _UsageError(
                f"unknown strategy {args.strategy!r}; pick one of: {', '.join(STRATEGY_NAMES)}"
            )
        view = redact_truth(spec)
        built = plan(view, mission_id, args.strategy)
    else:
        path = Path(args.plan_file)
        if not path.exists():
            raise _UsageError(f"no such plan file: {args.plan_file}")
        try:
            built = plan_from_json(json.loads(path.read_text(encoding="utf-8")))
        except json.JSONDecodeError as exc:
            raise _InputError(f"{args.plan_file}: not JSON: {exc}") from None
        except ValueError as exc:
            raise _InputError(f"{args.plan_file}: {exc}") from None
        if args.mission is not None and args.mission != built.mission_id:
            raise _UsageError(
                f"--mission {args.mission!r} disagrees with the plan file "
                f"({built.mission_id!r})"
            )
        mission_id = built.mission_id
    result = run_plan(spec, built)
    report = compute_metrics(spec, result)

    if args.trace:
        for line in _trace_lines(result.events):
            print(line)
    if args.log:
        payload = {
            "scenario": spec.id,
            "mission": mission_id,
            "planner": built.planner_name,
            "events": [event_to_json(e) for e in result.events],
        }
        Path(args.log).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    if args.out:
        Path(args.out).write_text(render_machine([report]), encoding="utf-8")
    if args.json:
        print(render_machine([report]), end="")
    else:
        color = _color_enabled(sys.stdout)
        styled = {"approved": "green", "conditional": "yellow", "rejected": "red"}
        text = render_text([report])
        verdict = report.verdict
        if verdict in styled:
            text = text.replace(verdict, _style(verdict, styled[verdict], color), 1)
        print(text, end="")
    return EXIT_OK if report.verdict == "approved" else EXIT_NOT_APPROVED


def _cmd_compare(args) -> int:
    spec = _load_scenario(args.scenario)
    mission_id = _pick_mission(spec, args.mission)
    if args.strategies is None or args.strategies == "all":
        strategies = list(STRATEGY_NAMES)
    else:
        strategies = args.strategies.split(",")
    for strategy in strategies:
        if strategy not in STRATEGY_NAMES:
            raise _UsageError(
                f"unknown strategy {strategy!r}; pick from: {', '.join(STRATEGY_NAMES)}"
            )
    view = redact_truth(spec)
    reports = []
    for strategy in strategies:
        result = run_plan(spec, plan(view, mission_id, strategy))
        reports.append(compute_metrics(spec, result))
    if args.out:
        Path(args.out).write_text(render_machine(reports), encoding="utf-8")
    if args.json:
        print(render_machine(reports), end="")
    else:
        print(render_text(reports), end="")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    spec = _load_scenario(args.scenario)
    mission_id = _pick_mission(spec, args.mission)
    try:
        result = oracle_search(spec, mission_id, max_len=args.max_len)
    except ValueError as exc:
        raise _InputError(str(exc)) from None
    if args.json:
        from .actions import plan_to_json

        payload = {
            "scenario": result.scenario_id,
            "mission": result.mission_id,
            "max_len": result.max_len,
            "min_ticks": result.min_ticks,
            "explored": result.explored,
            "witness": plan_to_json(result.witness) if result.witness else None,
        }
        print(json.dumps(payload, indent=2))
        return EXIT_OK
    if result.min_ticks is None:
        print(f"no approved plan within {result.max_len} actions ({result.explored} transitions explored)")
        return EXIT_OK
    print(f"minimum completion: tick {result.min_ticks} ({result.explored} transitions explored)")
    for action in result.witness.actions:
        print(f"  {action.label()}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    token = args.facilitator_token
    if token is None:
        token = os.environ.get("MVF_FACILITATOR_TOKEN")
    if token is not None and (not token or token != token.strip()):
        raise _UsageError("facilitator token must be non-empty with no surrounding whitespace")
    default_scenario = _load_scenario(args.scenario) if args.scenario else None
    app = create_app(facilitator_token=token, default_scenario=default_scenario)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except (OSError, SystemExit) as exc:
        if isinstance(exc, SystemExit) and not exc.code:
            return EXIT_OK
        print(f"cannot serve on {args.host}:{args.port}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvfsim",
        description="Dependency-graph simulator for ransomware recovery of factories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("scenarios", help="list builtin scenarios").set_defaults(fn=_cmd_scenarios)

    p_validate = sub.add_parser("validate", help="check a scenario file")
    p_validate.add_argument("scenario")
    p_validate.set_defaults(fn=_cmd_validate)

    p_run = sub.add_parser("run", help="run one planner strategy or a saved plan")
    p_run.add_argument("scenario", help="builtin id or scenario file")
    p_run.add_argument("--mission", default=None)
    source = p_run.add_mutually_exclusive_group(required=True)
    source.add_argument("--strategy", default=None, help=", ".join(STRATEGY_NAMES))
    source.add_argument("--plan-file", default=None, help="JSON plan to replay")
    p_run.add_argument("--trace", action="store_true", help="print one line per event")
    p_run.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    p_run.add_argument("--out", default=None, help="write the machine report to this file")
    p_run.add_argument("--log", default=None, help="write the event log to this file")
    p_run.set_defaults(fn=_cmd_run)

    p_compare = sub.add_parser("compare", help="run several strategies side by side")
    p_compare.add_argument("scenario")
    p_compare.add_argument("--mission", default=None)
    p_compare.add_argument(
        "--strategies", default=None, help="comma-separated, or 'all' (the default)"
    )
    p_compare.add_argument("--json", action="store_true")
    p_compare.add_argument("--out", default=None, help="write the machine report to this file")
    p_compare.set_defaults(fn=_cmd_compare)

    p_oracle = sub.add_parser("oracle", help="exhaustive search for the fastest clean approval")
    p_oracle.add_argument("scenario")
    p_oracle.add_argument("--mission", default=None)
    p_oracle.add_argument("--max-len", type=int, default=12)
    p_oracle.add_argument("--json", action="store_true")
    p_oracle.set_defaults(fn=_cmd_oracle)

    p_serve = sub.add_parser("serve", help="start the tabletop exercise service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8570)
    p_serve.add_argument(
        "--scenario",
        default=None,
        help="default scenario for new sessions (builtin id or file)",
    )
    p_serve.add_argument(
        "--facilitator-token",
        default=None,
        help="token for facilitator endpoints (default: MVF_FACILITATOR_TOKEN)",
    )
    p_serve.set_defaults(fn=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    color = _color_enabled(sys.stderr)
    try:
        return args.fn(args)
    except ScenarioFormatError as exc:
        for diagnostic in exc.diagnostics:
            print(_style(diagnostic.render(), "red", color), file=sys.stderr)
        return EXIT_INVALID
    except _InputError as exc:
        print(_style(str(exc), "red", color), file=sys.stderr)
        return EXIT_INVALID
    except (KeyError, ValueError) as exc:
        print(_style(str(exc.args[0]) if exc.args else str(exc), "red", color), file=sys.stderr)
        return EXIT_INVALID
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK
    except Exception as exc:  # noqa: BLE001 - last-resort boundary
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
