"""Tabletop exercise service.

Wraps the simulator in a small HTTP API so a group can walk an incident
end to end: open a session, submit recovery actions one at a time, watch
the consequences, then end the session for a debrief.

Redaction discipline: while a session is live, every payload the
responder sees comes from the redacted view or from events their own
actions produced. Ground truth (which backups are contaminated, where
the attacker moved laterally) appears in exactly two places: the
facilitator endpoints, which need the configured token, and the debrief
after the session has ended. Warnings during play name process gaps
("no compromise assessment for that restore source"), never the truth.

Errors are JSON problem details: {"status", "title", "detail"}.
All session mutation happens under a per-session lock.
"""

from __future__ import annotations

import threading
import uuid

from fastapi import FastAPI, Header, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict

from . import catalog
from .actions import RecoveryAction, ActionKind
from .metrics import compute_metrics_from_facts, facts_from_result, report_to_json
from .scenario import (
    ScenarioSpec,
    redact_truth,
    render_scenario,
    try_parse_scenario,
    view_to_json,
)
from .sim import RunResult, SimState, apply_action, event_to_json, initial_state


class ProblemDetail(Exception):
    def __init__(self, status: int, title: str, detail: str, extra: dict | None = None):
        super().__init__(detail)
        self.status = status
        self.title = title
        self.detail = detail
        self.extra = extra or {}

    def response(self) -> JSONResponse:
        body = {"status": self.status, "title": self.title, "detail": self.detail}
        body.update(self.extra)
        return JSONResponse(status_code=self.status, content=body)


class Session:
    def __init__(self, session_id: str, spec: ScenarioSpec, mission_id: str):
        self.id = session_id
        self.spec = spec
        self.mission_id = mission_id
        self.state: SimState = initial_state(spec, mission_id)
        self.events: list = []
        self.ended = False
        self.debrief: dict | None = None
        self.lock = threading.Lock()


class CreateSessionBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: str | None = None
    scenario_doc: dict | None = None
    mission: str | None = None


class ActionBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: str
    subject: str
    auth_via: str | None = None
    restore_point: str | None = None


def _public_state(session: Session) -> dict:
    """What the responder may see mid-exercise."""
    state = session.state
    nodes = {
        node_id: {
            "availability": node_state.availability,
            "trust": node_state.trust,
            "evidence": node_state.evidence,
            "safety": node_state.safety.value,
        }
        for node_id, node_state in state.graph.states.items()
    }
    declared = None
    decision = state.decisions.get(session.mission_id)
    if decision is not None:
        declared = {
            "verdict": decision.verdict.value,
            "failed_conditions": list(decision.failed_conditions),
        }
    return {
        "tick": state.tick,
        "nodes": nodes,
        "gates": {ot: stage.value for ot, stage in sorted(state.gates.items())},
        "active_procedures": sorted(
            proc for proc, _, end in state.degraded_intervals if end is None
        ),
        "evidence": [
            {
                "id": item.id,
                "kind": item.kind.value,
                "subject": item.subject,
                "detail": item.detail,
                "tick": item.tick,
            }
            for item in state.bundle.items
        ],
        "declared": declared,
        "events_recorded": len(session.events),
        "horizon_ticks": session.spec.horizon_ticks,
    }


def _build_debrief(session: Session) -> dict:
    spec = session.spec
    result = RunResult(
        scenario_id=spec.id,
        mission_id=session.mission_id,
        planner_name="exercise",
        events=tuple(session.events),
        final=session.state,
    )
    report = compute_metrics_from_facts(spec, facts_from_result(result))
    compromise = spec.compromise
    return {
        "scenario": spec.id,
        "mission": session.mission_id,
        "verdict": report.verdict,
        "metrics": report_to_json(report),
        "failure_modes": [
            {
                "code": f.code,
                "description": f.description,
                "occurrences": f.occurrences,
                "subjects": list(f.subjects),
            }
            for f in report.fm_findings
        ],
        "truth": {
            "encrypted_nodes": list(compromise.encrypted_nodes),
            "exposed_credentials": list(compromise.exposed_credentials),
            "contaminated_backups": list(compromise.contaminated_backups),
            "lateral_movement_paths": [list(p) for p in compromise.lateral_movement_paths],
            "ot_visibility_uncertain": list(compromise.ot_visibility_uncertain),
        },
        "timeline": [
            {
                "tick": e.tick,
                "action": e.action.label(),
                "outcome": e.outcome.value,
                "tags": list(e.violation_tags),
            }
            for e in session.events
        ],
    }


def create_app(
    facilitator_token: str | None = None,
    default_scenario: ScenarioSpec | None = None,
) -> FastAPI:
    app = FastAPI(title="mvfsim exercise service", docs_url=None, redoc_url=None)
    # The browser console is served as static files from wherever is handy,
    # so cross-origin calls are the normal case. Sessions are in-memory
    # exercise state; the only privileged surface stays behind the token.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["content-type", "x-facilitator-token"],
    )
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    @app.exception_handler(ProblemDetail)
    async def _problem_handler(_request: Request, exc: ProblemDetail):
        return exc.response()

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(_request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(p) for p in first.get("loc", ()))
        detail = f"{where}: {first.get('msg', 'invalid request body')}"
        return JSONResponse(
            status_code=422,
            content={"status": 422, "title": "invalid request", "detail": detail},
        )

    def _get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise ProblemDetail(404, "unknown session", f"no session {session_id}")
        return session

    def _require_facilitator(token: str | None) -> None:
        if facilitator_token is None:
            raise ProblemDetail(
                403, "facilitator access not configured",
                "start the service with a facilitator token to use this endpoint",
            )
        if token != facilitator_token:
            raise ProblemDetail(403, "forbidden", "missing or wrong facilitator token")

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        if body.scenario is not None and body.scenario_doc is not None:
            raise ProblemDetail(
                400, "bad scenario reference",
                "provide exactly one of 'scenario' (builtin id) or 'scenario_doc'",
            )
        if body.scenario is None and body.scenario_doc is None:
            if default_scenario is None:
                raise ProblemDetail(
                    400, "bad scenario reference",
                    "provide exactly one of 'scenario' (builtin id) or 'scenario_doc'",
                )
            spec = default_scenario
        elif body.scenario is not None:
            try:
                spec = catalog.load_builtin(body.scenario)
            except KeyError:
                raise ProblemDetail(
                    404, "unknown scenario",
                    f"no builtin scenario {body.scenario!r}; try one of: "
                    + ", ".join(catalog.builtin_ids()),
                ) from None
        else:
            import json as _json

            spec, diagnostics = try_parse_scenario(_json.dumps(body.scenario_doc))
            if spec is None:
                raise ProblemDetail(
                    400, "invalid scenario document",
                    "; ".join(d.render() for d in diagnostics[:5]),
                )
        mission_id = body.mission
        if mission_id is None:
            if len(spec.missions) != 1:
                raise ProblemDetail(
                    400, "ambiguous mission",
                    "scenario defines several missions; set 'mission'",
                )
            mission_id = spec.missions[0].id
        else:
            try:
                spec.mission(mission_id)
            except KeyError:
                raise ProblemDetail(
                    404, "unknown mission", f"scenario has no mission {mission_id!r}"
                ) from None

        session = Session("s-" + uuid.uuid4().hex[:12], spec, mission_id)
        with registry_lock:
            sessions[session.id] = session
        return {
            "session": session.id,
            "scenario": spec.id,
            "mission": mission_id,
            "view": view_to_json(redact_truth(spec)),
            "state": _public_state(session),
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = _get_session(session_id)
        with session.lock:
            return {
                "session": session.id,
                "scenario": session.spec.id,
                "mission": session.mission_id,
                "ended": session.ended,
                "view": view_to_json(redact_truth(session.spec)),
                "state": _public_state(session),
                "events": [event_to_json(e) for e in session.events],
            }

    @app.post("/sessions/{session_id}/actions")
    def submit_action(session_id: str, body: ActionBody):
        session = _get_session(session_id)
        try:
            action_kind = ActionKind(body.kind)
        except ValueError:
            raise ProblemDetail(
                422, "invalid request", f"unknown action kind {body.kind!r}"
            ) from None
        with session.lock:
            if session.ended:
                raise ProblemDetail(
                    409, "session ended", "this session has ended; start a new one"
                )
            try:
                action = RecoveryAction(
                    kind=action_kind,
                    subject=body.subject,
                    auth_via=body.auth_via,
                    restore_point=body.restore_point,
                )
                state, event = apply_action(session.state, action)
            except (ValueError, KeyError) as exc:
                message = exc.args[0] if exc.args else str(exc)
                raise ProblemDetail(400, "invalid action", str(message)) from None
            session.state = state
            session.events.append(event)
            return {"event": event_to_json(event), "state": _public_state(session)}

    @app.post("/sessions/{session_id}/end")
    def end_session(session_id: str):
        session = _get_session(session_id)
        with session.lock:
            if session.ended:
                raise ProblemDetail(
                    409, "session already ended",
                    "the debrief was already issued; it is included here again",
                    extra={"debrief": session.debrief},
                )
            session.ended = True
            session.debrief = _build_debrief(session)
            return {"session": session.id, "debrief": session.debrief}

    @app.get("/sessions")
    def list_sessions(x_facilitator_token: str | None = Header(default=None)):
        _require_facilitator(x_facilitator_token)
        with registry_lock:
            rows = [
                {
                    "session": s.id,
                    "scenario": s.spec.id,
                    "mission": s.mission_id,
                    "tick": s.state.tick,
                    "ended": s.ended,
                    "events": len(s.events),
                }
                for s in sessions.values()
            ]
        return {"sessions": sorted(rows, key=lambda r: r["session"])}

    @app.get("/sessions/{session_id}/truth")
    def session_truth(session_id: str, x_facilitator_token: str | None = Header(default=None)):
        _require_facilitator(x_facilitator_token)
        session = _get_session(session_id)
        return {
            "session": session.id,
            "scenario_doc": render_scenario(session.spec),
        }

    return app
