"""Recovery actions and plans.

An action is one discrete responder move: scan a backup, restore a system,
rebuild an identity, open a gate, reconnect a cell, declare the mission.
Plans are ordered action sequences produced by planners (or typed in by
exercise participants) and consumed by the simulator.

Every kind except assess_mission_impact is authenticated via an identity
node (auth_via); scenarios that define no identities run administration
out-of-band and may leave auth_via empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class ActionKind(str, Enum):
    ASSESS_MISSION_IMPACT = "assess_mission_impact"
    FORENSIC_SCAN = "forensic_scan"
    RESTORE = "restore"
    REBUILD_IDENTITY = "rebuild_identity"
    RESET_CREDENTIALS = "reset_credentials"
    VALIDATE_OFFLINE = "validate_offline"
    OPEN_GATE = "open_gate"
    RECONNECT = "reconnect"
    ENTER_DEGRADED_MODE = "enter_degraded_mode"
    EXIT_DEGRADED_MODE = "exit_degraded_mode"
    CONFIRM_SUPPLIER = "confirm_supplier"
    DECLARE_MVF = "declare_mvf"
    ROLLBACK = "rollback"


# Ticks each kind takes unless the scenario overrides it. Zero-duration
# kinds are paperwork moments, not field work.
DEFAULT_ACTION_DURATIONS: dict[str, int] = {
    ActionKind.ASSESS_MISSION_IMPACT.value: 0,
    ActionKind.FORENSIC_SCAN.value: 4,
    ActionKind.RESTORE.value: 6,
    ActionKind.REBUILD_IDENTITY.value: 8,
    ActionKind.RESET_CREDENTIALS.value: 2,
    ActionKind.VALIDATE_OFFLINE.value: 3,
    ActionKind.OPEN_GATE.value: 1,
    ActionKind.RECONNECT.value: 1,
    ActionKind.ENTER_DEGRADED_MODE.value: 1,
    ActionKind.EXIT_DEGRADED_MODE.value: 1,
    ActionKind.CONFIRM_SUPPLIER.value: 2,
    ActionKind.DECLARE_MVF.value: 0,
    ActionKind.ROLLBACK.value: 1,
}

#: Kinds whose subject is a mission id rather than a node/backup/procedure.
MISSION_SUBJECT_KINDS = frozenset(
    {ActionKind.ASSESS_MISSION_IMPACT, ActionKind.DECLARE_MVF, ActionKind.ROLLBACK}
)

#: Kinds exempt from authenticated-identity trust checks: assessment carries
#: no auth at all, and identity repair is done from a clean room.
AUTH_EXEMPT_KINDS = frozenset(
    {ActionKind.ASSESS_MISSION_IMPACT, ActionKind.REBUILD_IDENTITY, ActionKind.RESET_CREDENTIALS}
)


@dataclass(frozen=True)
class RecoveryAction:
    kind: ActionKind
    subject: str
    auth_via: str | None = None
    restore_point: str | None = None

    def __post_init__(self) -> None:
        if not self.subject:
            raise ValueError(f"{self.kind.value}: subject must be non-empty")
        if self.kind == ActionKind.RESTORE and not self.restore_point:
            raise ValueError("restore requires a restore_point")
        if self.kind != ActionKind.RESTORE and self.restore_point is not None:
            raise ValueError(f"{self.kind.value}: restore_point only applies to restore")

    def label(self) -> str:
        if self.restore_point:
            return f"{self.kind.value}({self.subject}<-{self.restore_point})"
        return f"{self.kind.value}({self.subject})"


@dataclass(frozen=True)
class RecoveryPlan:
    planner_name: str
    mission_id: str
    actions: tuple[RecoveryAction, ...]

    def __len__(self) -> int:
        return len(self.actions)


PLAN_FORMAT = "mvf-plan/1"


def action_to_json(action: RecoveryAction) -> dict:
    payload: dict = {"kind": action.kind.value, "subject": action.subject}
    if action.auth_via is not None:
        payload["auth_via"] = action.auth_via
    if action.restore_point is not None:
        payload["restore_point"] = action.restore_point
    return payload


def action_from_json(payload: dict) -> RecoveryAction:
    if not isinstance(payload, dict):
        raise ValueError("action must be an object")
    unknown = set(payload) - {"kind", "subject", "auth_via", "restore_point"}
    if unknown:
        raise ValueError(f"action has unknown keys: {', '.join(sorted(unknown))}")
    try:
        kind = ActionKind(payload["kind"])
    except KeyError:
        raise ValueError("action needs a kind") from None
    except ValueError:
        raise ValueError(f"unknown action kind: {payload['kind']!r}") from None
    subject = payload.get("subject")
    if not isinstance(subject, str) or not subject:
        raise ValueError("action needs a non-empty subject")
    auth_via = payload.get("auth_via")
    if auth_via is not None and not isinstance(auth_via, str):
        raise ValueError("auth_via must be a string when present")
    restore_point = payload.get("restore_point")
    if restore_point is not None and not isinstance(restore_point, str):
        raise ValueError("restore_point must be a string when present")
    return RecoveryAction(kind=kind, subject=subject, auth_via=auth_via, restore_point=restore_point)


def plan_to_json(plan: RecoveryPlan) -> dict:
    return {
        "format": PLAN_FORMAT,
        "planner_name": plan.planner_name,
        "mission": plan.mission_id,
        "actions": [action_to_json(a) for a in plan.actions],
    }


def plan_from_json(payload: dict) -> RecoveryPlan:
    if not isinstance(payload, dict):
        raise ValueError("plan must be an object")
    if payload.get("format") != PLAN_FORMAT:
        raise ValueError(f"plan format must be {PLAN_FORMAT!r}")
    unknown = set(payload) - {"format", "planner_name", "mission", "actions"}
    if unknown:
        raise ValueError(f"plan has unknown keys: {', '.join(sorted(unknown))}")
    planner_name = payload.get("planner_name")
    mission_id = payload.get("mission")
    actions = payload.get("actions")
    if not isinstance(planner_name, str) or not planner_name:
        raise ValueError("plan needs a planner_name")
    if not isinstance(mission_id, str) or not mission_id:
        raise ValueError("plan needs a mission")
    if not isinstance(actions, list):
        raise ValueError("plan actions must be a list")
    return RecoveryPlan(
        planner_name=planner_name,
        mission_id=mission_id,
        actions=tuple(action_from_json(a) for a in actions),
    )
