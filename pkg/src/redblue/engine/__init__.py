"""Deterministic campaign engine: timed actions, activity-phase machine,
append-only event log, mission scoring."""

from redblue.engine.core import (
    ActionInstance,
    ActionOutcome,
    AuthorizationRefusedError,
    CampaignState,
    Engine,
    MoveRequest,
    UnknownActionError,
    run_campaign,
)
from redblue.engine.events import Event, EventKind, event_to_json_line
from redblue.engine.phases import ActivityPhase, spawn_phases
from redblue.engine.policies import PolicyView, get_policy, policy_names

__all__ = [
    "ActionInstance",
    "ActionOutcome",
    "ActivityPhase",
    "AuthorizationRefusedError",
    "CampaignState",
    "Engine",
    "Event",
    "EventKind",
    "MoveRequest",
    "PolicyView",
    "UnknownActionError",
    "event_to_json_line",
    "get_policy",
    "policy_names",
    "run_campaign",
    "spawn_phases",
]
