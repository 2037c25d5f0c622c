"""Append-only campaign event log.

Events are sorted within each tick by (side, action id, kind, payload) and
carry a global strictly-increasing sequence number; the JSON Lines rendering
(stable key order) is the determinism test artifact. Format details in
docs/event-log.md.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

from redblue.campaign.model import Side


class EventKind(enum.Enum):
    ACTION_SCHEDULED = "ActionScheduled"
    ACTION_REJECTED = "ActionRejected"
    ACTION_COMPLETED = "ActionCompleted"
    OBSERVATION_DELIVERED = "ObservationDelivered"
    PHASE_SPAWNED = "PhaseSpawned"
    POSTURE_CHANGED = "PostureChanged"
    MISSION_SLIPPED = "MissionSlipped"
    AUTHORIZATION_GRANTED = "AuthorizationGranted"


_KIND_RANK = {kind: i for i, kind in enumerate(EventKind)}
_SIDE_RANK = {Side.RED: 0, Side.BLUE: 1}


@dataclass(frozen=True)
class Event:
    tick: int
    seq: int
    kind: EventKind
    side: Side
    action_id: int  # 0 when the event is not tied to an action
    payload: dict

    def sort_key(self) -> tuple:
        return (
            self.tick,
            _SIDE_RANK[self.side],
            self.action_id,
            _KIND_RANK[self.kind],
            json.dumps(self.payload, sort_keys=True),
        )


def order_within_tick(events: list[Event]) -> list[Event]:
    return sorted(events, key=Event.sort_key)


def event_to_json_line(event: Event) -> str:
    record = {
        "tick": event.tick,
        "seq": event.seq,
        "kind": event.kind.value,
        "side": event.side.value,
        "action_id": event.action_id,
        "payload": event.payload,
    }
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def log_to_jsonl(events: list[Event]) -> str:
    return "".join(event_to_json_line(e) + "\n" for e in events)
