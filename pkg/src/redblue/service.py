"""Session service: live campaigns over HTTP for the operator console.

The human operator plays Blue; Red runs a named policy inside advance().
Every Blue-facing payload is built from Blue's beliefs, Blue's own truth, and
Blue-side events only — Red ground truth and the hidden genuine flags never
leave the engine.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException, Query
from fastapi.responses import StreamingResponse

from redblue import data
from redblue.campaign.model import BeliefState, Side, SideTruth
from redblue.campaign.scenario import Scenario, ScenarioError, load_scenario
from redblue.campaign.effects import mission_delay
from redblue.engine import (
    ActionInstance,
    AuthorizationRefusedError,
    Engine,
    EventKind,
    MoveRequest,
    UnknownActionError,
    get_policy,
)
from redblue.engine.events import Event
from redblue.engine.policies import PolicyView
from redblue.planner import (
    PlannerRefusedError,
    PruneRules,
    recommend,
    serialize_tree,
    whatif_tree,
)
from redblue.playbook import (
    AuthorizationLevel,
    Intensity,
    Play,
    StratagemBlock,
    load_playbook,
    query_plays,
    resolve_stratagem,
)

HUMAN_SIDE = Side.BLUE


@dataclass
class Session:
    id: str
    engine: Engine
    opponent_policy_name: str
    opponent_policy: object
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def current_auth(self) -> AuthorizationLevel:
        return self.engine.scenario.auth_levels[HUMAN_SIDE]


def _card(block: StratagemBlock) -> dict:
    """The twelve descriptive fields, in canonical card order."""
    return {
        "stratagem": str(block.id),
        "description": block.description,
        "tactical_implementations": list(block.tactical_implementations),
        "infrastructure_properties": block.infrastructure_properties,
        "technological_requirements": block.technological_requirements,
        "goals_satisfied": list(block.goals_satisfied),
        "adversary_properties": block.adversary_properties,
        "effects_on_adversary": block.effects_on_adversary,
        "limitations_assumptions": block.limitations_assumptions,
        "implications": block.implications,
        "example_red_use": block.example_red_use,
        "example_blue_countermeasure": block.example_blue_countermeasure,
    }


def _play_payload(play: Play, pb) -> dict:
    cards = []
    for sid in play.stratagems:
        try:
            cards.append(_card(resolve_stratagem(pb, sid)))
        except KeyError:
            continue
    return {
        "id": play.id,
        "name": play.name,
        "side": play.side_hint.value,
        "stratagems": [str(s) for s in play.stratagems],
        "params": [{"name": p.name, "kind": p.kind.value} for p in play.parameters],
        "tags": list(play.situation_tags),
        "required_authorization": (
            play.required_authorization.label if play.required_authorization else None
        ),
        "duration_hours": play.base_duration_hours,
        "jitter_hours": play.duration_jitter_hours,
        "effects": [
            {
                "kind": e.kind.value,
                "magnitude": e.magnitude.label,
                "target": e.target_selector,
            }
            for e in play.effects
        ],
        "counters": [str(s) for s in play.counters],
        "intensity_choices": [i.label for i in Intensity],
        "cards": cards,
    }


def _beliefs_payload(beliefs: BeliefState) -> dict:
    return {
        "opponent_activity": {
            channel.value: level.label
            for channel, level in sorted(
                beliefs.believed_opponent_activity.items(), key=lambda kv: kv[0].value
            )
        },
        "inferred_stratagems": [
            {"stratagem": str(sid), "confidence": conf}
            for sid, conf in sorted(beliefs.inferred_stratagems.items(), key=lambda kv: str(kv[0]))
        ],
        "believed_assets": [
            {
                "asset_id": entry.asset_id,
                "function": entry.believed_function.value,
                "posture": entry.believed_posture.label,
                "confidence": entry.confidence,
            }
            for entry in sorted(beliefs.believed_assets.values(), key=lambda b: b.asset_id)
        ],
    }


def _own_truth_payload(truth: SideTruth) -> dict:
    payload = {
        "posture": truth.posture.label,
        "monitor_level": truth.monitor_level.label,
        "assets": [
            {
                "id": asset.id,
                "function": asset.function.value,
                "posture": asset.posture.label,
                "monitor_level": asset.monitor_level.label,
                "compromised": asset.compromised,
            }
            for asset in sorted(truth.assets.values(), key=lambda a: a.id)
        ],
    }
    if truth.mission is not None:
        payload["mission"] = {
            "description": truth.mission.description,
            "delay_hours": mission_delay(truth.mission),
            "tasks": [
                {
                    "id": task.task_id,
                    "planned_start_hours": task.planned_start_hours,
                    "planned_duration_hours": task.planned_duration_hours,
                    "pause_hours": task.pause_hours,
                }
                for task in truth.mission.tasks
            ],
        }
    return payload


def _action_payload(action: ActionInstance) -> dict:
    return {
        "action_id": action.id,
        "play": action.play_id,
        "intensity": action.intensity.label,
        "authorization": (
            "Granted" if action.granted else f"Pending:{action.pending_level.label}"
        ),
        "start": action.start_tick,
        "completion": action.completion_tick,
        "outcome": action.outcome.value,
    }


def _event_payload(event: Event) -> dict:
    return {
        "seq": event.seq,
        "tick": event.tick,
        "kind": event.kind.value,
        "side": event.side.value,
        "action_id": event.action_id,
        "payload": event.payload,
    }


def _visible_events(session: Session, since: int) -> list[Event]:
    return [
        e
        for e in session.engine.state.event_log
        if e.side is HUMAN_SIDE and e.seq > since
    ]


def create_app() -> FastAPI:
    app = FastAPI(title="redblue session service")
    sessions: dict[str, Session] = {}

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        return session

    @app.post("/sessions")
    def create_session(body: dict = Body(...)) -> dict:
        playbook_src = body.get("playbook", "default")
        if playbook_src == "default":
            playbook_src = data.default_playbook_text()
        result = load_playbook(playbook_src)
        if not result.ok or result.playbook is None:
            detail = "; ".join(d.render() for d in result.diagnostics if d.is_error)
            raise HTTPException(status_code=400, detail=f"invalid playbook: {detail}")

        scenario_src = body.get("scenario", "default")
        if scenario_src == "default":
            scenario_src = data.default_scenario_dict()
        if not isinstance(scenario_src, dict):
            raise HTTPException(status_code=400, detail="scenario must be an object or 'default'")
        try:
            scenario = load_scenario(scenario_src)
        except ScenarioError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

        if "auth" in body:
            try:
                scenario.auth_levels[HUMAN_SIDE] = AuthorizationLevel.from_label(body["auth"])
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))

        policy_name = body.get("opponent_policy", scenario.opponent_policy)
        try:
            policy = get_policy(
                policy_name,
                playbook=result.playbook,
                scenario=scenario,
                auth=scenario.auth_levels[HUMAN_SIDE.opponent],
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

        seed = body.get("seed", 0)
        if not isinstance(seed, int):
            raise HTTPException(status_code=400, detail="seed must be an integer")

        session_id = secrets.token_hex(8)
        sessions[session_id] = Session(
            id=session_id,
            engine=Engine(scenario, result.playbook, seed),
            opponent_policy_name=policy_name,
            opponent_policy=policy,
        )
        return {"session": session_id, "side": HUMAN_SIDE.value}

    @app.get("/sessions/{session_id}/situation")
    def situation(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            state = session.engine.state
            pending = [
                _action_payload(a)
                for a in sorted(state.actions_for(HUMAN_SIDE), key=lambda a: a.id)
            ]
            return {
                "tick": state.tick,
                "side": HUMAN_SIDE.value,
                "current_auth": session.current_auth.label,
                "beliefs": _beliefs_payload(state.beliefs[HUMAN_SIDE]),
                "own": _own_truth_payload(state.truth.truth(HUMAN_SIDE)),
                "active_phases": sorted(
                    p.value for p in state.active_phases[HUMAN_SIDE]
                ),
                "pending_actions": pending,
            }

    @app.get("/sessions/{session_id}/plays")
    def plays(
        session_id: str,
        tags: str = Query(default=""),
        auth: str = Query(default=""),
    ) -> list[dict]:
        session = get_session(session_id)
        with session.lock:
            wanted = [t for t in tags.split(",") if t]
            level = (
                AuthorizationLevel.from_label(auth) if auth else session.current_auth
            )
            pb = session.engine.playbook
            if wanted:
                matched = query_plays(pb, wanted, level)
            else:
                matched = [
                    p
                    for p in sorted(pb.plays, key=lambda p: p.id)
                    if p.required_authorization is not None
                    and p.required_authorization <= level
                ]
            return [_play_payload(p, pb) for p in matched]

    @app.post("/sessions/{session_id}/moves")
    def submit_move(session_id: str, body: dict = Body(...)) -> dict:
        session = get_session(session_id)
        play_id = body.get("play")
        if not isinstance(play_id, str):
            raise HTTPException(status_code=400, detail="body needs a 'play' id")
        try:
            intensity = Intensity.from_label(body.get("intensity", "Medium"))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        params = body.get("params", {})
        if not isinstance(params, dict):
            raise HTTPException(status_code=400, detail="'params' must be an object")
        with session.lock:
            engine = session.engine
            action, reason = engine.submit_external_move(
                HUMAN_SIDE, MoveRequest(play_id, intensity, params)
            )
            if action is None:
                return {"status": "rejected", "reason": reason or "rejected"}
            if not action.granted:
                return {
                    "status": "pending",
                    "action_id": action.id,
                    "needed_level": action.pending_level.label,
                }
            return {
                "status": "accepted",
                "action_id": action.id,
                "start": action.start_tick,
                "completion": action.completion_tick,
            }

    @app.post("/sessions/{session_id}/advance")
    def advance(session_id: str, body: dict = Body(default={})) -> dict:
        session = get_session(session_id)
        ticks = body.get("ticks", 1)
        if not isinstance(ticks, int) or ticks < 0 or ticks > 10000:
            raise HTTPException(status_code=400, detail="ticks must be in 0..10000")
        with session.lock:
            engine = session.engine
            for _ in range(ticks):
                state = engine.state
                opponent = HUMAN_SIDE.opponent
                view = PolicyView(
                    tick=state.tick,
                    side=opponent,
                    beliefs=state.beliefs[opponent],
                    truth_own=state.truth.truth(opponent),
                    active_phases=frozenset(state.active_phases[opponent]),
                    own_actions=tuple(state.actions_for(opponent)),
                )
                moves = {opponent: list(session.opponent_policy(view))}
                engine.step(moves)
            summary = engine.mission_summary()
            return {"tick": engine.state.tick, **summary}

    @app.post("/sessions/{session_id}/whatif")
    def whatif(session_id: str, body: dict = Body(default={})) -> dict:
        session = get_session(session_id)
        depth = body.get("depth", 2)
        if not isinstance(depth, int) or depth < 0:
            raise HTTPException(status_code=400, detail="depth must be a nonnegative integer")
        try:
            rules = PruneRules.parse(body.get("prune_rules", ["Dominated", "CycleRepeat"]))
        except (ValueError, TypeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        with session.lock:
            engine = session.engine
            state = engine.state
            beliefs = state.beliefs[HUMAN_SIDE]
            truth_own = state.truth.truth(HUMAN_SIDE)
            try:
                rec = recommend(
                    beliefs,
                    truth_own,
                    engine.playbook,
                    HUMAN_SIDE,
                    session.current_auth,
                    depth,
                    scenario=engine.scenario,
                )
                tree = whatif_tree(
                    beliefs,
                    truth_own,
                    engine.playbook,
                    HUMAN_SIDE,
                    depth,
                    rules,
                    scenario=engine.scenario,
                )
            except PlannerRefusedError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            return {
                "recommendation": {
                    "ranked": [
                        {
                            "play": e.play_id,
                            "intensity": e.intensity.label,
                            "score": e.score,
                            "rationale": e.rationale,
                        }
                        for e in rec.ranked
                    ],
                    "executable_now": [
                        {
                            "play": e.play_id,
                            "intensity": e.intensity.label,
                            "score": e.score,
                        }
                        for e in rec.executable_now
                    ],
                    "awaiting": [
                        {"play": play_id, "needed_level": level.label}
                        for play_id, level in rec.awaiting
                    ],
                },
                "tree": serialize_tree(tree),
            }

    @app.post("/sessions/{session_id}/authorize")
    def authorize(session_id: str, body: dict = Body(...)) -> dict:
        session = get_session(session_id)
        action_id = body.get("action_id")
        if not isinstance(action_id, int):
            raise HTTPException(status_code=400, detail="body needs an integer 'action_id'")
        try:
            level = AuthorizationLevel.from_label(body.get("level", "Operator"))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        with session.lock:
            try:
                action = session.engine.grant_authorization(action_id, level)
            except UnknownActionError:
                raise HTTPException(status_code=404, detail=f"unknown action {action_id}")
            except AuthorizationRefusedError as exc:
                raise HTTPException(status_code=403, detail=str(exc))
            return {
                "granted": True,
                "action_id": action.id,
                "start": action.start_tick,
                "completion": action.completion_tick,
            }

    @app.get("/sessions/{session_id}/events")
    def events(
        session_id: str,
        since: int = Query(default=-1),
        stream: bool = Query(default=True),
        timeout: float = Query(default=2.0),
    ):
        session = get_session(session_id)
        if not stream:
            with session.lock:
                return [_event_payload(e) for e in _visible_events(session, since)]

        def sse():
            cursor = since
            deadline = time.monotonic() + min(timeout, 30.0)
            while True:
                with session.lock:
                    fresh = _visible_events(session, cursor)
                for event in fresh:
                    cursor = event.seq
                    payload = json.dumps(_event_payload(event), sort_keys=True)
                    yield f"id: {event.seq}\ndata: {payload}\n\n"
                if time.monotonic() > deadline:
                    return
                time.sleep(0.1)

        return StreamingResponse(sse(), media_type="text/event-stream")

    _mount_console(app)
    return app


def _mount_console(app: FastAPI) -> None:
    """Serve the built operator console when frontend/dist exists.

    Looks next to the repository checkout (editable installs) or at
    REDBLUE_CONSOLE_DIR; the API works fine without it.
    """
    candidates = []
    if "REDBLUE_CONSOLE_DIR" in os.environ:
        candidates.append(Path(os.environ["REDBLUE_CONSOLE_DIR"]))
    candidates.append(Path(__file__).resolve().parents[2] / "frontend" / "dist")
    candidates.append(Path.cwd() / "frontend" / "dist")
    for dist in candidates:
        if dist.is_dir():
            from fastapi.staticfiles import StaticFiles

            app.mount("/", StaticFiles(directory=str(dist), html=True), name="console")
            return
