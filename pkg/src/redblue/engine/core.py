"""Campaign stepper.

One `Engine` owns one campaign. `step()` resolves the current tick — deliver
last tick's observations, schedule newly requested actions, complete due
actions and apply their effects, spawn activity phases, generate next tick's
observations — then advances the clock. All randomness flows through three
named streams seeded from the campaign seed, with a fixed draw order, so a
given (scenario, playbook, policies, horizon, seed) tuple replays to a
byte-identical event log.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field

from redblue.campaign.effects import EffectTargetError, apply_effect, mission_delay
from redblue.campaign.model import (
    BeliefState,
    Emission,
    Observation,
    Side,
    WorldTruth,
)
from redblue.campaign.observation import generate_observations, update_beliefs
from redblue.campaign.scenario import LongLeadSpec, Scenario
from redblue.engine.events import Event, EventKind, order_within_tick
from redblue.engine.phases import ActivityPhase, spawn_phases
from redblue.playbook.model import (
    AuthorizationLevel,
    EffectKind,
    EffectSpec,
    Intensity,
    ParamKind,
    Play,
    Playbook,
)
from redblue.playbook.queries import play_map

SIDES = (Side.RED, Side.BLUE)


class ActionOutcome(enum.Enum):
    PENDING = "Pending"
    SUCCEEDED = "Succeeded"
    FAILED = "Failed"
    OVERTAKEN = "Overtaken"


class UnknownActionError(KeyError):
    pass


class AuthorizationRefusedError(Exception):
    pass


@dataclass
class MoveRequest:
    play_id: str
    intensity: Intensity = Intensity.MEDIUM
    params: dict[str, object] = field(default_factory=dict)


@dataclass
class ActionInstance:
    id: int
    play_id: str
    actor: Side
    intensity: Intensity
    params: dict[str, object] = field(default_factory=dict)
    # None means granted; otherwise the level still needed.
    pending_level: AuthorizationLevel | None = None
    start_tick: int = 0
    completion_tick: int | None = None
    outcome: ActionOutcome = ActionOutcome.PENDING
    is_long_lead: bool = False

    @property
    def granted(self) -> bool:
        return self.pending_level is None


@dataclass
class CampaignState:
    tick: int
    truth: WorldTruth
    beliefs: dict[Side, BeliefState]
    scheduled: list[ActionInstance] = field(default_factory=list)
    awaiting_authorization: list[ActionInstance] = field(default_factory=list)
    active_phases: dict[Side, set[ActivityPhase]] = field(default_factory=dict)
    completed_phases: dict[Side, set[ActivityPhase]] = field(default_factory=dict)
    event_log: list[Event] = field(default_factory=list)
    actions: dict[int, ActionInstance] = field(default_factory=dict)
    inbox: dict[Side, list[Observation]] = field(default_factory=dict)
    next_action_id: int = 1
    next_seq: int = 0

    def actions_for(self, side: Side) -> list[ActionInstance]:
        return [a for a in self.actions.values() if a.actor is side]


def _new_state(scenario: Scenario) -> CampaignState:
    truth = scenario.build_truth()
    return CampaignState(
        tick=0,
        truth=truth,
        beliefs={side: BeliefState(holder=side) for side in SIDES},
        active_phases={side: {ActivityPhase.STANDING_INTEL} for side in SIDES},
        completed_phases={side: set() for side in SIDES},
        inbox={side: [] for side in SIDES},
    )


class Engine:
    """Single-owner campaign session; step() is strictly serial."""

    def __init__(self, scenario: Scenario, playbook: Playbook, seed: int):
        self.scenario = scenario
        self.playbook = playbook
        self.plays = play_map(playbook)
        self.seed = seed
        # Named streams with documented draw order: jitter in (actor, action
        # id) order at scheduling; detection per observer Red-then-Blue in
        # candidate order; long-lead windows and success in completion order.
        self._rng_jitter = random.Random(f"{seed}/jitter")
        self._rng_detect = random.Random(f"{seed}/detect")
        self._rng_longlead = random.Random(f"{seed}/longlead")
        self.state = _new_state(scenario)
        # Events produced between steps (authorization grants); merged into
        # the next step's tick so the log stays sorted.
        self._carryover_events: list[Event] = []

    # -- move intake ---------------------------------------------------------

    def _long_lead_spec(self, play: Play) -> LongLeadSpec | None:
        for effect in play.effects:
            if effect.kind is EffectKind.INFILTRATE:
                spec = self.scenario.long_lead.get("infiltrate")
                if spec:
                    return spec
            if effect.kind is EffectKind.PLACE_INSIDER:
                spec = self.scenario.long_lead.get("place_insider")
                if spec:
                    return spec
        return None

    def _check_params(self, play: Play, params: dict[str, object]) -> str | None:
        kinds = {p.name: p.kind for p in play.parameters}
        for name, value in params.items():
            kind = kinds.get(name)
            if kind is None:
                return f"unknown parameter {name!r}"
            if kind is ParamKind.INTENSITY:
                try:
                    Intensity.from_label(str(value))
                except ValueError:
                    return f"parameter {name!r} needs an intensity"
            elif kind is ParamKind.SCOPE:
                if value not in ("local", "theatre", "worldwide"):
                    return f"parameter {name!r} needs a scope"
            elif kind is ParamKind.DURATION_HOURS:
                if not isinstance(value, int) or value < 0:
                    return f"parameter {name!r} needs a nonnegative hour count"
        return None

    def submit_move(
        self, side: Side, request: MoveRequest, buffer: list[Event]
    ) -> ActionInstance | None:
        tick = self.state.tick
        play = self.plays.get(request.play_id)
        reason = None
        if play is None:
            reason = "unknown play"
        else:
            reason = self._check_params(play, request.params)
        if reason is not None:
            buffer.append(
                self._event(
                    EventKind.ACTION_REJECTED,
                    side,
                    0,
                    {"play": request.play_id, "reason": reason},
                )
            )
            return None

        action = ActionInstance(
            id=self.state.next_action_id,
            play_id=play.id,
            actor=side,
            intensity=request.intensity,
            params=dict(request.params),
            start_tick=tick,
        )
        self.state.next_action_id += 1
        self.state.actions[action.id] = action

        required = play.required_authorization or AuthorizationLevel.OPERATOR
        if required > self.scenario.auth_levels[side]:
            action.pending_level = required
            self.state.awaiting_authorization.append(action)
            buffer.append(
                self._event(
                    EventKind.ACTION_SCHEDULED,
                    side,
                    action.id,
                    {
                        "play": play.id,
                        "intensity": action.intensity.label,
                        "authorization": f"Pending:{required.label}",
                        "params": _param_payload(action.params),
                    },
                )
            )
            return action

        self._schedule(action, play, buffer, jitter=True)
        return action

    def _schedule(
        self, action: ActionInstance, play: Play, buffer: list[Event], jitter: bool
    ) -> None:
        tick = self.state.tick
        long_lead = self._long_lead_spec(play)
        if long_lead is not None:
            action.is_long_lead = True
            duration = self._rng_longlead.randint(long_lead.min_ticks, long_lead.max_ticks)
        else:
            duration = play.base_duration_hours
            if jitter and play.duration_jitter_hours > 0:
                duration += self._rng_jitter.randint(
                    -play.duration_jitter_hours, play.duration_jitter_hours
                )
        action.start_tick = tick
        action.completion_tick = max(tick + 1, tick + duration)
        self.state.scheduled.append(action)
        buffer.append(
            self._event(
                EventKind.ACTION_SCHEDULED,
                action.actor,
                action.id,
                {
                    "play": play.id,
                    "intensity": action.intensity.label,
                    "authorization": "Granted",
                    "start": action.start_tick,
                    "completion": action.completion_tick,
                    "params": _param_payload(action.params),
                },
            )
        )

    def submit_external_move(
        self, side: Side, request: MoveRequest
    ) -> tuple[ActionInstance | None, str | None]:
        """Intake a move between steps (service path). Events are carried
        into the next step's tick so the log stays ordered. Returns the
        action (None when rejected) and the rejection reason if any."""
        buffer: list[Event] = []
        action = self.submit_move(side, request, buffer)
        self._carryover_events.extend(buffer)
        reason = None
        if action is None and buffer:
            reason = buffer[-1].payload.get("reason", "rejected")
        return action, reason

    # -- authorization ---------------------------------------------------------

    def grant_authorization(self, action_id: int, level: AuthorizationLevel) -> ActionInstance:
        """Grant a pending action; it restarts now with its base duration."""
        action = self.state.actions.get(action_id)
        if action is None or action not in self.state.awaiting_authorization:
            raise UnknownActionError(action_id)
        assert action.pending_level is not None
        if level < action.pending_level:
            raise AuthorizationRefusedError(
                f"action {action_id} needs {action.pending_level.label}, offered {level.label}"
            )
        self.state.awaiting_authorization.remove(action)
        action.pending_level = None
        play = self.plays[action.play_id]
        tick = self.state.tick
        action.start_tick = tick
        long_lead = self._long_lead_spec(play)
        if long_lead is not None:
            action.is_long_lead = True
            duration = self._rng_longlead.randint(long_lead.min_ticks, long_lead.max_ticks)
        else:
            duration = play.base_duration_hours
        action.completion_tick = max(tick + 1, tick + duration)
        self.state.scheduled.append(action)
        self._carryover_events.append(
            self._event(
                EventKind.AUTHORIZATION_GRANTED,
                action.actor,
                action.id,
                {
                    "play": play.id,
                    "level": level.label,
                    "start": action.start_tick,
                    "completion": action.completion_tick,
                },
            )
        )
        return action

    # -- stepping ----------------------------------------------------------------

    def step(self, moves: dict[Side, list[MoveRequest]] | None = None) -> CampaignState:
        """Resolve the current tick, then advance the clock by one."""
        st = self.state
        tick = st.tick
        buffer: list[Event] = list(self._carryover_events)
        self._carryover_events = []

        # 1. Deliver observations generated last tick; beliefs age either way.
        for side in SIDES:
            delivered = st.inbox.get(side, [])
            update_beliefs(st.beliefs[side], delivered, self.scenario.inference, tick)
            for obs in delivered:
                buffer.append(
                    self._event(
                        EventKind.OBSERVATION_DELIVERED,
                        side,
                        0,
                        {
                            "channel": obs.channel.value,
                            "signal": obs.signal,
                            "magnitude": obs.magnitude.label,
                            "subject": obs.subject_asset,
                            "detail": obs.detail,
                            "tick_observed": obs.tick,
                        },
                    )
                )
            st.inbox[side] = []

        # 2. Intake both sides' move requests (Red first, submission order).
        for side in SIDES:
            for request in (moves or {}).get(side, []):
                self.submit_move(side, request, buffer)

        # 3. Complete due actions in (actor, action id) order.
        transients: list[Emission] = []
        due = [a for a in st.scheduled if a.completion_tick is not None and a.completion_tick <= tick]
        due.sort(key=lambda a: (0 if a.actor is Side.RED else 1, a.id))
        for action in due:
            st.scheduled.remove(action)
            self._complete(action, buffer, transients)

        # 4. Generate next tick's observations (Red observer first).
        for side in SIDES:
            st.inbox[side] = generate_observations(
                st.truth,
                side,
                self.scenario.detection,
                self._rng_detect,
                tick,
                transients,
            )

        for event in order_within_tick(buffer):
            self._append(event)
        st.tick = tick + 1
        return st

    def _complete(
        self, action: ActionInstance, buffer: list[Event], transients: list[Emission]
    ) -> None:
        st = self.state
        play = self.plays[action.play_id]
        if action.is_long_lead:
            spec = self._long_lead_spec(play)
            success = self._rng_longlead.random() < (
                spec.success_probability if spec else 1.0
            )
            action.outcome = ActionOutcome.SUCCEEDED if success else ActionOutcome.FAILED
        else:
            action.outcome = ActionOutcome.SUCCEEDED

        effect_errors: list[str] = []
        if action.outcome is ActionOutcome.SUCCEEDED:
            for effect in play.effects:
                bound = EffectSpec(
                    kind=effect.kind,
                    magnitude=action.intensity,
                    target_selector=effect.target_selector,
                )
                try:
                    result = apply_effect(
                        st.truth,
                        bound,
                        action.actor,
                        tick=st.tick,
                        intensity_hours=self.scenario.intensity_hours,
                    )
                except EffectTargetError as exc:
                    effect_errors.append(str(exc))
                    continue
                transients.extend(result.emissions)
                if result.posture_change is not None:
                    side, old, new = result.posture_change
                    buffer.append(
                        self._event(
                            EventKind.POSTURE_CHANGED,
                            side,
                            action.id,
                            {"from": old.label, "to": new.label},
                        )
                    )
                if result.mission_pause is not None:
                    task_id, pause, total = result.mission_pause
                    owner = action.actor.opponent
                    buffer.append(
                        self._event(
                            EventKind.MISSION_SLIPPED,
                            owner,
                            action.id,
                            {
                                "task": task_id,
                                "pause_hours": pause,
                                "total_delay_hours": total,
                            },
                        )
                    )
            st.truth.truth(action.actor).used_stratagems.update(play.stratagems)

        payload = {"play": play.id, "outcome": action.outcome.value}
        if effect_errors:
            payload["effect_errors"] = effect_errors
        buffer.append(
            self._event(EventKind.ACTION_COMPLETED, action.actor, action.id, payload)
        )

        if action.outcome is ActionOutcome.SUCCEEDED:
            self._complete_phase(action.actor, play, buffer, action.id)

    def _complete_phase(
        self, side: Side, play: Play, buffer: list[Event], action_id: int
    ) -> None:
        st = self.state
        phase_name = self.scenario.phase_plays.get(play.id)
        if phase_name is None:
            return
        try:
            phase = ActivityPhase(phase_name)
        except ValueError:
            return
        active = st.active_phases[side]
        if phase not in active:
            return
        active.discard(phase)
        st.completed_phases[side].add(phase)
        for spawned in sorted(spawn_phases(phase), key=lambda p: p.value):
            if spawned in active:
                continue
            active.add(spawned)
            buffer.append(
                self._event(
                    EventKind.PHASE_SPAWNED,
                    side,
                    action_id,
                    {"phase": spawned.value, "source": phase.value},
                )
            )

    def finalize(self) -> None:
        """Mark unresolved long-lead actions Overtaken at campaign end."""
        st = self.state
        buffer: list[Event] = list(self._carryover_events)
        self._carryover_events = []
        leftovers = [a for a in st.scheduled if a.is_long_lead]
        leftovers.sort(key=lambda a: (0 if a.actor is Side.RED else 1, a.id))
        for action in leftovers:
            st.scheduled.remove(action)
            action.outcome = ActionOutcome.OVERTAKEN
            buffer.append(
                self._event(
                    EventKind.ACTION_COMPLETED,
                    action.actor,
                    action.id,
                    {"play": action.play_id, "outcome": action.outcome.value},
                )
            )
        for event in order_within_tick(buffer):
            self._append(event)

    # -- scoring -------------------------------------------------------------

    def mission_summary(self) -> dict:
        blue_mission = self.state.truth.truth(Side.BLUE).mission
        delay = mission_delay(blue_mission) if blue_mission else 0
        target = self.scenario.delay_target_hours
        return {
            "delay_hours": delay,
            "delay_target_hours": target,
            "red_goal_met": delay >= target,
        }

    # -- plumbing ------------------------------------------------------------

    def _event(self, kind: EventKind, side: Side, action_id: int, payload: dict) -> Event:
        return Event(
            tick=self.state.tick,
            seq=0,  # assigned on append
            kind=kind,
            side=side,
            action_id=action_id,
            payload=payload,
        )

    def _append(self, event: Event) -> None:
        st = self.state
        numbered = Event(
            tick=event.tick,
            seq=st.next_seq,
            kind=event.kind,
            side=event.side,
            action_id=event.action_id,
            payload=event.payload,
        )
        st.next_seq += 1
        st.event_log.append(numbered)


def _param_payload(params: dict[str, object]) -> dict:
    return {k: params[k] for k in sorted(params)}


def run_campaign(
    scenario: Scenario,
    playbook: Playbook,
    policies: dict[Side, "object"],
    horizon_ticks: int,
    seed: int,
) -> Engine:
    """Drive a full campaign; identical inputs and seed replay identically.

    `policies` maps each side to a callable taking a PolicyView and returning
    move requests (see redblue.engine.policies).
    """
    from redblue.engine.policies import PolicyView  # local to avoid cycle

    engine = Engine(scenario, playbook, seed)
    for _ in range(horizon_ticks):
        st = engine.state
        moves: dict[Side, list[MoveRequest]] = {}
        for side in SIDES:
            policy = policies.get(side)
            if policy is None:
                continue
            view = PolicyView(
                tick=st.tick,
                side=side,
                beliefs=st.beliefs[side],
                truth_own=st.truth.truth(side),
                active_phases=frozenset(st.active_phases[side]),
                own_actions=tuple(st.actions_for(side)),
            )
            moves[side] = list(policy(view))
        engine.step(moves)
    engine.finalize()
    return engine
