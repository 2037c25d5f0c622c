"""Move policies: scripted Red and Blue campaign scripts, an idle baseline,
and a planner-backed policy. A policy is a pure function of the side's own
view (beliefs, own truth, own phases and actions, tick)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from redblue.campaign.model import BeliefState, ObservationChannel, Side, SideTruth
from redblue.engine.core import ActionInstance, ActionOutcome, MoveRequest
from redblue.engine.phases import ActivityPhase
from redblue.playbook.model import Intensity


@dataclass(frozen=True)
class PolicyView:
    tick: int
    side: Side
    beliefs: BeliefState
    truth_own: SideTruth
    active_phases: frozenset[ActivityPhase]
    own_actions: tuple[ActionInstance, ...]

    def submitted(self, play_id: str) -> int:
        return sum(1 for a in self.own_actions if a.play_id == play_id)

    def completed(self, play_id: str) -> int:
        return sum(
            1
            for a in self.own_actions
            if a.play_id == play_id and a.outcome is ActionOutcome.SUCCEEDED
        )

    def in_flight(self, play_id: str) -> bool:
        return any(
            a.play_id == play_id and a.outcome is ActionOutcome.PENDING
            for a in self.own_actions
        )


Policy = Callable[[PolicyView], list[MoveRequest]]


def idle_policy(view: PolicyView) -> list[MoveRequest]:
    return []


def scripted_red_policy(view: PolicyView) -> list[MoveRequest]:
    """Opening-salvo script: raise watch, focused sweep, decoys and
    fortification, weaponize, then cheap attacks before sophisticated ones."""
    if view.submitted("raise-monitor-watch") == 0:
        return [MoveRequest("raise-monitor-watch", Intensity.HIGH)]
    if view.completed("raise-monitor-watch") and view.submitted("focused-intel-sweep") == 0:
        return [MoveRequest("focused-intel-sweep", Intensity.HIGH)]
    if view.completed("focused-intel-sweep") and view.submitted("deploy-decoy-watchers") == 0:
        return [
            MoveRequest("deploy-decoy-watchers", Intensity.MEDIUM),
            MoveRequest("fortify-posture", Intensity.MEDIUM),
        ]
    if view.completed("fortify-posture") and view.submitted("weaponize") == 0:
        return [MoveRequest("weaponize", Intensity.HIGH)]
    if view.completed("weaponize"):
        if view.submitted("cheap-dos") < 2 and not view.in_flight("cheap-dos"):
            return [MoveRequest("cheap-dos", Intensity.MEDIUM)]
        if view.completed("cheap-dos") >= 2 and view.submitted("sophisticated-dos") == 0:
            return [MoveRequest("sophisticated-dos", Intensity.HIGH)]
    return []


def scripted_blue_policy(view: PolicyView) -> list[MoveRequest]:
    """Defender script: respond to an observed intel-activity increase with a
    monitor raise plus fortification, then honeypots, the fish bowl, and the
    long-lead infiltration and insider moves once the posture is up."""
    activity = view.beliefs.believed_opponent_activity.get(
        ObservationChannel.INTEL_GATHERING_ACTIVITY
    )
    alerted = activity is not None and activity >= Intensity.MEDIUM
    if alerted and view.submitted("raise-monitor-watch") == 0:
        return [
            MoveRequest("raise-monitor-watch", Intensity.HIGH),
            MoveRequest("fortify-posture", Intensity.MEDIUM),
        ]
    if (
        view.truth_own.posture >= Intensity.MEDIUM
        and view.completed("fortify-posture")
        and view.submitted("deploy-honeypots") == 0
    ):
        return [
            MoveRequest("deploy-honeypots", Intensity.MEDIUM),
            MoveRequest("fish-bowl", Intensity.MEDIUM),
            MoveRequest("infiltrate-intel-system", Intensity.MEDIUM),
            MoveRequest("place-insider", Intensity.HIGH),
        ]
    return []


def make_planner_policy(playbook, scenario, auth, depth: int = 2) -> Policy:
    """Plays the planner's top executable recommendation when idle."""
    from redblue.planner import recommend

    def policy(view: PolicyView) -> list[MoveRequest]:
        if any(a.outcome is ActionOutcome.PENDING for a in view.own_actions):
            return []
        rec = recommend(
            view.beliefs,
            view.truth_own,
            playbook,
            view.side,
            auth,
            depth,
            scenario=scenario,
        )
        if not rec.executable_now:
            return []
        top = rec.executable_now[0]
        return [MoveRequest(top.play_id, top.intensity)]

    return policy


_REGISTRY: dict[str, Policy] = {
    "idle": idle_policy,
    "scripted-red": scripted_red_policy,
    "scripted-blue": scripted_blue_policy,
}


def policy_names() -> list[str]:
    return sorted(_REGISTRY) + ["planner"]


def get_policy(name: str, playbook=None, scenario=None, auth=None, depth: int = 2) -> Policy:
    if name == "planner":
        if playbook is None or scenario is None or auth is None:
            raise ValueError("planner policy needs playbook, scenario, and auth")
        return make_planner_policy(playbook, scenario, auth, depth)
    try:
        return _REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown policy {name!r}")
