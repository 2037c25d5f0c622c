"""Engine stepping, timing, authorization, long-lead draws, event ordering."""

import copy
import random

import pytest

from redblue.campaign.model import AssetFunction, Side
from redblue.campaign.scenario import load_scenario
from redblue.engine import (
    ActionOutcome,
    ActivityPhase,
    AuthorizationRefusedError,
    Engine,
    EventKind,
    MoveRequest,
    UnknownActionError,
    get_policy,
    run_campaign,
    spawn_phases,
)
from redblue.engine.events import log_to_jsonl
from redblue.playbook import AuthorizationLevel, Intensity, load_playbook


MINI_PLAYBOOK = """
playbook "mini" version "1"

stratagem Fortify { description: "harden" }
stratagem Monitor { description: "watch" }
stratagem Monitor.Watch { description: "track" }
stratagem Block { description: "deny" }
stratagem Block.Cutoff { description: "sever" }

play "fortify" {
  name: "Fortify"
  stratagems: ["Fortify"]
  tags: ["standing"]
  auth: "Operator"
  duration: 72
  effects: [RaisePosture(Medium, "worldwide")]
}

play "probe" {
  name: "Probe"
  stratagems: ["Monitor.Watch"]
  tags: ["standing"]
  auth: "Operator"
  duration: 24
  effects: [RaiseMonitor(High, "own-intel")]
}

play "natl-strike" {
  name: "National Strike"
  stratagems: ["Block.Cutoff"]
  tags: ["standing"]
  auth: "National"
  duration: 24
  effects: [DegradeMissionTask(High, "task:current")]
}

play "insider" {
  name: "Insider"
  stratagems: ["Monitor.Watch"]
  tags: ["standing"]
  auth: "Operator"
  duration: 24
  effects: [PlaceInsider(High, "opponent-org")]
}

play "infil" {
  name: "Infiltrate"
  stratagems: ["Monitor.Watch"]
  tags: ["standing"]
  auth: "Operator"
  duration: 24
  effects: [Infiltrate(Medium, "opponent-intel")]
}
"""


def mini_scenario(long_lead=None, red_auth="National", blue_auth="National"):
    doc = {
        "schema": 1,
        "name": "mini",
        "sides": {
            "Red": {
                "auth_level": red_auth,
                "assets": [{"id": "red-intel-1", "function": "IntelGathering"}],
                "mission": {"delay_target_hours": 336},
            },
            "Blue": {
                "auth_level": blue_auth,
                "assets": [{"id": "blue-intel-1", "function": "IntelGathering"}],
                "mission": {
                    "tasks": [
                        {"id": "mobilize", "planned_start_hours": 0, "planned_duration_hours": 240},
                        {"id": "transport", "planned_start_hours": 240, "planned_duration_hours": 240},
                        {"id": "sustain", "planned_start_hours": 480, "planned_duration_hours": 240},
                    ]
                },
            },
        },
        "detection": {"base_probability": {c: 0.0 for c in (
            "IntelGatheringActivity", "EffectOnResources", "DefensePosture", "AssetStatus")}},
        "signatures": {},
        "inference": {"min_matches": 2, "window_ticks": 48},
        "intensity_hours": {"Low": 24, "Medium": 72, "High": 120},
        "long_lead": long_lead or {},
        "phase_plays": {},
    }
    return load_scenario(doc)


@pytest.fixture()
def mini_pb():
    result = load_playbook(MINI_PLAYBOOK)
    assert result.ok, [d.render() for d in result.diagnostics]
    return result.playbook


# -- phase machine ---------------------------------------------------------------


@pytest.mark.parametrize(
    "completed,expected",
    [
        (
            ActivityPhase.STANDING_INTEL,
            {ActivityPhase.FOCUSED_INTEL, ActivityPhase.GENERIC_POSTURE_TIGHTENING},
        ),
        (
            ActivityPhase.FOCUSED_INTEL,
            {
                ActivityPhase.FOCUSED_POSTURE_TIGHTENING,
                ActivityPhase.ASSET_REPOSITIONING,
                ActivityPhase.COUNTER_ATTACK_PLANNING,
                ActivityPhase.WEAPONRY_COUNTERMEASURES,
            },
        ),
        (ActivityPhase.GENERIC_POSTURE_TIGHTENING, set()),
        (ActivityPhase.FOCUSED_POSTURE_TIGHTENING, set()),
        (ActivityPhase.ASSET_REPOSITIONING, set()),
        (ActivityPhase.COUNTER_ATTACK_PLANNING, {ActivityPhase.COUNTER_ATTACK_EXECUTION}),
        (ActivityPhase.WEAPONRY_COUNTERMEASURES, set()),
        (ActivityPhase.COUNTER_ATTACK_EXECUTION, {ActivityPhase.STANDING_INTEL}),
    ],
)
def test_spawn_table(completed, expected):
    assert set(spawn_phases(completed)) == expected


# -- stepping ----------------------------------------------------------------------


def test_empty_step_only_advances_clock(mini_pb):
    engine = Engine(mini_scenario(), mini_pb, seed=1)
    engine.step({})
    engine.step({})
    assert engine.state.tick == 2
    assert engine.state.event_log == []


def test_fortify_completes_at_72_not_before(mini_pb):
    engine = Engine(mini_scenario(), mini_pb, seed=1)
    engine.step({Side.BLUE: [MoveRequest("fortify", Intensity.MEDIUM)]})
    for _ in range(72):
        engine.step({})
    changes = [e for e in engine.state.event_log if e.kind is EventKind.POSTURE_CHANGED]
    assert len(changes) == 1
    assert changes[0].tick == 72
    assert changes[0].payload == {"from": "Low", "to": "Medium"}
    completed = [e for e in engine.state.event_log if e.kind is EventKind.ACTION_COMPLETED]
    assert completed[0].tick == 72


def test_unknown_play_rejected_and_campaign_continues(mini_pb):
    engine = Engine(mini_scenario(), mini_pb, seed=1)
    engine.step({Side.RED: [MoveRequest("no-such-play")]})
    rejected = [e for e in engine.state.event_log if e.kind is EventKind.ACTION_REJECTED]
    assert len(rejected) == 1
    assert rejected[0].payload["reason"] == "unknown play"
    engine.step({Side.RED: [MoveRequest("probe", Intensity.HIGH)]})
    assert engine.state.tick == 2


def test_simultaneous_moves_ordered_red_first(mini_pb):
    engine = Engine(mini_scenario(), mini_pb, seed=1)
    engine.step(
        {
            Side.BLUE: [MoveRequest("fortify", Intensity.MEDIUM)],
            Side.RED: [MoveRequest("probe", Intensity.HIGH)],
        }
    )
    scheduled = [e for e in engine.state.event_log if e.kind is EventKind.ACTION_SCHEDULED]
    assert [e.side for e in scheduled] == [Side.RED, Side.BLUE]
    assert scheduled[0].action_id < scheduled[1].action_id


def test_completion_after_schedule_invariant(default_playbook, default_scenario):
    policies = {Side.RED: get_policy("scripted-red"), Side.BLUE: get_policy("scripted-blue")}
    engine = run_campaign(default_scenario, default_playbook, policies, 500, 11)
    scheduled_at = {}
    for event in engine.state.event_log:
        if event.kind is EventKind.ACTION_SCHEDULED:
            scheduled_at[event.action_id] = event.tick
        elif event.kind is EventKind.ACTION_COMPLETED:
            if event.payload["outcome"] == "Overtaken":
                continue
            assert event.tick >= scheduled_at[event.action_id] + 1


def test_event_ordering_key(default_playbook, default_scenario):
    policies = {Side.RED: get_policy("scripted-red"), Side.BLUE: get_policy("scripted-blue")}
    engine = run_campaign(default_scenario, default_playbook, policies, 400, 3)
    last_key = None
    last_seq = -1
    for event in engine.state.event_log:
        key = (event.tick, 0 if event.side is Side.RED else 1, event.action_id)
        if last_key is not None:
            assert key >= last_key
        assert event.seq > last_seq
        last_key, last_seq = key, event.seq


def test_run_campaign_determinism(default_playbook, default_scenario):
    def run(seed):
        policies = {
            Side.RED: get_policy("scripted-red"),
            Side.BLUE: get_policy("scripted-blue"),
        }
        engine = run_campaign(default_scenario, default_playbook, policies, 300, seed)
        return log_to_jsonl(engine.state.event_log)

    assert run(7) == run(7)
    assert run(7) != run(8)


def test_horizon_zero_returns_initial_state(default_playbook, default_scenario):
    policies = {Side.RED: get_policy("scripted-red"), Side.BLUE: get_policy("scripted-blue")}
    engine = run_campaign(default_scenario, default_playbook, policies, 0, 42)
    assert engine.state.tick == 0
    assert engine.state.event_log == []


# -- authorization -----------------------------------------------------------------


def test_pending_action_grant_flow(mini_pb):
    scen = mini_scenario(blue_auth="Operator")
    engine = Engine(scen, mini_pb, seed=1)
    engine.step({Side.BLUE: [MoveRequest("natl-strike", Intensity.HIGH)]})
    action = engine.state.actions[1]
    assert not action.granted
    assert action.pending_level is AuthorizationLevel.NATIONAL
    assert engine.state.awaiting_authorization == [action]

    with pytest.raises(AuthorizationRefusedError):
        engine.grant_authorization(1, AuthorizationLevel.COMMANDER)
    assert not action.granted

    for _ in range(9):
        engine.step({})
    assert engine.state.tick == 10
    granted = engine.grant_authorization(1, AuthorizationLevel.NATIONAL)
    assert granted.granted
    assert granted.start_tick == 10
    assert granted.completion_tick == 34  # 24h play granted at t=10

    engine.step({})
    events = [e for e in engine.state.event_log if e.kind is EventKind.AUTHORIZATION_GRANTED]
    assert len(events) == 1
    assert events[0].tick == 10


def test_unknown_action_grant_raises(mini_pb):
    engine = Engine(mini_scenario(), mini_pb, seed=1)
    with pytest.raises(UnknownActionError):
        engine.grant_authorization(99, AuthorizationLevel.NATIONAL)


def test_pending_actions_cause_zero_truth_mutation(mini_pb):
    scen = mini_scenario(blue_auth="Operator")
    engine = Engine(scen, mini_pb, seed=1)
    before = copy.deepcopy(engine.state.truth)
    engine.step({Side.BLUE: [MoveRequest("natl-strike", Intensity.HIGH)]})
    for _ in range(100):
        engine.step({})
    assert engine.state.truth == before
    assert engine.state.actions[1].outcome is ActionOutcome.PENDING


# -- long-lead actions ---------------------------------------------------------------


def test_insider_overtaken_when_horizon_too_short(mini_pb):
    scen = mini_scenario(
        long_lead={"place_insider": {"min_ticks": 2000, "max_ticks": 6000, "success_probability": 1.0}}
    )
    engine = Engine(scen, mini_pb, seed=4)
    engine.step({Side.BLUE: [MoveRequest("insider", Intensity.HIGH)]})
    for _ in range(999):
        engine.step({})
    engine.finalize()
    action = engine.state.actions[1]
    assert action.outcome is ActionOutcome.OVERTAKEN
    completed = [e for e in engine.state.event_log if e.kind is EventKind.ACTION_COMPLETED]
    assert completed[-1].payload["outcome"] == "Overtaken"


def test_longlead_succeeds_at_drawn_tick(mini_pb):
    seed = 21
    scen = mini_scenario(
        long_lead={"infiltrate": {"min_ticks": 100, "max_ticks": 200, "success_probability": 1.0}}
    )
    engine = Engine(scen, mini_pb, seed=seed)
    engine.step({Side.BLUE: [MoveRequest("infil", Intensity.MEDIUM)]})
    # oracle: replay the named rng stream that produced the window draw
    expected = random.Random(f"{seed}/longlead").randint(100, 200)
    action = engine.state.actions[1]
    assert action.completion_tick == expected
    assert 100 <= action.completion_tick <= 200
    for _ in range(500):
        engine.step({})
    assert action.outcome is ActionOutcome.SUCCEEDED
    completed = [
        e
        for e in engine.state.event_log
        if e.kind is EventKind.ACTION_COMPLETED and e.action_id == 1
    ]
    assert completed[0].tick == expected


def test_longlead_zero_probability_fails(mini_pb):
    scen = mini_scenario(
        long_lead={"infiltrate": {"min_ticks": 5, "max_ticks": 10, "success_probability": 0.0}}
    )
    engine = Engine(scen, mini_pb, seed=2)
    engine.step({Side.BLUE: [MoveRequest("infil", Intensity.MEDIUM)]})
    for _ in range(20):
        engine.step({})
    assert engine.state.actions[1].outcome is ActionOutcome.FAILED
    # failed action compromised nothing
    assert not any(a.compromised for a in engine.state.truth.truth(Side.RED).assets.values())


# -- sequence machine and conservation ----------------------------------------------


def test_counter_attack_execution_requires_planning(default_playbook, default_scenario):
    policies = {Side.RED: get_policy("scripted-red"), Side.BLUE: get_policy("scripted-blue")}
    engine = run_campaign(default_scenario, default_playbook, policies, 500, 42)
    planning_plays = {
        play_id
        for play_id, phase in default_scenario.phase_plays.items()
        if phase == "CounterAttackPlanning"
    }
    planning_done = {Side.RED: False, Side.BLUE: False}
    for event in engine.state.event_log:
        if (
            event.kind is EventKind.ACTION_COMPLETED
            and event.payload.get("play") in planning_plays
            and event.payload["outcome"] == "Succeeded"
        ):
            planning_done[event.side] = True
        if (
            event.kind is EventKind.PHASE_SPAWNED
            and event.payload["phase"] == "CounterAttackExecution"
        ):
            assert planning_done[event.side]


def test_assets_never_vanish(default_playbook, default_scenario):
    initial = {
        side: set(truth.assets)
        for side, truth in default_scenario.build_truth().sides.items()
    }
    policies = {Side.RED: get_policy("scripted-red"), Side.BLUE: get_policy("scripted-blue")}
    engine = run_campaign(default_scenario, default_playbook, policies, 400, 13)
    for side in Side:
        final = engine.state.truth.truth(side).assets
        assert initial[side] <= set(final)
        for asset_id in set(final) - initial[side]:
            assert final[asset_id].function in (
                AssetFunction.DECOY,
                AssetFunction.HONEYPOT,
            )
