"""Planner: evaluation, tree expansion, pruning soundness, recommendations."""

import random

import pytest

from redblue.campaign.model import BeliefState, ObservationChannel, Side
from redblue.planner import (
    EvaluationWeights,
    MoveNode,
    PlanState,
    PlannerConfig,
    PlannerRefusedError,
    PruneRules,
    apply_move,
    brute_force_value,
    enumerate_moves,
    evaluate,
    expand_tree,
    initial_plan_state,
    recommend,
)
from redblue.playbook.model import (
    AuthorizationLevel,
    EffectKind,
    EffectSpec,
    Intensity,
    Play,
    Playbook,
    SideHint,
    StratagemId,
)

SIDS = [
    StratagemId.parse(s)
    for s in [
        "Fortify",
        "Dodge",
        "Deceive",
        "Block",
        "Monitor",
        "Monitor.Watch",
        "Block.Cutoff",
        "Deceive.Chaff",
    ]
]


def mk_state(**kwargs) -> PlanState:
    base = dict(
        delay_hours=0,
        posture=(Intensity.LOW, Intensity.LOW),
        monitor=(Intensity.LOW, Intensity.LOW),
        used=(frozenset(), frozenset()),
        inferred=(frozenset(), frozenset()),
        honeypots=(0, 0),
        decoys=(0, 0),
    )
    base.update(kwargs)
    return PlanState(**base)


def mk_play(pid, effects=(), stratagems=("Fortify",), auth=AuthorizationLevel.OPERATOR, tags=("standing",)):
    return Play(
        id=pid,
        name=pid,
        side_hint=SideHint.EITHER,
        stratagems=tuple(StratagemId.parse(s) for s in stratagems),
        situation_tags=tuple(tags),
        required_authorization=auth,
        effects=tuple(effects),
    )


# -- evaluate ---------------------------------------------------------------------


def test_red_value_one_at_target_with_no_exposure():
    cfg = PlannerConfig(delay_target_hours=336)
    state = mk_state(delay_hours=336, used=(frozenset(SIDS[:4]), frozenset()))
    assert evaluate(state, Side.RED, cfg) == pytest.approx(1.0)


def test_initial_state_mission_terms_zero():
    cfg = PlannerConfig()
    state = mk_state()
    assert evaluate(state, Side.RED, cfg) == pytest.approx(0.0)
    assert evaluate(state, Side.BLUE, cfg) == pytest.approx(0.0)


def test_red_value_half_delay_half_exposed():
    # delay 168 of 336 => 0.5; 2 of 4 used stratagems inferred with weight
    # 0.5 => penalty 0.25; value 0.25.
    cfg = PlannerConfig(delay_target_hours=336, weights=EvaluationWeights(exposure=0.5))
    used = frozenset(SIDS[:4])
    inferred = frozenset(SIDS[:2])
    state = mk_state(delay_hours=168, used=(used, frozenset()), inferred=(inferred, frozenset()))
    assert evaluate(state, Side.RED, cfg) == pytest.approx(0.5 - 0.25)
    assert evaluate(state, Side.RED, cfg) == pytest.approx(0.25)


def test_values_bounded():
    cfg = PlannerConfig()
    for delay in (0, 100, 1000):
        for posture in Intensity:
            state = mk_state(
                delay_hours=delay,
                posture=(Intensity.LOW, posture),
                used=(frozenset(SIDS), frozenset()),
                inferred=(frozenset(SIDS), frozenset()),
            )
            for side in Side:
                assert -2.0 <= evaluate(state, side, cfg) <= 2.0


# -- expansion vs brute force -----------------------------------------------------


def cand_map(plays):
    return {s: [(p, i) for p in plays for i in Intensity] for s in Side}


def test_depth_zero_single_node():
    cfg = PlannerConfig()
    state = mk_state(delay_hours=50)
    pb = Playbook()
    node = expand_tree(state, Side.RED, 0, PruneRules.safe(), pb, candidates=cand_map([]), cfg=cfg)
    assert node.children == []
    assert node.value == evaluate(state, Side.RED, cfg)
    assert brute_force_value(state, Side.RED, 0, pb, candidates=cand_map([]), cfg=cfg) == node.value


def test_depth_two_matches_handwritten_enumeration():
    # Independent oracle: direct two-ply loops over (move or pass) lines.
    cfg = PlannerConfig(delay_target_hours=336, signatured=frozenset(SIDS))
    attack = mk_play("attack", [EffectSpec(EffectKind.DEGRADE_MISSION_TASK, Intensity.HIGH, "task:current")], stratagems=("Block.Cutoff", "Block"))
    fortify = mk_play("fortify", [EffectSpec(EffectKind.RAISE_POSTURE, Intensity.HIGH, "worldwide")])
    watch = mk_play("watch", [EffectSpec(EffectKind.RAISE_MONITOR, Intensity.HIGH, "own-intel")], stratagems=("Monitor.Watch", "Monitor"))
    plays = [attack, fortify, watch]
    state = mk_state()
    candidates = cand_map(plays)

    moves = [None] + candidates[Side.RED]

    def after(s, side, move):
        if move is None:
            return s
        return apply_move(s, side, move[0], move[1], cfg)

    oracle = max(
        min(
            evaluate(after(after(state, Side.RED, red), Side.BLUE, blue), Side.RED, cfg)
            for blue in moves
        )
        for red in moves
    )
    pb = Playbook(plays=tuple(plays))
    tree_value = expand_tree(
        state, Side.RED, 2, PruneRules.safe(), pb, candidates=candidates, cfg=cfg
    ).value
    brute = brute_force_value(state, Side.RED, 2, pb, candidates=candidates, cfg=cfg)
    assert tree_value == oracle
    assert brute == oracle


def random_instance(rng):
    kinds = list(EffectKind)
    plays = []
    for i in range(rng.randint(1, 4)):
        effects = tuple(
            EffectSpec(rng.choice(kinds), rng.choice(list(Intensity)), "task:current")
            for _ in range(rng.randint(0, 2))
        )
        plays.append(
            mk_play(
                f"p{i}",
                effects,
                stratagems=tuple(str(s) for s in rng.sample(SIDS, rng.randint(1, 3))),
            )
        )
    used0 = frozenset(rng.sample(SIDS, rng.randint(0, 3)))
    used1 = frozenset(rng.sample(SIDS, rng.randint(0, 3)))
    state = mk_state(
        delay_hours=rng.randint(0, 400),
        posture=(rng.choice(list(Intensity)), rng.choice(list(Intensity))),
        monitor=(rng.choice(list(Intensity)), rng.choice(list(Intensity))),
        used=(used0, used1),
        inferred=(
            frozenset(rng.sample(sorted(used0, key=str), min(len(used0), rng.randint(0, 2)))),
            frozenset(rng.sample(sorted(used1, key=str), min(len(used1), rng.randint(0, 2)))),
        ),
        honeypots=(rng.randint(0, 2), rng.randint(0, 2)),
        decoys=(rng.randint(0, 2), rng.randint(0, 2)),
    )
    cfg = PlannerConfig(signatured=frozenset(rng.sample(SIDS, 5)))
    side = rng.choice(list(Side))
    depth = rng.randint(0, 3)
    return state, plays, side, depth, cfg


def test_safe_pruning_equals_brute_force_on_random_instances():
    for trial in range(100):
        rng = random.Random(5000 + trial)
        state, plays, side, depth, cfg = random_instance(rng)
        pb = Playbook(plays=tuple(plays))
        candidates = cand_map(plays)
        tree = expand_tree(state, side, depth, PruneRules.safe(), pb, candidates=candidates, cfg=cfg)
        brute = brute_force_value(state, side, depth, pb, candidates=candidates, cfg=cfg)
        assert tree.value == brute, f"trial {trial}"


def test_cycle_repeat_marks_looping_move():
    # Posture already High and stratagems already used: the move is a no-op
    # returning to the same digest, so the child is pruned with no children.
    cfg = PlannerConfig()
    dodge = mk_play(
        "dodge",
        [EffectSpec(EffectKind.RAISE_POSTURE, Intensity.LOW, "worldwide")],
        stratagems=("Dodge",),
    )
    state = mk_state(
        posture=(Intensity.HIGH, Intensity.HIGH),
        used=(frozenset({StratagemId.parse("Dodge")}), frozenset()),
    )
    pb = Playbook(plays=(dodge,))
    node = expand_tree(
        state, Side.RED, 2, PruneRules(cycle_repeat=True), pb,
        candidates=cand_map([dodge]), cfg=cfg,
    )
    cycled = [c for c in node.children if c.pruned_reason == "CycleRepeat"]
    assert cycled
    for child in cycled:
        assert child.children == []
        assert child.value is None
        assert child.digest == state.digest()


def test_dominated_prunes_weaker_twin():
    cfg = PlannerConfig(delay_target_hours=336)
    strong = mk_play(
        "a-strike",
        [EffectSpec(EffectKind.DEGRADE_MISSION_TASK, Intensity.HIGH, "task:current")],
        stratagems=("Block",),
    )
    weak = mk_play(
        "b-strike",
        [EffectSpec(EffectKind.DEGRADE_MISSION_TASK, Intensity.LOW, "task:current")],
        stratagems=("Block",),
    )
    candidates = {Side.RED: [(strong, Intensity.HIGH), (weak, Intensity.LOW)], Side.BLUE: []}
    pb = Playbook(plays=(strong, weak))
    node = expand_tree(
        mk_state(), Side.RED, 1, PruneRules(dominated=True), pb,
        candidates=candidates, cfg=cfg,
    )
    reasons = {c.move.play_id: c.pruned_reason for c in node.children if c.move and c.move.play_id}
    assert reasons["a-strike"] is None
    assert reasons["b-strike"] == "Dominated"
    # pruning did not change the root value
    assert node.value == brute_force_value(mk_state(), Side.RED, 1, pb, candidates=candidates, cfg=cfg)


def test_beam_cut_is_one_sided_lower_bound():
    # BeamCut restricts only the planning side's own options, so its root
    # value never exceeds the unpruned value. No equality asserted.
    for trial in range(30):
        rng = random.Random(9000 + trial)
        state, plays, side, depth, cfg = random_instance(rng)
        depth = max(depth, 1)
        pb = Playbook(plays=tuple(plays))
        candidates = cand_map(plays)
        exact = brute_force_value(state, side, depth, pb, candidates=candidates, cfg=cfg)
        beamed = expand_tree(
            state, side, depth,
            PruneRules(dominated=False, cycle_repeat=False, beam_width=1),
            pb, candidates=candidates, cfg=cfg,
        )
        assert beamed.value <= exact + 1e-12
        marked = _collect(beamed, "BeamCut")
        if len({p.id for p in plays}) * 3 > 1:
            assert marked  # something actually got beamed


def _collect(node: MoveNode, reason: str):
    found = [node] if node.pruned_reason == reason else []
    for child in node.children:
        found.extend(_collect(child, reason))
    return found


def test_brute_force_guard_rails():
    pb = Playbook(plays=tuple(mk_play(f"p{i}") for i in range(7)))
    with pytest.raises(PlannerRefusedError):
        brute_force_value(mk_state(), Side.RED, 4, pb)
    with pytest.raises(PlannerRefusedError):
        brute_force_value(mk_state(), Side.RED, 2, pb)


# -- enumeration -------------------------------------------------------------------


def alert_beliefs():
    beliefs = BeliefState(holder=Side.BLUE)
    beliefs.believed_opponent_activity[
        ObservationChannel.INTEL_GATHERING_ACTIVITY
    ] = Intensity.HIGH
    beliefs.inferred_stratagems[StratagemId.parse("Monitor.Watch")] = 0.75
    return beliefs


def test_enumerate_includes_counters_of_inferred(default_playbook):
    candidates = enumerate_moves(alert_beliefs(), None, default_playbook, Side.BLUE)
    ids = {play.id for play, _ in candidates}
    # raise-monitor-watch counters Monitor.Watch
    assert "raise-monitor-watch" in ids
    assert "fish-bowl" in ids


def test_enumerate_fresh_beliefs_standing_only(default_playbook):
    candidates = enumerate_moves(BeliefState(holder=Side.BLUE), None, default_playbook, Side.BLUE)
    for play, _ in candidates:
        assert "standing" in play.situation_tags


def test_enumerate_candidate_count_is_plays_times_three(default_playbook):
    candidates = enumerate_moves(alert_beliefs(), None, default_playbook, Side.BLUE)
    ids = {play.id for play, _ in candidates}
    assert len(candidates) == len(ids) * 3


# -- recommendations ----------------------------------------------------------------


def test_recommend_monitor_increase_commander(default_playbook, default_scenario):
    rec = recommend(
        alert_beliefs(), None, default_playbook, Side.BLUE,
        AuthorizationLevel.COMMANDER, 2, scenario=default_scenario,
    )
    ranked_ids = {e.play_id for e in rec.ranked}
    executable_ids = {e.play_id for e in rec.executable_now}
    assert "fortify-posture" in ranked_ids
    assert "raise-monitor-watch" in ranked_ids
    assert "fortify-posture" in executable_ids
    assert "raise-monitor-watch" in executable_ids


def test_recommend_split_respects_authorization(default_playbook, default_scenario):
    rec = recommend(
        alert_beliefs(), None, default_playbook, Side.BLUE,
        AuthorizationLevel.OPERATOR, 1, scenario=default_scenario,
    )
    plays = {p.id: p for p in default_playbook.plays}
    for entry in rec.executable_now:
        assert plays[entry.play_id].required_authorization <= AuthorizationLevel.OPERATOR
    for play_id, needed in rec.awaiting:
        assert needed > AuthorizationLevel.OPERATOR
    assert {e.play_id for e in rec.executable_now}.isdisjoint(
        {p for p, _ in rec.awaiting}
    )
    assert rec.awaiting  # commander-level plays exist in the default playbook


def test_recommend_national_awaiting_empty(default_playbook, default_scenario):
    rec = recommend(
        alert_beliefs(), None, default_playbook, Side.BLUE,
        AuthorizationLevel.NATIONAL, 1, scenario=default_scenario,
    )
    assert rec.awaiting == []


def test_recommend_deterministic(default_playbook, default_scenario):
    def snap():
        rec = recommend(
            alert_beliefs(), None, default_playbook, Side.BLUE,
            AuthorizationLevel.COMMANDER, 2, scenario=default_scenario,
        )
        return [(e.play_id, e.intensity, e.score) for e in rec.ranked]

    assert snap() == snap()


def test_recommend_ranking_stable_under_weight_scaling(default_playbook, default_scenario):
    from redblue.planner import config_from_scenario

    base_cfg = config_from_scenario(default_scenario)
    scaled_cfg = PlannerConfig(
        weights=EvaluationWeights(mission=3.0, exposure=1.5, posture=0.75),
        intensity_hours=base_cfg.intensity_hours,
        signatured=base_cfg.signatured,
        delay_target_hours=base_cfg.delay_target_hours,
    )

    def order(cfg):
        rec = recommend(
            alert_beliefs(), None, default_playbook, Side.BLUE,
            AuthorizationLevel.NATIONAL, 2, cfg=cfg,
        )
        return [(e.play_id, e.intensity) for e in rec.ranked]

    assert order(base_cfg) == order(scaled_cfg)


def test_recommend_depth_above_max_refused(default_playbook, default_scenario):
    with pytest.raises(PlannerRefusedError):
        recommend(
            alert_beliefs(), None, default_playbook, Side.BLUE,
            AuthorizationLevel.NATIONAL, 4, scenario=default_scenario,
        )


def test_recommend_empty_candidates_gives_empty_recommendation(default_scenario):
    pb = Playbook()
    rec = recommend(
        BeliefState(holder=Side.BLUE), None, pb, Side.BLUE,
        AuthorizationLevel.NATIONAL, 2, scenario=default_scenario,
    )
    assert rec.ranked == []
    assert rec.executable_now == []
    assert rec.awaiting == []
