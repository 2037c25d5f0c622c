"""Move/counter-move planner: bounded minimax over an abstract plan state.

The planner reasons over a compact, hashable `PlanState` instantiated from
the planning side's beliefs and own truth (unknowns filled with priors), not
over full campaign state. Transitions are deliberately lattice-monotone
(delay only grows, postures and monitors only ratchet up, stratagem sets only
widen); de-escalation effects are modeled as planning no-ops. Monotonicity is
what makes the safe prune rules exact:

* CycleRepeat prunes a move returning to a state digest already on the path.
  In a monotone lattice that forces the whole intервening path to be equal,
  so the pruned line is identical to the always-available pass move.
* Dominated prunes a move whose post-state matches another candidate's on
  every field except the mission-delay component, with the delay at least as
  good for the mover (exact duplicates count). Identical residual state plus
  a monotone value function makes the dominated subtree provably no better.
* BeamCut(k) keeps the top k moves by shallow score at the planning side's
  own plies only. It is honestly unsafe: it can only lower the planning
  side's root value, never raise it, and is excluded from soundness tests.

Both sides always have an implicit pass move, in the tree and in the
brute-force reference, so pruning a looping move never removes the only
stand-pat line.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from redblue.campaign.model import (
    AssetFunction,
    BeliefState,
    ObservationChannel,
    Side,
    SideTruth,
)
from redblue.campaign.effects import mission_delay
from redblue.playbook.model import (
    AuthorizationLevel,
    EffectKind,
    Intensity,
    Play,
    Playbook,
    StratagemId,
)

_POSTURE_DAMPING = {Intensity.LOW: 1.0, Intensity.MEDIUM: 0.5, Intensity.HIGH: 0.25}
_POSTURE_COST = {Intensity.LOW: 0.0, Intensity.MEDIUM: 0.5, Intensity.HIGH: 1.0}
_ATTACK_KINDS = frozenset({EffectKind.DEGRADE_MISSION_TASK, EffectKind.INFILTRATE})

#: Situation tags derived from believed channel activity at Medium or above.
CHANNEL_TAGS = {
    ObservationChannel.INTEL_GATHERING_ACTIVITY: "adversary-monitor-increase",
    ObservationChannel.DEFENSE_POSTURE: "adversary-posture-raise",
    ObservationChannel.EFFECT_ON_RESOURCES: "under-attack",
    ObservationChannel.ASSET_STATUS: "adversary-asset-shift",
}

#: Situation tags derived from an inferred stratagem's root segment.
STRATAGEM_TAGS = {
    "Monitor": "adversary-monitor-increase",
    "Fortify": "adversary-posture-raise",
    "Block": "under-attack",
    "Dodge": "adversary-asset-shift",
    "Deceive": "adversary-deception",
}

ALWAYS_TAG = "standing"


class PlannerRefusedError(Exception):
    """Guard rail tripped: the requested exhaustive search is too large."""


@dataclass(frozen=True)
class EvaluationWeights:
    mission: float = 1.0
    exposure: float = 0.5
    posture: float = 0.25


@dataclass(frozen=True)
class PlannerConfig:
    weights: EvaluationWeights = EvaluationWeights()
    intensity_hours: tuple[tuple[Intensity, int], ...] = (
        (Intensity.LOW, 24),
        (Intensity.MEDIUM, 72),
        (Intensity.HIGH, 120),
    )
    # Stratagems that leave recognizable signatures; leaked on exposure.
    signatured: frozenset[StratagemId] = frozenset()
    delay_target_hours: int = 336
    max_depth: int = 3

    def hours(self, intensity: Intensity) -> int:
        return dict(self.intensity_hours)[intensity]


def config_from_scenario(scenario) -> PlannerConfig:
    signatured = frozenset(
        sid for sids in scenario.inference.signatures.values() for sid in sids
    )
    return PlannerConfig(
        intensity_hours=tuple(sorted(scenario.intensity_hours.items())),
        signatured=signatured,
        delay_target_hours=scenario.delay_target_hours,
    )


def _idx(side: Side) -> int:
    return 0 if side is Side.RED else 1


@dataclass(frozen=True)
class PlanState:
    """Abstract world summary the planner searches over. Index 0 is Red."""

    delay_hours: int
    posture: tuple[Intensity, Intensity]
    monitor: tuple[Intensity, Intensity]
    used: tuple[frozenset[StratagemId], frozenset[StratagemId]]
    inferred: tuple[frozenset[StratagemId], frozenset[StratagemId]]
    honeypots: tuple[int, int]
    decoys: tuple[int, int]

    def digest(self) -> str:
        def names(s: frozenset[StratagemId]) -> str:
            return ",".join(sorted(str(x) for x in s))

        return "|".join(
            [
                f"d{self.delay_hours}",
                f"p{self.posture[0].value}{self.posture[1].value}",
                f"m{self.monitor[0].value}{self.monitor[1].value}",
                f"u0[{names(self.used[0])}]",
                f"u1[{names(self.used[1])}]",
                f"i0[{names(self.inferred[0])}]",
                f"i1[{names(self.inferred[1])}]",
                f"h{self.honeypots[0]},{self.honeypots[1]}",
                f"c{self.decoys[0]},{self.decoys[1]}",
            ]
        )


def initial_plan_state(
    beliefs: BeliefState | None, truth_own: SideTruth | None, cfg: PlannerConfig
) -> PlanState:
    """Instantiate the assumed world from own truth and beliefs; everything
    unobserved falls back to a Low/empty prior."""
    posture = [Intensity.LOW, Intensity.LOW]
    monitor = [Intensity.LOW, Intensity.LOW]
    used: list[frozenset] = [frozenset(), frozenset()]
    inferred: list[frozenset] = [frozenset(), frozenset()]
    honeypots = [0, 0]
    decoys = [0, 0]
    delay = 0
    if truth_own is not None:
        me = _idx(truth_own.side)
        posture[me] = truth_own.posture
        monitor[me] = truth_own.monitor_level
        used[me] = frozenset(truth_own.used_stratagems)
        honeypots[me] = sum(
            1 for a in truth_own.assets.values() if a.function is AssetFunction.HONEYPOT
        )
        decoys[me] = sum(
            1 for a in truth_own.assets.values() if a.function is AssetFunction.DECOY
        )
        if truth_own.mission is not None and truth_own.mission.tasks:
            delay = mission_delay(truth_own.mission)
        else:
            delay = truth_own.inflicted_pause_hours
    if beliefs is not None and truth_own is not None:
        opp = 1 - _idx(truth_own.side)
        activity = beliefs.believed_opponent_activity
        posture[opp] = activity.get(ObservationChannel.DEFENSE_POSTURE, Intensity.LOW)
        monitor[opp] = activity.get(
            ObservationChannel.INTEL_GATHERING_ACTIVITY, Intensity.LOW
        )
        known = frozenset(beliefs.inferred_stratagems)
        used[opp] = known
        inferred[opp] = known
    return PlanState(
        delay_hours=delay,
        posture=(posture[0], posture[1]),
        monitor=(monitor[0], monitor[1]),
        used=(used[0], used[1]),
        inferred=(inferred[0], inferred[1]),
        honeypots=(honeypots[0], honeypots[1]),
        decoys=(decoys[0], decoys[1]),
    )


def apply_move(
    state: PlanState, side: Side, play: Play, intensity: Intensity, cfg: PlannerConfig
) -> PlanState:
    """Deterministic abstract transition for one move."""
    me, opp = _idx(side), 1 - _idx(side)
    posture = list(state.posture)
    monitor = list(state.monitor)
    used = list(state.used)
    inferred = list(state.inferred)
    honeypots = list(state.honeypots)
    decoys = list(state.decoys)
    delay = state.delay_hours

    used[me] = used[me] | frozenset(play.stratagems)
    is_attack = False
    for effect in play.effects:
        kind = effect.kind
        if kind is EffectKind.RAISE_POSTURE or kind is EffectKind.REPOSITION_ASSET:
            posture[me] = max(posture[me], intensity)
        elif kind is EffectKind.RAISE_MONITOR:
            monitor[me] = max(monitor[me], intensity)
        elif kind is EffectKind.DEPLOY_DECOY:
            decoys[me] += 1
        elif kind is EffectKind.DEPLOY_HONEYPOT:
            honeypots[me] += 1
        elif kind is EffectKind.DEGRADE_MISSION_TASK:
            is_attack = True
            if side is Side.RED:
                damp = _POSTURE_DAMPING[posture[opp]]
                delay += int(round(cfg.hours(intensity) * damp))
        elif kind is EffectKind.INFILTRATE or kind is EffectKind.PLACE_INSIDER:
            is_attack = is_attack or kind is EffectKind.INFILTRATE
            inferred[opp] = inferred[opp] | (used[opp] & cfg.signatured)
        # LowerPosture intentionally has no planning-model change: transitions
        # stay lattice-monotone, which the safe prune rules rely on.

    leaky = monitor[opp] >= Intensity.MEDIUM or (honeypots[opp] > 0 and is_attack)
    if leaky:
        inferred[me] = inferred[me] | (used[me] & cfg.signatured)

    return PlanState(
        delay_hours=delay,
        posture=(posture[0], posture[1]),
        monitor=(monitor[0], monitor[1]),
        used=(used[0], used[1]),
        inferred=(inferred[0], inferred[1]),
        honeypots=(honeypots[0], honeypots[1]),
        decoys=(decoys[0], decoys[1]),
    )


def evaluate(
    state: PlanState, side: Side, cfg: PlannerConfig | None = None
) -> float:
    """Scalar utility of a plan state for `side`.

    Red: mission-delay progress capped at 1, minus the fraction of Red's own
    stratagems the opponent has inferred, weighted. Blue: the negated mission
    term minus a posture-cost term. Zero-sum on the mission term only.
    """
    cfg = cfg or PlannerConfig()
    w = cfg.weights
    target = max(1, cfg.delay_target_hours)
    mission = min(state.delay_hours / target, 1.0)
    if side is Side.RED:
        me = _idx(side)
        used = state.used[me]
        exposed = len(state.inferred[me] & used) / len(used) if used else 0.0
        return w.mission * mission - w.exposure * exposed
    blue = _idx(Side.BLUE)
    # The +0.0 folds IEEE negative zero into plain zero.
    return -w.mission * mission - w.posture * _POSTURE_COST[state.posture[blue]] + 0.0


def evaluation_components(
    state: PlanState, side: Side, cfg: PlannerConfig
) -> tuple[float, float, float]:
    """(mission term for the side, exposure term, posture cost); oriented so
    the mission term is positive-good for the given side."""
    target = max(1, cfg.delay_target_hours)
    mission = min(state.delay_hours / target, 1.0)
    me = _idx(side)
    used = state.used[me]
    exposed = len(state.inferred[me] & used) / len(used) if used else 0.0
    cost = _POSTURE_COST[state.posture[me]]
    return (mission if side is Side.RED else -mission, exposed, cost)


# -- situation tags and candidate enumeration --------------------------------


def situation_tags(beliefs: BeliefState | None) -> set[str]:
    tags = {ALWAYS_TAG}
    if beliefs is None:
        return tags
    for channel, level in beliefs.believed_opponent_activity.items():
        if level >= Intensity.MEDIUM and channel in CHANNEL_TAGS:
            tags.add(CHANNEL_TAGS[channel])
    for sid in beliefs.inferred_stratagems:
        tag = STRATAGEM_TAGS.get(sid.segments[0])
        if tag:
            tags.add(tag)
    return tags


def _side_matches(play: Play, side: Side) -> bool:
    return play.side_hint.value in (side.value, "Either")


def _all_side_moves(pb: Playbook, side: Side) -> list[tuple[Play, Intensity]]:
    return [
        (play, intensity)
        for play in sorted(pb.plays, key=lambda p: p.id)
        if _side_matches(play, side)
        for intensity in Intensity
    ]


def enumerate_moves(
    beliefs: BeliefState | None,
    truth_own: SideTruth | None,
    pb: Playbook,
    side: Side,
    tags: set[str] | None = None,
) -> list[tuple[Play, Intensity]]:
    """Candidate (play, intensity) pairs for the current situation.

    A play qualifies when its situation tags intersect the derived tags or
    when it counters an inferred stratagem; each qualifying play fans out
    over all three intensities, in deterministic (play id, intensity) order.
    """
    derived = tags if tags is not None else situation_tags(beliefs)
    inferred = set(beliefs.inferred_stratagems) if beliefs else set()
    candidates: list[tuple[Play, Intensity]] = []
    for play in sorted(pb.plays, key=lambda p: p.id):
        if not _side_matches(play, side):
            continue
        tag_hit = bool(derived.intersection(play.situation_tags))
        counter_hit = bool(inferred.intersection(play.counters))
        if not (tag_hit or counter_hit):
            continue
        for intensity in Intensity:
            candidates.append((play, intensity))
    return candidates


# -- tree search ---------------------------------------------------------------


class PruneRule(enum.Enum):
    DOMINATED = "Dominated"
    CYCLE_REPEAT = "CycleRepeat"
    BEAM_CUT = "BeamCut"


@dataclass(frozen=True)
class PruneRules:
    dominated: bool = False
    cycle_repeat: bool = False
    beam_width: int | None = None  # BeamCut(k); None disables

    @classmethod
    def safe(cls) -> "PruneRules":
        return cls(dominated=True, cycle_repeat=True)

    @classmethod
    def parse(cls, names: list[str]) -> "PruneRules":
        dominated = cycle = False
        beam: int | None = None
        for name in names:
            if name == "Dominated":
                dominated = True
            elif name == "CycleRepeat":
                cycle = True
            elif name.startswith("BeamCut(") and name.endswith(")"):
                beam = int(name[len("BeamCut(") : -1])
            else:
                raise ValueError(f"unknown prune rule {name!r}")
        return cls(dominated=dominated, cycle_repeat=cycle, beam_width=beam)


@dataclass
class PlannerMove:
    play_id: str | None  # None is the pass move
    intensity: Intensity | None

    def label(self) -> str:
        if self.play_id is None:
            return "pass"
        assert self.intensity is not None
        return f"{self.play_id}@{self.intensity.label}"


@dataclass
class MoveNode:
    digest: str
    side_to_move: Side
    move: PlannerMove | None  # None at the root
    children: list["MoveNode"] = field(default_factory=list)
    value: float | None = None
    pruned_reason: str | None = None


def _mover_prefers(side: Side, delay_a: int, delay_b: int) -> bool:
    """True when delay_b is at least as good as delay_a for `side`."""
    return delay_b >= delay_a if side is Side.RED else delay_b <= delay_a


def _dominates(side: Side, post_a: PlanState, post_b: PlanState) -> bool:
    """post_b dominates post_a for the mover: identical on every field except
    the mission-delay component, delay at least as good (equality counts)."""
    if replace(post_a, delay_hours=0) != replace(post_b, delay_hours=0):
        return False
    return _mover_prefers(side, post_a.delay_hours, post_b.delay_hours)


def _expand(
    state: PlanState,
    mover: Side,
    root_side: Side,
    depth: int,
    rules: PruneRules,
    candidates: dict[Side, list[tuple[Play, Intensity]]],
    cfg: PlannerConfig,
    path_digests: frozenset[str],
    incoming: PlannerMove | None,
) -> MoveNode:
    node = MoveNode(digest=state.digest(), side_to_move=mover, move=incoming)
    if depth == 0:
        node.value = evaluate(state, root_side, cfg)
        return node

    here = path_digests | {state.digest()}

    # The pass move is always present and never pruned; it is the baseline
    # that keeps loop pruning value-preserving.
    entries: list[tuple[PlannerMove, PlanState]] = [(PlannerMove(None, None), state)]
    for play, intensity in candidates.get(mover, []):
        post = apply_move(state, mover, play, intensity, cfg)
        entries.append((PlannerMove(play.id, intensity), post))

    kept: list[tuple[PlannerMove, PlanState]] = []
    pruned: list[tuple[PlannerMove, PlanState, str]] = []
    for move, post in entries:
        if move.play_id is None:
            kept.append((move, post))
            continue
        if rules.cycle_repeat and post.digest() in here:
            pruned.append((move, post, PruneRule.CYCLE_REPEAT.value))
            continue
        if rules.dominated and any(
            _dominates(mover, post, kept_post) for _, kept_post in kept
        ):
            pruned.append((move, post, PruneRule.DOMINATED.value))
            continue
        kept.append((move, post))

    if rules.beam_width is not None and mover is root_side:
        playable = [(m, p) for m, p in kept if m.play_id is not None]
        if len(playable) > rules.beam_width:
            playable.sort(
                key=lambda item: (-evaluate(item[1], mover, cfg), item[0].label())
            )
            cut = {id(m) for m, _ in playable[rules.beam_width :]}
            new_kept = []
            for move, post in kept:
                if id(move) in cut:
                    pruned.append((move, post, PruneRule.BEAM_CUT.value))
                else:
                    new_kept.append((move, post))
            kept = new_kept

    values: list[float] = []
    for move, post in kept:
        child = _expand(
            post,
            mover.opponent,
            root_side,
            depth - 1,
            rules,
            candidates,
            cfg,
            here,
            move,
        )
        node.children.append(child)
        assert child.value is not None
        values.append(child.value)
    for move, post, reason in pruned:
        node.children.append(
            MoveNode(
                digest=post.digest(),
                side_to_move=mover.opponent,
                move=move,
                pruned_reason=reason,
            )
        )

    node.value = max(values) if mover is root_side else min(values)
    return node


def expand_tree(
    root_state: PlanState,
    side: Side,
    depth: int,
    prune_rules: PruneRules,
    pb: Playbook,
    candidates: dict[Side, list[tuple[Play, Intensity]]] | None = None,
    cfg: PlannerConfig | None = None,
) -> MoveNode:
    """Alternating-side expansion to `depth` plies with minimax propagation.

    Candidate moves per side are fixed at the root. When not supplied they
    default to every side-matching play at every intensity.
    """
    cfg = cfg or PlannerConfig()
    if candidates is None:
        candidates = {s: _all_side_moves(pb, s) for s in Side}
    return _expand(
        root_state, side, side, depth, prune_rules, candidates, cfg, frozenset(), None
    )


def brute_force_value(
    state: PlanState,
    side: Side,
    depth: int,
    pb: Playbook,
    candidates: dict[Side, list[tuple[Play, Intensity]]] | None = None,
    cfg: PlannerConfig | None = None,
) -> float:
    """Exhaustive no-pruning minimax; the reference oracle for expand_tree.

    Guard rails: depth must stay at or below 3 and no side may have more than
    6 candidate plays, otherwise the call is refused.
    """
    cfg = cfg or PlannerConfig()
    if candidates is None:
        candidates = {s: _all_side_moves(pb, s) for s in Side}
    if depth > 3:
        raise PlannerRefusedError(f"depth {depth} exceeds brute-force guard rail of 3")
    for s, cand in candidates.items():
        if len({play.id for play, _ in cand}) > 6:
            raise PlannerRefusedError(
                f"{len({p.id for p, _ in cand})} candidate plays for {s.value} exceed guard rail of 6"
            )

    def minimax(current: PlanState, mover: Side, remaining: int) -> float:
        if remaining == 0:
            return evaluate(current, side, cfg)
        outcomes = [minimax(current, mover.opponent, remaining - 1)]  # pass
        for play, intensity in candidates.get(mover, []):
            post = apply_move(current, mover, play, intensity, cfg)
            outcomes.append(minimax(post, mover.opponent, remaining - 1))
        return max(outcomes) if mover is side else min(outcomes)

    return minimax(state, side, depth)


# -- recommendations -----------------------------------------------------------


@dataclass(frozen=True)
class RankedPlay:
    play_id: str
    intensity: Intensity
    score: float
    rationale: str


@dataclass
class Recommendation:
    ranked: list[RankedPlay] = field(default_factory=list)
    executable_now: list[RankedPlay] = field(default_factory=list)
    awaiting: list[tuple[str, AuthorizationLevel]] = field(default_factory=list)


def _rationale(play: Play, tags: set[str], inferred: set[StratagemId]) -> str:
    parts: list[str] = []
    hit = sorted(tags.intersection(play.situation_tags))
    if hit:
        parts.append("matches " + ", ".join(hit))
    countered = sorted(str(s) for s in inferred.intersection(play.counters))
    if countered:
        parts.append("counters " + ", ".join(countered))
    kinds = sorted({e.kind.value for e in play.effects})
    if kinds:
        parts.append("effects: " + ", ".join(kinds))
    return "; ".join(parts) if parts else "always applicable"


def recommend(
    beliefs: BeliefState | None,
    truth_own: SideTruth | None,
    pb: Playbook,
    side: Side,
    current_auth: AuthorizationLevel,
    depth: int,
    scenario=None,
    cfg: PlannerConfig | None = None,
    tags: set[str] | None = None,
) -> Recommendation:
    """Rank candidate plays by the minimax value of the subtree beginning
    with each move, split into executable-now versus awaiting authorization."""
    if cfg is None:
        cfg = config_from_scenario(scenario) if scenario is not None else PlannerConfig()
    if depth > cfg.max_depth:
        raise PlannerRefusedError(f"depth {depth} exceeds configured max {cfg.max_depth}")
    derived = tags if tags is not None else situation_tags(beliefs)
    inferred = set(beliefs.inferred_stratagems) if beliefs else set()
    candidates = {
        side: enumerate_moves(beliefs, truth_own, pb, side, tags=derived),
        # The opponent is not limited by our situation picture: consider
        # every play their side could run.
        side.opponent: _all_side_moves(pb, side.opponent),
    }
    root = initial_plan_state(beliefs, truth_own, cfg)
    rules = PruneRules.safe()

    entries: list[RankedPlay] = []
    for play, intensity in candidates[side]:
        post = apply_move(root, side, play, intensity, cfg)
        if depth <= 0:
            value = evaluate(post, side, cfg)
        else:
            node = _expand(
                post,
                side.opponent,
                side,
                depth - 1,
                rules,
                candidates,
                cfg,
                frozenset({root.digest()}),
                None,
            )
            assert node.value is not None
            value = node.value
        entries.append(
            RankedPlay(
                play_id=play.id,
                intensity=intensity,
                score=value,
                rationale=_rationale(play, derived, inferred),
            )
        )
    entries.sort(key=lambda e: (-e.score, e.play_id, e.intensity))

    plays = {p.id: p for p in pb.plays}
    executable = []
    awaiting: list[tuple[str, AuthorizationLevel]] = []
    seen_awaiting: set[str] = set()
    for entry in entries:
        required = plays[entry.play_id].required_authorization or AuthorizationLevel.OPERATOR
        if required <= current_auth:
            executable.append(entry)
        elif entry.play_id not in seen_awaiting:
            seen_awaiting.add(entry.play_id)
            awaiting.append((entry.play_id, required))
    return Recommendation(ranked=entries, executable_now=executable, awaiting=awaiting)


def whatif_tree(
    beliefs: BeliefState | None,
    truth_own: SideTruth | None,
    pb: Playbook,
    side: Side,
    depth: int,
    rules: PruneRules,
    scenario=None,
    cfg: PlannerConfig | None = None,
) -> MoveNode:
    """Full exploration tree for the what-if console pane."""
    if cfg is None:
        cfg = config_from_scenario(scenario) if scenario is not None else PlannerConfig()
    derived = situation_tags(beliefs)
    candidates = {
        side: enumerate_moves(beliefs, truth_own, pb, side, tags=derived),
        side.opponent: _all_side_moves(pb, side.opponent),
    }
    root = initial_plan_state(beliefs, truth_own, cfg)
    return expand_tree(root, side, depth, rules, pb, candidates=candidates, cfg=cfg)


def serialize_tree(node: MoveNode) -> dict:
    move = None
    if node.move is not None:
        move = {
            "play": node.move.play_id,
            "intensity": node.move.intensity.label if node.move.intensity else None,
        }
    return {
        "digest": node.digest,
        "side_to_move": node.side_to_move.value,
        "move": move,
        "value": node.value,
        "pruned_reason": node.pruned_reason,
        "children": [serialize_tree(c) for c in node.children],
    }
