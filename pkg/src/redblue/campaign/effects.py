"""Effect application against ground truth, and mission schedule scoring.

Target selectors (documented in docs/scenario-format.md):

    "worldwide" / "self" / scope words   own side (posture effects)
    "own-intel"                          own intel-gathering assets
    "opponent-intel"                     first opponent asset advertising
                                         IntelGathering (decoys included)
    "asset:<id>"                         a specific opponent asset by id
    "function:<Fn>"                      first own asset with that function
    "task:current" / "task:<id>"         opponent mission task
    free text (decoy/honeypot deploys)   advertised role of the new asset

Opponent-facing selectors resolve against *advertised* functions, so decoys
and honeypots soak up targeting exactly like the real thing.
"""

from __future__ import annotations

from dataclasses import dataclass

from redblue.campaign.model import (
    AssetFunction,
    CyberAsset,
    Emission,
    Mission,
    MissionTask,
    ObservationChannel,
    Side,
    SideTruth,
    WorldTruth,
)
from redblue.playbook.model import EffectKind, EffectSpec, Intensity

#: Hours of world effect per intensity step; override via scenario config.
DEFAULT_INTENSITY_HOURS = {Intensity.LOW: 24, Intensity.MEDIUM: 72, Intensity.HIGH: 120}

#: Defender posture damping applied to mission-task pauses.
POSTURE_DAMPING = {Intensity.LOW: 1.0, Intensity.MEDIUM: 0.5, Intensity.HIGH: 0.25}

_SCOPE_WORDS = {"worldwide", "theatre", "local", "self", ""}


class EffectTargetError(Exception):
    """Raised when an effect's target selector does not resolve."""


@dataclass
class EffectOutcome:
    """What one effect application did, in engine-event-ready form."""

    emissions: list[Emission]
    posture_change: tuple[Side, Intensity, Intensity] | None = None
    mission_pause: tuple[str, int, int] | None = None  # task id, pause, total delay
    deployed_asset: str | None = None
    compromised_asset: str | None = None
    insider_placed: bool = False


def planned_completion(tasks: list[MissionTask], with_pauses: bool) -> int:
    """Forward-pass completion hour of a task chain; tasks run in list order
    and never start before their planned start."""
    clock = 0
    for task in tasks:
        start = max(task.planned_start_hours, clock)
        clock = start + task.planned_duration_hours + (task.pause_hours if with_pauses else 0)
    return clock


def mission_delay(mission: Mission) -> int:
    """Actual completion minus planned completion, in hours."""
    if not mission.tasks:
        return 0
    return planned_completion(mission.tasks, True) - planned_completion(mission.tasks, False)


def _next_asset_id(truth: SideTruth, prefix: str) -> str:
    n = 1
    side = truth.side.value.lower()
    while f"{side}-{prefix}-{n}" in truth.assets:
        n += 1
    return f"{side}-{prefix}-{n}"


def _task_at(mission: Mission, tick: int) -> MissionTask | None:
    # Earliest task still unfinished at `tick` under the paused schedule;
    # falls back to the final task once everything has notionally finished.
    clock = 0
    for task in mission.tasks:
        start = max(task.planned_start_hours, clock)
        clock = start + task.planned_duration_hours + task.pause_hours
        if clock > tick:
            return task
    return mission.tasks[-1] if mission.tasks else None


def _resolve_opponent_asset(opponent: SideTruth, selector: str) -> CyberAsset:
    if selector.startswith("asset:"):
        asset = opponent.assets.get(selector.split(":", 1)[1])
        if asset is None:
            raise EffectTargetError(f"no such asset {selector!r}")
        return asset
    if selector == "opponent-intel":
        wanted = AssetFunction.INTEL_GATHERING
    elif selector.startswith("function:"):
        try:
            wanted = AssetFunction(selector.split(":", 1)[1])
        except ValueError as exc:
            raise EffectTargetError(f"bad function selector {selector!r}") from exc
    else:
        raise EffectTargetError(f"unresolvable opponent selector {selector!r}")
    for asset in sorted(opponent.assets.values(), key=lambda a: a.id):
        if asset.advertised_function is wanted:
            return asset
    raise EffectTargetError(f"no opponent asset advertising {wanted.value}")


def _honeypot_hit(asset: CyberAsset, magnitude: Intensity) -> list[Emission]:
    if asset.function is not AssetFunction.HONEYPOT:
        return []
    return [
        Emission(
            source_side=asset.owner.opponent,
            channel=ObservationChannel.INTEL_GATHERING_ACTIVITY,
            signal="honeypot-interaction",
            magnitude=magnitude,
            subject_asset=asset.id,
            always_observed=True,
            observer=asset.owner,
        )
    ]


def apply_effect(
    truth: WorldTruth,
    effect: EffectSpec,
    actor: Side,
    tick: int = 0,
    intensity_hours: dict[Intensity, int] | None = None,
) -> EffectOutcome:
    """Mutate ground truth according to one effect and report what happened.

    The magnitude on `effect` is already the bound action intensity (the
    engine substitutes the requested intensity before calling). Long-lead
    effects (Infiltrate, PlaceInsider) reach this function only after their
    success draw, so applying them is unconditional here.
    """
    hours_scale = intensity_hours or DEFAULT_INTENSITY_HOURS
    own = truth.truth(actor)
    opponent = truth.truth(actor.opponent)
    kind, magnitude, selector = effect.kind, effect.magnitude, effect.target_selector

    if kind is EffectKind.RAISE_POSTURE or kind is EffectKind.LOWER_POSTURE:
        if selector not in _SCOPE_WORDS:
            raise EffectTargetError(f"posture selector must be a scope word, got {selector!r}")
        old = own.posture
        new = max(old, magnitude) if kind is EffectKind.RAISE_POSTURE else min(old, magnitude)
        own.posture = new
        for asset in own.assets.values():
            if kind is EffectKind.RAISE_POSTURE:
                asset.posture = max(asset.posture, magnitude)
        change = (actor, old, new) if new != old else None
        return EffectOutcome(emissions=[], posture_change=change)

    if kind is EffectKind.RAISE_MONITOR:
        own.monitor_level = max(own.monitor_level, magnitude)
        for asset in own.assets.values():
            if asset.function is AssetFunction.INTEL_GATHERING:
                asset.monitor_level = max(asset.monitor_level, magnitude)
        return EffectOutcome(emissions=[])

    if kind is EffectKind.DEPLOY_DECOY:
        asset_id = _next_asset_id(own, "decoy")
        own.assets[asset_id] = CyberAsset(
            id=asset_id,
            owner=actor,
            function=AssetFunction.DECOY,
            advertised_function=AssetFunction.INTEL_GATHERING,
            monitor_level=magnitude,
            genuine=False,
        )
        return EffectOutcome(emissions=[], deployed_asset=asset_id)

    if kind is EffectKind.DEPLOY_HONEYPOT:
        asset_id = _next_asset_id(own, "honeypot")
        advertised = AssetFunction.MISSION_SUPPORT
        if selector in ("intelligence", "intel"):
            advertised = AssetFunction.INTEL_GATHERING
        elif selector == "command-control":
            advertised = AssetFunction.COMMAND_CONTROL
        own.assets[asset_id] = CyberAsset(
            id=asset_id,
            owner=actor,
            function=AssetFunction.HONEYPOT,
            advertised_function=advertised,
            monitor_level=magnitude,
            genuine=True,
        )
        emission = Emission(
            source_side=actor,
            channel=ObservationChannel.ASSET_STATUS,
            signal="asset-online",
            magnitude=magnitude,
            subject_asset=asset_id,
            detail=advertised.value,
            genuine=True,
        )
        return EffectOutcome(emissions=[emission], deployed_asset=asset_id)

    if kind is EffectKind.REPOSITION_ASSET:
        target = _resolve_own_asset(own, selector)
        target.posture = max(target.posture, magnitude)
        emission = Emission(
            source_side=actor,
            channel=ObservationChannel.ASSET_STATUS,
            signal="asset-repositioned",
            magnitude=magnitude,
            subject_asset=target.id,
            genuine=True,
        )
        return EffectOutcome(emissions=[emission])

    if kind is EffectKind.INFILTRATE:
        target = _resolve_opponent_asset(opponent, selector)
        emissions = _honeypot_hit(target, magnitude)
        target.compromised = True
        return EffectOutcome(emissions=emissions, compromised_asset=target.id)

    if kind is EffectKind.PLACE_INSIDER:
        own.insider_in_opponent = True
        return EffectOutcome(emissions=[], insider_placed=True)

    if kind is EffectKind.DEGRADE_MISSION_TASK:
        mission = opponent.mission
        if mission is None or not mission.tasks:
            raise EffectTargetError("opponent has no mission tasks to degrade")
        if selector == "task:current" or selector == "":
            task = _task_at(mission, tick)
        else:
            wanted = selector.split(":", 1)[1] if selector.startswith("task:") else selector
            task = next((t for t in mission.tasks if t.task_id == wanted), None)
        if task is None:
            raise EffectTargetError(f"no mission task matches {selector!r}")
        nominal = hours_scale[magnitude]
        pause = int(round(nominal * POSTURE_DAMPING[opponent.posture]))
        task.pause_hours += pause
        own.inflicted_pause_hours += pause
        total = mission_delay(mission)
        emission = Emission(
            source_side=actor,
            channel=ObservationChannel.EFFECT_ON_RESOURCES,
            signal="service-degradation",
            magnitude=magnitude,
            subject_asset=None,
            genuine=True,
        )
        return EffectOutcome(
            emissions=[emission], mission_pause=(task.task_id, pause, total)
        )

    raise EffectTargetError(f"unhandled effect kind {kind}")


def _resolve_own_asset(own: SideTruth, selector: str) -> CyberAsset:
    if selector.startswith("asset:"):
        asset = own.assets.get(selector.split(":", 1)[1])
        if asset is None:
            raise EffectTargetError(f"no such asset {selector!r}")
        return asset
    if selector.startswith("function:"):
        try:
            wanted = AssetFunction(selector.split(":", 1)[1])
        except ValueError as exc:
            raise EffectTargetError(f"bad function selector {selector!r}") from exc
        for asset in sorted(own.assets.values(), key=lambda a: a.id):
            if asset.function is wanted:
                return asset
        raise EffectTargetError(f"no own asset with function {wanted.value}")
    raise EffectTargetError(f"unresolvable own-asset selector {selector!r}")
