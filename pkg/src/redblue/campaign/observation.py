"""Observation generation and belief updating.

Detection is a per-candidate Bernoulli draw with probability

    p = clamp(base(channel) * f(actor intensity) * g(observer monitor), 0, 1)

where f and g both map Low/Medium/High to 0.5/1.0/1.5. Decoy assets emit
exactly like genuine ones, and honeypot interactions are always observed by
the honeypot's owner.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from redblue.campaign.model import (
    AssetFunction,
    BelievedAsset,
    BeliefState,
    Emission,
    Observation,
    ObservationChannel,
    Side,
    WorldTruth,
)
from redblue.playbook.model import Intensity, StratagemId

INTENSITY_FACTOR = {Intensity.LOW: 0.5, Intensity.MEDIUM: 1.0, Intensity.HIGH: 1.5}

#: Signal emitted by intel-gathering (and decoy) assets, keyed by whether the
#: asset is running above its peacetime level.
PROBE_SIGNAL_RAISED = "probe-rate-increase"
PROBE_SIGNAL_STEADY = "probe-rate-steady"
POSTURE_SIGNAL = "posture-raise"


@dataclass
class DetectionConfig:
    base_probability: dict[ObservationChannel, float] = field(
        default_factory=lambda: {c: 0.4 for c in ObservationChannel}
    )


@dataclass
class InferenceConfig:
    """Signal-key-to-stratagem signature table plus counting-rule knobs."""

    signatures: dict[str, tuple[StratagemId, ...]] = field(default_factory=dict)
    min_matches: int = 2
    window_ticks: int = 48


def detection_probability(
    cfg: DetectionConfig, channel: ObservationChannel, actor: Intensity, monitor: Intensity
) -> float:
    base = cfg.base_probability.get(channel, 0.0)
    p = base * INTENSITY_FACTOR[actor] * INTENSITY_FACTOR[monitor]
    return max(0.0, min(1.0, p))


def continuous_emissions(truth: WorldTruth, observer: Side) -> list[Emission]:
    """Standing (every-tick) emissions of the observer's opponent."""
    opponent = truth.truth(observer.opponent)
    emissions: list[Emission] = []
    for asset in sorted(opponent.assets.values(), key=lambda a: a.id):
        if asset.advertised_function is not AssetFunction.INTEL_GATHERING:
            continue
        signal = (
            PROBE_SIGNAL_RAISED
            if asset.monitor_level >= Intensity.MEDIUM
            else PROBE_SIGNAL_STEADY
        )
        emissions.append(
            Emission(
                source_side=opponent.side,
                channel=ObservationChannel.INTEL_GATHERING_ACTIVITY,
                signal=signal,
                magnitude=asset.monitor_level,
                subject_asset=asset.id,
                genuine=asset.genuine,
            )
        )
    if opponent.posture >= Intensity.MEDIUM:
        emissions.append(
            Emission(
                source_side=opponent.side,
                channel=ObservationChannel.DEFENSE_POSTURE,
                signal=POSTURE_SIGNAL,
                magnitude=opponent.posture,
            )
        )
    if truth.truth(observer).insider_in_opponent:
        emissions.append(
            Emission(
                source_side=opponent.side,
                channel=ObservationChannel.INTEL_GATHERING_ACTIVITY,
                signal="insider-report",
                magnitude=Intensity.HIGH,
                always_observed=True,
                observer=observer,
            )
        )
    return emissions


def generate_observations(
    truth: WorldTruth,
    observer: Side,
    cfg: DetectionConfig,
    rng: random.Random,
    tick: int,
    transients: list[Emission] | None = None,
) -> list[Observation]:
    """Run the detection draw for one observer over one tick.

    Candidates are processed in a deterministic order (continuous emissions
    sorted by asset id, then transients in production order) so a seeded rng
    yields reproducible results.
    """
    candidates = continuous_emissions(truth, observer)
    for emission in transients or []:
        if emission.observer is not None:
            if emission.observer is observer:
                candidates.append(emission)
        elif emission.source_side is observer.opponent:
            candidates.append(emission)
    monitor = truth.truth(observer).monitor_level
    observations: list[Observation] = []
    for emission in candidates:
        if emission.always_observed:
            seen = True
        else:
            p = detection_probability(cfg, emission.channel, emission.magnitude, monitor)
            seen = rng.random() < p
        if not seen:
            continue
        observations.append(
            Observation(
                observer=observer,
                channel=emission.channel,
                signal=emission.signal,
                magnitude=emission.magnitude,
                tick=tick,
                subject_asset=emission.subject_asset,
                detail=emission.detail,
                genuine=emission.genuine,
            )
        )
    return observations


_CHANNEL_FUNCTION = {
    ObservationChannel.INTEL_GATHERING_ACTIVITY: AssetFunction.INTEL_GATHERING,
}


def update_beliefs(
    beliefs: BeliefState, observations: list[Observation], cfg: InferenceConfig, tick: int
) -> BeliefState:
    """Fold a batch of observations into the holder's picture of the opponent.

    Channel activity is the max magnitude seen inside the sliding window;
    a stratagem is inferred once at least `cfg.min_matches` windowed
    observations carry one of its signature signals, with confidence
    min(1, matches / (2 * min_matches)).
    """
    for obs in observations:
        if obs.observer is not beliefs.holder:
            raise ValueError("observation delivered to the wrong side")
    cutoff = tick - cfg.window_ticks
    window = [o for o in beliefs.window if o.tick > cutoff]
    window.extend(observations)
    beliefs.window = window

    activity: dict[ObservationChannel, Intensity] = {}
    for obs in window:
        cur = activity.get(obs.channel)
        if cur is None or obs.magnitude > cur:
            activity[obs.channel] = obs.magnitude
    beliefs.believed_opponent_activity = activity

    matches: dict[StratagemId, int] = {}
    for obs in window:
        for sid in cfg.signatures.get(obs.signal, ()):
            matches[sid] = matches.get(sid, 0) + 1
    inferred: dict[StratagemId, float] = {}
    for sid, count in matches.items():
        if count >= cfg.min_matches:
            inferred[sid] = min(1.0, count / (2.0 * cfg.min_matches))
    beliefs.inferred_stratagems = inferred

    believed: dict[str, BelievedAsset] = {}
    counts: dict[str, int] = {}
    for obs in window:
        if obs.subject_asset is None:
            continue
        counts[obs.subject_asset] = counts.get(obs.subject_asset, 0) + 1
        function = _function_hint(obs)
        entry = believed.get(obs.subject_asset)
        if entry is None:
            believed[obs.subject_asset] = BelievedAsset(
                asset_id=obs.subject_asset, believed_function=function
            )
        if obs.channel is ObservationChannel.DEFENSE_POSTURE:
            entry = believed[obs.subject_asset]
            if obs.magnitude > entry.believed_posture:
                entry.believed_posture = obs.magnitude
    for asset_id, entry in believed.items():
        n = counts[asset_id]
        entry.confidence = min(1.0, n / (n + 2.0))
    beliefs.believed_assets = believed
    return beliefs


def _function_hint(obs: Observation) -> AssetFunction:
    if obs.detail:
        try:
            return AssetFunction(obs.detail)
        except ValueError:
            pass
    return _CHANNEL_FUNCTION.get(obs.channel, AssetFunction.MISSION_SUPPORT)
