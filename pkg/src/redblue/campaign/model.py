"""Ground truth and belief-state types for the campaign world.

Each side owns a `SideTruth` (assets, posture, mission) and a `BeliefState`
about the opponent. Beliefs are fed exclusively by `Observation` records so
deception (decoys, honeypots) works by construction: an observer never reads
opponent truth directly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from redblue.playbook.model import Intensity, StratagemId


class Side(enum.Enum):
    RED = "Red"
    BLUE = "Blue"

    @property
    def opponent(self) -> "Side":
        return Side.BLUE if self is Side.RED else Side.RED


class AssetFunction(enum.Enum):
    INTEL_GATHERING = "IntelGathering"
    MISSION_SUPPORT = "MissionSupport"
    DECOY = "Decoy"
    HONEYPOT = "Honeypot"
    COMMAND_CONTROL = "CommandControl"


class ObservationChannel(enum.Enum):
    INTEL_GATHERING_ACTIVITY = "IntelGatheringActivity"
    EFFECT_ON_RESOURCES = "EffectOnResources"
    DEFENSE_POSTURE = "DefensePosture"
    ASSET_STATUS = "AssetStatus"


@dataclass
class CyberAsset:
    id: str
    owner: Side
    function: AssetFunction
    # What the asset looks like from outside. Decoys advertise IntelGathering,
    # honeypots advertise whatever role they bait with; genuine assets
    # advertise their real function.
    advertised_function: AssetFunction
    posture: Intensity = Intensity.LOW
    monitor_level: Intensity = Intensity.LOW
    genuine: bool = True
    compromised: bool = False

    def __post_init__(self) -> None:
        if self.function is AssetFunction.DECOY and self.genuine:
            raise ValueError("decoy assets are never genuine")


@dataclass
class MissionTask:
    task_id: str
    planned_start_hours: int
    planned_duration_hours: int
    required_asset_ids: tuple[str, ...] = ()
    pause_hours: int = 0


@dataclass
class Mission:
    owner: Side
    description: str = ""
    tasks: list[MissionTask] = field(default_factory=list)
    delay_target_hours: int | None = None


@dataclass
class SideTruth:
    side: Side
    posture: Intensity = Intensity.LOW
    monitor_level: Intensity = Intensity.LOW
    assets: dict[str, CyberAsset] = field(default_factory=dict)
    mission: Mission | None = None
    # Stratagems this side has actually employed (from completed actions).
    used_stratagems: set[StratagemId] = field(default_factory=set)
    # Nominal pause hours this side's completed attacks inflicted; the
    # attacker-side ledger that feeds its planning picture.
    inflicted_pause_hours: int = 0
    # Set once a PlaceInsider action against the opponent succeeds.
    insider_in_opponent: bool = False


@dataclass
class WorldTruth:
    sides: dict[Side, SideTruth]

    def truth(self, side: Side) -> SideTruth:
        return self.sides[side]


@dataclass(frozen=True)
class Emission:
    """A single observable activity candidate for one tick.

    `always_observed` bypasses the detection draw (honeypot interactions,
    insider reports). `genuine` records whether the source was a real asset;
    it exists for test oracles only and never reaches an observer's beliefs
    or any externally served payload.
    """

    source_side: Side
    channel: ObservationChannel
    signal: str
    magnitude: Intensity
    subject_asset: str | None = None
    detail: str = ""
    genuine: bool = True
    always_observed: bool = False
    observer: Side | None = None  # None: the source side's opponent


@dataclass(frozen=True)
class Observation:
    observer: Side
    channel: ObservationChannel
    signal: str
    magnitude: Intensity
    tick: int
    subject_asset: str | None = None
    detail: str = ""
    # Hidden from the observer; retained so test oracles can assert decoy
    # indistinguishability. Never serialized to events or service payloads.
    genuine: bool = True


@dataclass
class BelievedAsset:
    asset_id: str
    believed_function: AssetFunction
    believed_posture: Intensity = Intensity.LOW
    confidence: float = 0.0


@dataclass
class BeliefState:
    holder: Side
    believed_assets: dict[str, BelievedAsset] = field(default_factory=dict)
    believed_opponent_activity: dict[ObservationChannel, Intensity] = field(
        default_factory=dict
    )
    inferred_stratagems: dict[StratagemId, float] = field(default_factory=dict)
    # Sliding window of observations that back the aggregates above.
    window: list[Observation] = field(default_factory=list)
