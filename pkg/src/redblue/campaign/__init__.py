"""World model: missions, assets, postures, beliefs, and the observation
channel that separates ground truth from what each side believes."""

from redblue.campaign.model import (
    AssetFunction,
    BelievedAsset,
    BeliefState,
    CyberAsset,
    Emission,
    Mission,
    MissionTask,
    Observation,
    ObservationChannel,
    Side,
    SideTruth,
    WorldTruth,
)
from redblue.campaign.observation import (
    DetectionConfig,
    InferenceConfig,
    detection_probability,
    generate_observations,
    update_beliefs,
)
from redblue.campaign.effects import (
    EffectOutcome,
    EffectTargetError,
    apply_effect,
    mission_delay,
    planned_completion,
)

__all__ = [
    "AssetFunction",
    "BelievedAsset",
    "BeliefState",
    "CyberAsset",
    "DetectionConfig",
    "EffectOutcome",
    "EffectTargetError",
    "Emission",
    "InferenceConfig",
    "Mission",
    "MissionTask",
    "Observation",
    "ObservationChannel",
    "Side",
    "SideTruth",
    "WorldTruth",
    "apply_effect",
    "detection_probability",
    "generate_observations",
    "mission_delay",
    "planned_completion",
    "update_beliefs",
]
