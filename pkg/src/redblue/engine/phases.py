"""Strategic activity-sequence machine.

Completing one activity spawns its successors; the flow is tree-like rather
than linear, and execution loops back to standing intelligence so the cycle
repeats.
"""

from __future__ import annotations

import enum


class ActivityPhase(enum.Enum):
    STANDING_INTEL = "StandingIntel"
    FOCUSED_INTEL = "FocusedIntel"
    GENERIC_POSTURE_TIGHTENING = "GenericPostureTightening"
    FOCUSED_POSTURE_TIGHTENING = "FocusedPostureTightening"
    ASSET_REPOSITIONING = "AssetRepositioning"
    COUNTER_ATTACK_PLANNING = "CounterAttackPlanning"
    WEAPONRY_COUNTERMEASURES = "WeaponryCountermeasures"
    COUNTER_ATTACK_EXECUTION = "CounterAttackExecution"


_SPAWN_TABLE: dict[ActivityPhase, frozenset[ActivityPhase]] = {
    ActivityPhase.STANDING_INTEL: frozenset(
        {ActivityPhase.FOCUSED_INTEL, ActivityPhase.GENERIC_POSTURE_TIGHTENING}
    ),
    ActivityPhase.FOCUSED_INTEL: frozenset(
        {
            ActivityPhase.FOCUSED_POSTURE_TIGHTENING,
            ActivityPhase.ASSET_REPOSITIONING,
            ActivityPhase.COUNTER_ATTACK_PLANNING,
            ActivityPhase.WEAPONRY_COUNTERMEASURES,
        }
    ),
    ActivityPhase.COUNTER_ATTACK_PLANNING: frozenset(
        {ActivityPhase.COUNTER_ATTACK_EXECUTION}
    ),
    ActivityPhase.COUNTER_ATTACK_EXECUTION: frozenset({ActivityPhase.STANDING_INTEL}),
}


def spawn_phases(completed: ActivityPhase) -> frozenset[ActivityPhase]:
    """Successor activities spawned when `completed` finishes."""
    return _SPAWN_TABLE.get(completed, frozenset())
