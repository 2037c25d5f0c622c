"""Scenario file loading: JSON with a versioned schema, documented in
docs/scenario-format.md. A scenario fully determines the initial world truth
plus every engine configuration table (detection, signatures, hour scale,
long-lead windows, play-to-phase mapping)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from redblue.campaign.model import (
    AssetFunction,
    CyberAsset,
    Mission,
    MissionTask,
    ObservationChannel,
    Side,
    SideTruth,
    WorldTruth,
)
from redblue.campaign.observation import DetectionConfig, InferenceConfig
from redblue.playbook.model import AuthorizationLevel, Intensity, StratagemId

SCHEMA_VERSION = 1

_INTENSITY_NAMES = ["Low", "Medium", "High"]

SCENARIO_SCHEMA = {
    "type": "object",
    "required": ["schema", "name", "sides"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "sides": {
            "type": "object",
            "required": ["Red", "Blue"],
            "additionalProperties": False,
            "patternProperties": {
                "^(Red|Blue)$": {
                    "type": "object",
                    "properties": {
                        "posture": {"enum": _INTENSITY_NAMES},
                        "monitor_level": {"enum": _INTENSITY_NAMES},
                        "auth_level": {"enum": ["Operator", "Commander", "National"]},
                        "assets": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["id", "function"],
                                "properties": {
                                    "id": {"type": "string", "minLength": 1},
                                    "function": {
                                        "enum": [f.value for f in AssetFunction]
                                    },
                                    "advertised_function": {
                                        "enum": [f.value for f in AssetFunction]
                                    },
                                    "posture": {"enum": _INTENSITY_NAMES},
                                    "monitor_level": {"enum": _INTENSITY_NAMES},
                                    "genuine": {"type": "boolean"},
                                },
                            },
                        },
                        "mission": {
                            "type": "object",
                            "properties": {
                                "description": {"type": "string"},
                                "delay_target_hours": {"type": "integer", "minimum": 0},
                                "tasks": {
                                    "type": "array",
                                    "items": {
                                        "type": "object",
                                        "required": [
                                            "id",
                                            "planned_start_hours",
                                            "planned_duration_hours",
                                        ],
                                        "properties": {
                                            "id": {"type": "string"},
                                            "planned_start_hours": {
                                                "type": "integer",
                                                "minimum": 0,
                                            },
                                            "planned_duration_hours": {
                                                "type": "integer",
                                                "minimum": 0,
                                            },
                                            "required_asset_ids": {
                                                "type": "array",
                                                "items": {"type": "string"},
                                            },
                                        },
                                    },
                                },
                            },
                        },
                    },
                }
            },
        },
        "detection": {
            "type": "object",
            "properties": {
                "base_probability": {
                    "type": "object",
                    "additionalProperties": {"type": "number", "minimum": 0, "maximum": 1},
                }
            },
        },
        "signatures": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": {"type": "string"}},
        },
        "inference": {
            "type": "object",
            "properties": {
                "min_matches": {"type": "integer", "minimum": 1},
                "window_ticks": {"type": "integer", "minimum": 1},
            },
        },
        "intensity_hours": {
            "type": "object",
            "additionalProperties": {"type": "integer", "minimum": 1},
        },
        "long_lead": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["min_ticks", "max_ticks", "success_probability"],
                "properties": {
                    "min_ticks": {"type": "integer", "minimum": 1},
                    "max_ticks": {"type": "integer", "minimum": 1},
                    "success_probability": {"type": "number", "minimum": 0, "maximum": 1},
                },
            },
        },
        "phase_plays": {
            "type": "object",
            "additionalProperties": {"type": "string"},
        },
        "opponent_policy": {"type": "string"},
    },
}


class ScenarioError(ValueError):
    """Scenario file failed schema or cross-reference checks."""


@dataclass
class LongLeadSpec:
    min_ticks: int
    max_ticks: int
    success_probability: float


@dataclass
class Scenario:
    name: str
    detection: DetectionConfig
    inference: InferenceConfig
    intensity_hours: dict[Intensity, int]
    long_lead: dict[str, LongLeadSpec]
    phase_plays: dict[str, str]
    auth_levels: dict[Side, AuthorizationLevel]
    opponent_policy: str = "scripted-red"
    raw: dict = field(default_factory=dict)

    def build_truth(self) -> WorldTruth:
        """Fresh mutable world truth from the immutable scenario data."""
        sides: dict[Side, SideTruth] = {}
        for side in Side:
            spec = self.raw["sides"][side.value]
            truth = SideTruth(
                side=side,
                posture=Intensity.from_label(spec.get("posture", "Low")),
                monitor_level=Intensity.from_label(spec.get("monitor_level", "Low")),
            )
            for entry in spec.get("assets", []):
                function = AssetFunction(entry["function"])
                advertised = AssetFunction(entry.get("advertised_function", entry["function"]))
                if function is AssetFunction.DECOY:
                    advertised = AssetFunction.INTEL_GATHERING
                asset = CyberAsset(
                    id=entry["id"],
                    owner=side,
                    function=function,
                    advertised_function=advertised,
                    posture=Intensity.from_label(entry.get("posture", "Low")),
                    monitor_level=Intensity.from_label(entry.get("monitor_level", "Low")),
                    genuine=entry.get("genuine", function is not AssetFunction.DECOY),
                )
                truth.assets[asset.id] = asset
            mission_spec = spec.get("mission")
            if mission_spec is not None:
                tasks = [
                    MissionTask(
                        task_id=t["id"],
                        planned_start_hours=t["planned_start_hours"],
                        planned_duration_hours=t["planned_duration_hours"],
                        required_asset_ids=tuple(t.get("required_asset_ids", [])),
                    )
                    for t in mission_spec.get("tasks", [])
                ]
                truth.mission = Mission(
                    owner=side,
                    description=mission_spec.get("description", ""),
                    tasks=tasks,
                    delay_target_hours=mission_spec.get("delay_target_hours"),
                )
            sides[side] = truth
        return WorldTruth(sides=sides)

    @property
    def delay_target_hours(self) -> int:
        red = self.raw["sides"]["Red"].get("mission", {})
        return red.get("delay_target_hours", 336)


def load_scenario(data: dict) -> Scenario:
    """Validate a parsed scenario document and build the config bundle."""
    try:
        jsonschema.validate(data, SCENARIO_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise ScenarioError(f"scenario schema violation at {path or '<root>'}: {exc.message}")

    detection = DetectionConfig()
    for key, value in data.get("detection", {}).get("base_probability", {}).items():
        try:
            channel = ObservationChannel(key)
        except ValueError:
            raise ScenarioError(f"unknown observation channel {key!r}")
        detection.base_probability[channel] = value

    inference_spec = data.get("inference", {})
    signatures: dict[str, tuple[StratagemId, ...]] = {}
    for signal, sids in data.get("signatures", {}).items():
        try:
            signatures[signal] = tuple(StratagemId.parse(s) for s in sids)
        except ValueError as exc:
            raise ScenarioError(f"bad stratagem id in signatures[{signal!r}]: {exc}")
    inference = InferenceConfig(
        signatures=signatures,
        min_matches=inference_spec.get("min_matches", 2),
        window_ticks=inference_spec.get("window_ticks", 48),
    )

    intensity_hours = dict(
        {Intensity.LOW: 24, Intensity.MEDIUM: 72, Intensity.HIGH: 120}
    )
    for key, value in data.get("intensity_hours", {}).items():
        try:
            intensity_hours[Intensity.from_label(key)] = value
        except ValueError:
            raise ScenarioError(f"unknown intensity {key!r} in intensity_hours")

    long_lead = {
        name: LongLeadSpec(
            min_ticks=spec["min_ticks"],
            max_ticks=spec["max_ticks"],
            success_probability=spec["success_probability"],
        )
        for name, spec in data.get("long_lead", {}).items()
    }
    for name, spec in long_lead.items():
        if spec.max_ticks < spec.min_ticks:
            raise ScenarioError(f"long_lead[{name!r}] has max_ticks < min_ticks")

    auth_levels = {}
    for side in Side:
        label = data["sides"][side.value].get("auth_level", "National")
        auth_levels[side] = AuthorizationLevel.from_label(label)

    # Cross-check: mission tasks may only require assets owned by the side.
    for side in Side:
        spec = data["sides"][side.value]
        owned = {a["id"] for a in spec.get("assets", [])}
        for task in spec.get("mission", {}).get("tasks", []):
            for asset_id in task.get("required_asset_ids", []):
                if asset_id not in owned:
                    raise ScenarioError(
                        f"task {task['id']!r} requires unknown asset {asset_id!r}"
                    )

    return Scenario(
        name=data["name"],
        detection=detection,
        inference=inference,
        intensity_hours=intensity_hours,
        long_lead=long_lead,
        phase_plays=dict(data.get("phase_plays", {})),
        auth_levels=auth_levels,
        opponent_policy=data.get("opponent_policy", "scripted-red"),
        raw=data,
    )


def load_scenario_file(path: str | Path) -> Scenario:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"scenario is not valid JSON: {exc}")
    return load_scenario(data)
