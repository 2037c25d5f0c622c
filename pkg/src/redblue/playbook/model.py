"""Data model for the playbook knowledge base.

A playbook is a validated collection of stratagem building blocks (a
dotted-name taxonomy with twelve descriptive fields each) plus executable,
authorization-tagged plays that reference those blocks.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field


class Severity(enum.Enum):
    ERROR = "Error"
    WARNING = "Warning"


@dataclass(frozen=True)
class Diagnostic:
    """A validation or parse finding anchored to a source location."""

    code: str
    severity: Severity
    line: int
    column: int
    message: str

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def render(self) -> str:
        return f"{self.line}:{self.column} {self.code} {self.message}"


def sort_diagnostics(diags: list[Diagnostic]) -> list[Diagnostic]:
    # Primary contract order is (line, code); the rest are tiebreaks that
    # keep the output byte-stable for identical input.
    return sorted(diags, key=lambda d: (d.line, d.code, d.column, d.message))


class Intensity(enum.IntEnum):
    """Three-step intensity scale; total order LOW < MEDIUM < HIGH."""

    LOW = 1
    MEDIUM = 2
    HIGH = 3

    @property
    def label(self) -> str:
        return _INTENSITY_LABELS[self]

    @classmethod
    def from_label(cls, text: str) -> "Intensity":
        for member, label in _INTENSITY_LABELS.items():
            if label == text:
                return member
        raise ValueError(f"unknown intensity {text!r}")


_INTENSITY_LABELS = {
    Intensity.LOW: "Low",
    Intensity.MEDIUM: "Medium",
    Intensity.HIGH: "High",
}


class AuthorizationLevel(enum.IntEnum):
    """Approval rank required to execute a play; lower responds faster."""

    OPERATOR = 1
    COMMANDER = 2
    NATIONAL = 3

    @property
    def label(self) -> str:
        return _AUTH_LABELS[self]

    @classmethod
    def from_label(cls, text: str) -> "AuthorizationLevel":
        for member, label in _AUTH_LABELS.items():
            if label == text:
                return member
        raise ValueError(f"unknown authorization level {text!r}")


_AUTH_LABELS = {
    AuthorizationLevel.OPERATOR: "Operator",
    AuthorizationLevel.COMMANDER: "Commander",
    AuthorizationLevel.NATIONAL: "National",
}


_SEGMENT_RE = re.compile(r"^[A-Za-z][A-Za-z0-9]*$")


@dataclass(frozen=True)
class StratagemId:
    """Dot-separated taxonomy name, e.g. Deceive.Chaff."""

    segments: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("stratagem id needs at least one segment")
        for seg in self.segments:
            if not _SEGMENT_RE.match(seg):
                raise ValueError(f"bad stratagem id segment {seg!r}")

    @classmethod
    def parse(cls, text: str) -> "StratagemId":
        return cls(tuple(text.split(".")))

    @property
    def depth(self) -> int:
        return len(self.segments)

    @property
    def parent(self) -> "StratagemId | None":
        if len(self.segments) == 1:
            return None
        return StratagemId(self.segments[:-1])

    def __str__(self) -> str:
        return ".".join(self.segments)


def is_valid_stratagem_text(text: str) -> bool:
    parts = text.split(".")
    return bool(parts) and all(_SEGMENT_RE.match(p) for p in parts)


class SideHint(enum.Enum):
    RED = "Red"
    BLUE = "Blue"
    EITHER = "Either"


class EffectKind(enum.Enum):
    RAISE_POSTURE = "RaisePosture"
    LOWER_POSTURE = "LowerPosture"
    DEPLOY_DECOY = "DeployDecoy"
    DEPLOY_HONEYPOT = "DeployHoneypot"
    RAISE_MONITOR = "RaiseMonitor"
    INFILTRATE = "Infiltrate"
    DEGRADE_MISSION_TASK = "DegradeMissionTask"
    REPOSITION_ASSET = "RepositionAsset"
    PLACE_INSIDER = "PlaceInsider"


#: Effect kinds that are long-lead: outcomes arrive after an uncertain delay.
LONG_LEAD_KINDS = frozenset({EffectKind.INFILTRATE, EffectKind.PLACE_INSIDER})

#: Effect kinds that change posture or create/alter assets; plays carrying
#: them must take at least one hour.
WORLD_CHANGING_KINDS = frozenset(
    {
        EffectKind.RAISE_POSTURE,
        EffectKind.LOWER_POSTURE,
        EffectKind.DEPLOY_DECOY,
        EffectKind.DEPLOY_HONEYPOT,
        EffectKind.REPOSITION_ASSET,
    }
)


class ParamKind(enum.Enum):
    ASSET_REF = "asset-ref"
    INTENSITY = "intensity"
    SCOPE = "scope"
    DURATION_HOURS = "duration-hours"


class Scope(enum.Enum):
    LOCAL = "local"
    THEATRE = "theatre"
    WORLDWIDE = "worldwide"


@dataclass(frozen=True)
class EffectSpec:
    kind: EffectKind
    magnitude: Intensity
    target_selector: str


@dataclass(frozen=True)
class PlayParam:
    name: str
    kind: ParamKind


@dataclass(frozen=True)
class StratagemBlock:
    """One taxonomy entry with its twelve descriptive fields.

    Only `id` and `description` must be nonempty; the other fields may be
    blank but are always present so play cards and the field-manual render
    have a stable shape.
    """

    id: StratagemId
    description: str = ""
    tactical_implementations: tuple[str, ...] = ()
    infrastructure_properties: str = ""
    technological_requirements: str = ""
    goals_satisfied: tuple[str, ...] = ()
    adversary_properties: str = ""
    effects_on_adversary: str = ""
    limitations_assumptions: str = ""
    implications: str = ""
    example_red_use: str = ""
    example_blue_countermeasure: str = ""
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Play:
    """Executable instantiation template referencing one or more stratagems."""

    id: str
    name: str = ""
    side_hint: SideHint = SideHint.EITHER
    stratagems: tuple[StratagemId, ...] = ()
    parameters: tuple[PlayParam, ...] = ()
    situation_tags: tuple[str, ...] = ()
    # None only for structurally-parsed-but-invalid plays; validate() flags it.
    required_authorization: AuthorizationLevel | None = None
    base_duration_hours: int = 1
    duration_jitter_hours: int = 0
    effects: tuple[EffectSpec, ...] = ()
    counters: tuple[StratagemId, ...] = ()
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def has_long_lead_effect(self) -> bool:
        return any(e.kind in LONG_LEAD_KINDS for e in self.effects)


@dataclass(frozen=True)
class Playbook:
    name: str = ""
    version: str = ""
    blocks: tuple[StratagemBlock, ...] = ()
    plays: tuple[Play, ...] = ()
