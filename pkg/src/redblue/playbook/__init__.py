"""Playbook knowledge base: stratagem taxonomy, building blocks, and plays."""

from redblue.playbook.model import (
    AuthorizationLevel,
    Diagnostic,
    EffectKind,
    EffectSpec,
    Intensity,
    ParamKind,
    Play,
    PlayParam,
    Playbook,
    Scope,
    Severity,
    SideHint,
    StratagemBlock,
    StratagemId,
    sort_diagnostics,
)
from redblue.playbook.parser import ParseResult, load_playbook, parse_playbook
from redblue.playbook.queries import (
    UnknownStratagemError,
    block_map,
    play_map,
    query_plays,
    resolve_stratagem,
    validate,
)
from redblue.playbook.serializer import serialize

__all__ = [
    "AuthorizationLevel",
    "Diagnostic",
    "EffectKind",
    "EffectSpec",
    "Intensity",
    "ParamKind",
    "ParseResult",
    "Play",
    "PlayParam",
    "Playbook",
    "Scope",
    "Severity",
    "SideHint",
    "StratagemBlock",
    "StratagemId",
    "UnknownStratagemError",
    "block_map",
    "load_playbook",
    "parse_playbook",
    "play_map",
    "query_plays",
    "resolve_stratagem",
    "serialize",
    "sort_diagnostics",
    "validate",
]
