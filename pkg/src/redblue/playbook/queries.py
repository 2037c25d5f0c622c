"""Semantic validation and lookup operations over parsed playbooks."""

from __future__ import annotations

from redblue.playbook.model import (
    AuthorizationLevel,
    Diagnostic,
    Play,
    Playbook,
    Severity,
    StratagemBlock,
    StratagemId,
    WORLD_CHANGING_KINDS,
    sort_diagnostics,
)


class UnknownStratagemError(KeyError):
    pass


def block_map(pb: Playbook) -> dict[str, StratagemBlock]:
    return {str(b.id): b for b in pb.blocks}


def play_map(pb: Playbook) -> dict[str, Play]:
    return {p.id: p for p in pb.plays}


def _has_control_chars(text: str) -> bool:
    return any(ord(c) < 0x20 for c in text)


def _block_texts(block: StratagemBlock) -> list[str]:
    return [
        block.description,
        *block.tactical_implementations,
        block.infrastructure_properties,
        block.technological_requirements,
        *block.goals_satisfied,
        block.adversary_properties,
        block.effects_on_adversary,
        block.limitations_assumptions,
        block.implications,
        block.example_red_use,
        block.example_blue_countermeasure,
    ]


def validate(pb: Playbook) -> list[Diagnostic]:
    """Check every semantic invariant; empty result means the playbook is valid.

    One diagnostic per violation, ordered by (line, code). Parse-level
    problems (syntax, duplicates) are reported by the parser, not here.
    """
    diags: list[Diagnostic] = []
    known = {str(b.id) for b in pb.blocks}

    def err(code: str, line: int, col: int, msg: str) -> None:
        diags.append(Diagnostic(code, Severity.ERROR, line, col, msg))

    for block in pb.blocks:
        parent = block.id.parent
        if parent is not None and str(parent) not in known:
            err(
                "E-TAX-001",
                block.line,
                block.column,
                f"unresolved parent stratagem {parent} for {block.id}",
            )
        if not block.description:
            err("E-BLK-001", block.line, block.column, f"stratagem {block.id} has empty description")
        for text in _block_texts(block):
            if _has_control_chars(text):
                err(
                    "E-TXT-001",
                    block.line,
                    block.column,
                    f"control character in text field of {block.id}",
                )
                break

    for play in pb.plays:
        if play.required_authorization is None:
            err("E-PLY-003", play.line, play.column, f"play {play.id!r} missing auth field")
        if not play.stratagems:
            err("E-PLY-004", play.line, play.column, f"play {play.id!r} references no stratagems")
        for sid in play.stratagems:
            if str(sid) not in known:
                err(
                    "E-PLY-001",
                    play.line,
                    play.column,
                    f"play {play.id!r} references unknown stratagem {sid}",
                )
        for sid in play.counters:
            if str(sid) not in known:
                err(
                    "E-PLY-002",
                    play.line,
                    play.column,
                    f"play {play.id!r} counters unknown stratagem {sid}",
                )
        if play.base_duration_hours < 1 and any(
            e.kind in WORLD_CHANGING_KINDS for e in play.effects
        ):
            err(
                "E-PLY-005",
                play.line,
                play.column,
                f"play {play.id!r} changes posture or assets but has zero duration",
            )
        for text in (play.name, *play.situation_tags):
            if _has_control_chars(text):
                err("E-TXT-001", play.line, play.column, f"control character in play {play.id!r}")
                break
        if not play.situation_tags:
            diags.append(
                Diagnostic(
                    "W-PLY-001",
                    Severity.WARNING,
                    play.line,
                    play.column,
                    f"play {play.id!r} has no situation tags and will never match a query",
                )
            )

    return sort_diagnostics(diags)


def query_plays(
    pb: Playbook, tags: list[str], max_auth: AuthorizationLevel
) -> list[Play]:
    """Plays whose situation tags intersect `tags` and whose required
    authorization is within `max_auth`, best tag coverage first."""
    wanted = set(tags)
    scored: list[tuple[int, str, Play]] = []
    for play in pb.plays:
        matches = len(wanted.intersection(play.situation_tags))
        if matches == 0:
            continue
        if play.required_authorization is None or play.required_authorization > max_auth:
            continue
        scored.append((matches, play.id, play))
    scored.sort(key=lambda item: (-item[0], item[1]))
    return [play for _, _, play in scored]


def resolve_stratagem(pb: Playbook, sid: StratagemId) -> StratagemBlock:
    for block in pb.blocks:
        if block.id == sid:
            return block
    raise UnknownStratagemError(str(sid))
