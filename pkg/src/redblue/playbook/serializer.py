"""Canonical text rendering for playbooks.

The output is a fixpoint: parsing canonical text and serializing the result
reproduces the text byte-for-byte. Block fields are written in the canonical
card order; empty optional fields are omitted.
"""

from __future__ import annotations

from redblue.playbook.model import Play, Playbook, SideHint, StratagemBlock


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _string_list(items: tuple[str, ...]) -> str:
    return "[" + ", ".join(_quote(i) for i in items) + "]"


def _render_block(block: StratagemBlock) -> list[str]:
    lines = [f"stratagem {block.id} {{"]
    lines.append(f"  description: {_quote(block.description)}")
    if block.tactical_implementations:
        lines.append(f"  tactical: {_string_list(block.tactical_implementations)}")
    if block.infrastructure_properties:
        lines.append(f"  infrastructure: {_quote(block.infrastructure_properties)}")
    if block.technological_requirements:
        lines.append(f"  requires: {_quote(block.technological_requirements)}")
    if block.goals_satisfied:
        lines.append(f"  goals: {_string_list(block.goals_satisfied)}")
    if block.adversary_properties:
        lines.append(f"  adversary: {_quote(block.adversary_properties)}")
    if block.effects_on_adversary:
        lines.append(f"  effects_on_adversary: {_quote(block.effects_on_adversary)}")
    if block.limitations_assumptions:
        lines.append(f"  limits: {_quote(block.limitations_assumptions)}")
    if block.implications:
        lines.append(f"  implications: {_quote(block.implications)}")
    if block.example_red_use:
        lines.append(f"  red_use: {_quote(block.example_red_use)}")
    if block.example_blue_countermeasure:
        lines.append(f"  blue_counter: {_quote(block.example_blue_countermeasure)}")
    lines.append("}")
    return lines


def _render_play(play: Play) -> list[str]:
    lines = [f"play {_quote(play.id)} {{"]
    lines.append(f"  name: {_quote(play.name)}")
    if play.side_hint is not SideHint.EITHER:
        lines.append(f"  side: {_quote(play.side_hint.value)}")
    if play.stratagems:
        lines.append(f"  stratagems: {_string_list(tuple(str(s) for s in play.stratagems))}")
    if play.parameters:
        specs = tuple(f"{p.name}:{p.kind.value}" for p in play.parameters)
        lines.append(f"  params: {_string_list(specs)}")
    if play.situation_tags:
        lines.append(f"  tags: {_string_list(play.situation_tags)}")
    if play.required_authorization is not None:
        lines.append(f"  auth: {_quote(play.required_authorization.label)}")
    lines.append(f"  duration: {play.base_duration_hours}")
    if play.duration_jitter_hours:
        lines.append(f"  jitter: {play.duration_jitter_hours}")
    if play.effects:
        rendered = ", ".join(
            f"{e.kind.value}({e.magnitude.label}, {_quote(e.target_selector)})"
            for e in play.effects
        )
        lines.append(f"  effects: [{rendered}]")
    if play.counters:
        lines.append(f"  counters: {_string_list(tuple(str(s) for s in play.counters))}")
    lines.append("}")
    return lines


def serialize(pb: Playbook) -> str:
    """Render canonical playbook text; see module docstring for guarantees."""
    chunks = [f"playbook {_quote(pb.name)} version {_quote(pb.version)}"]
    for block in pb.blocks:
        chunks.append("\n".join(_render_block(block)))
    for play in pb.plays:
        chunks.append("\n".join(_render_play(play)))
    return "\n\n".join(chunks) + "\n"
