"""Accessors for the shipped default playbook and scenarios."""

from __future__ import annotations

import json
from importlib import resources


def default_playbook_text() -> str:
    return (resources.files(__name__) / "default.playbook").read_text(encoding="utf-8")


def default_scenario_dict() -> dict:
    raw = (resources.files(__name__) / "scenario_default.json").read_text(encoding="utf-8")
    return json.loads(raw)


def single_pause_scenario_dict() -> dict:
    raw = (resources.files(__name__) / "scenario_single_pause.json").read_text(
        encoding="utf-8"
    )
    return json.loads(raw)
