#!/usr/bin/env python3
"""Replay the shipped scenario with the scripted policies and print the
campaign timeline: schedules, completions, posture changes, mission slips.

Usage: python3 scripts/replay_campaign.py [--seed 42] [--horizon 2160]
"""

import argparse

from redblue import data
from redblue.campaign.model import Side
from redblue.campaign.scenario import load_scenario
from redblue.engine import EventKind, get_policy, run_campaign
from redblue.playbook import load_playbook

INTERESTING = {
    EventKind.ACTION_SCHEDULED,
    EventKind.ACTION_COMPLETED,
    EventKind.POSTURE_CHANGED,
    EventKind.PHASE_SPAWNED,
    EventKind.MISSION_SLIPPED,
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--horizon", type=int, default=2160)
    args = parser.parse_args()

    playbook = load_playbook(data.default_playbook_text()).playbook
    scenario = load_scenario(data.default_scenario_dict())
    policies = {
        Side.RED: get_policy("scripted-red"),
        Side.BLUE: get_policy("scripted-blue"),
    }
    engine = run_campaign(scenario, playbook, policies, args.horizon, args.seed)

    for event in engine.state.event_log:
        if event.kind not in INTERESTING:
            continue
        payload = event.payload
        subject = payload.get("play") or payload.get("phase") or payload.get("task") or ""
        extra = (
            payload.get("outcome")
            or payload.get("authorization")
            or (f"{payload['from']}->{payload['to']}" if "from" in payload else "")
        )
        print(f"t{event.tick:5d}  {event.side.value:4s}  {event.kind.value:20s} {subject} {extra}")

    summary = engine.mission_summary()
    goal = "MET" if summary["red_goal_met"] else "not met"
    print(
        f"\nfinal delay: {summary['delay_hours']}h of "
        f"{summary['delay_target_hours']}h target — red goal {goal}"
    )


if __name__ == "__main__":
    main()
