"""Command-line interface: playbook validation, batch campaign runs,
planning queries, and the session service."""

from __future__ import annotations

import argparse
import json
import os
import sys

from redblue import data
from redblue.campaign.model import Side
from redblue.campaign.scenario import Scenario, ScenarioError, load_scenario
from redblue.engine import get_policy, run_campaign
from redblue.engine.events import log_to_jsonl
from redblue.planner import ALWAYS_TAG, PlannerRefusedError, recommend
from redblue.playbook import AuthorizationLevel, Playbook, load_playbook

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_UNREADABLE = 2


def _read_playbook(path: str | None) -> tuple[Playbook | None, list, int]:
    """Returns (playbook, diagnostics, exit_code)."""
    if path is None or path == "default":
        text = data.default_playbook_text()
    else:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            print(f"cannot read {path}: {exc}", file=sys.stderr)
            return None, [], EXIT_UNREADABLE
    result = load_playbook(text)
    code = EXIT_OK if result.ok else EXIT_INVALID
    return result.playbook, result.diagnostics, code


def _read_scenario(path: str | None) -> Scenario:
    if path is None or path == "default":
        return load_scenario(data.default_scenario_dict())
    with open(path, "r", encoding="utf-8") as handle:
        return load_scenario(json.load(handle))


def cmd_validate(args: argparse.Namespace) -> int:
    _, diagnostics, code = _read_playbook(args.path)
    for diag in diagnostics:
        print(diag.render(), file=sys.stderr)
    return code


def cmd_run(args: argparse.Namespace) -> int:
    playbook, diagnostics, code = _read_playbook(args.playbook)
    if code != EXIT_OK or playbook is None:
        for diag in diagnostics:
            print(diag.render(), file=sys.stderr)
        return code if code != EXIT_OK else EXIT_INVALID
    try:
        scenario = _read_scenario(args.scenario)
    except OSError as exc:
        print(f"cannot read scenario: {exc}", file=sys.stderr)
        return EXIT_UNREADABLE
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    def build_policy(name: str, side: Side):
        return get_policy(
            name, playbook=playbook, scenario=scenario, auth=scenario.auth_levels[side]
        )

    try:
        policies = {
            Side.RED: build_policy(args.red, Side.RED),
            Side.BLUE: build_policy(args.blue, Side.BLUE),
        }
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID

    engine = run_campaign(scenario, playbook, policies, args.horizon, args.seed)
    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(log_to_jsonl(engine.state.event_log))
    print(json.dumps(engine.mission_summary(), sort_keys=True))
    return EXIT_OK


def cmd_recommend(args: argparse.Namespace) -> int:
    playbook, diagnostics, code = _read_playbook(args.playbook)
    if code != EXIT_OK or playbook is None:
        for diag in diagnostics:
            print(diag.render(), file=sys.stderr)
        return code if code != EXIT_OK else EXIT_INVALID
    try:
        scenario = _read_scenario(args.scenario)
    except (OSError, ScenarioError) as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    tags = {t for t in (args.tags.split(",") if args.tags else []) if t}
    known = {ALWAYS_TAG}
    for play in playbook.plays:
        known.update(play.situation_tags)
    for tag in sorted(tags - known):
        print(f"warning: unknown tag {tag!r}", file=sys.stderr)
    tags.add(ALWAYS_TAG)

    auth = AuthorizationLevel.from_label(args.auth)
    try:
        rec = recommend(
            None, None, playbook, Side.BLUE, auth, args.depth, scenario=scenario, tags=tags
        )
    except PlannerRefusedError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID

    plays = {p.id: p for p in playbook.plays}
    print(f"{'rank':>4}  {'play':<28} {'intensity':<9} {'score':>8}  {'auth':<9} rationale")
    for i, entry in enumerate(rec.ranked, 1):
        level = plays[entry.play_id].required_authorization
        print(
            f"{i:>4}  {entry.play_id:<28} {entry.intensity.label:<9} "
            f"{entry.score:>8.3f}  {(level.label if level else '-'):<9} {entry.rationale}"
        )
    print()
    print("EXECUTE NOW")
    for entry in rec.executable_now:
        print(f"  {entry.play_id} @ {entry.intensity.label} (score {entry.score:.3f})")
    print("AWAITING AUTHORIZATION")
    for play_id, needed in rec.awaiting:
        print(f"  {play_id} (needs {needed.label})")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from redblue.service import create_app

    bind = args.bind or os.environ.get("REDBLUE_BIND", "127.0.0.1:8765")
    host, _, port = bind.rpartition(":")
    uvicorn.run(create_app(), host=host or "127.0.0.1", port=int(port))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="redblue", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="validate a playbook file")
    p_validate.add_argument("path", help="playbook file, or 'default'")
    p_validate.set_defaults(func=cmd_validate)

    p_run = sub.add_parser("run", help="run a campaign and write the event log")
    p_run.add_argument("--scenario", default=None, help="scenario JSON (default: shipped)")
    p_run.add_argument("--playbook", default=None, help="playbook file (default: shipped)")
    p_run.add_argument("--red", default="scripted-red", help="Red policy name")
    p_run.add_argument("--blue", default="scripted-blue", help="Blue policy name")
    p_run.add_argument("--horizon", type=int, default=2160, help="ticks to simulate")
    p_run.add_argument("--seed", type=int, default=42)
    p_run.add_argument("--out", default="events.jsonl", help="event log output path")
    p_run.set_defaults(func=cmd_run)

    p_rec = sub.add_parser("recommend", help="rank plays for a situation")
    p_rec.add_argument("--playbook", default=None)
    p_rec.add_argument("--scenario", default=None)
    p_rec.add_argument("--tags", default="", help="comma-separated situation tags")
    p_rec.add_argument("--auth", default="Operator", help="current authorization level")
    p_rec.add_argument("--depth", type=int, default=2, help="search depth in plies")
    p_rec.set_defaults(func=cmd_recommend)

    p_serve = sub.add_parser("serve", help="run the session service")
    p_serve.add_argument("--bind", default=None, help="host:port (env REDBLUE_BIND)")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
