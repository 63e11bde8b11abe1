"""The hv command line tool.

    hv run <config.json> [--out DIR] [--seed K] [--set key=value]... [--no-figures]
    hv list [--json]

Exit codes: 0 all criteria pass, 1 usage or config error, 2 criterion failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import ConfigInvalid
from .experiments import EXPERIMENTS, format_csv, resolve_config, run_experiment
from .figures import render


def _parse_override(text: str):
    if "=" not in text:
        raise ConfigInvalid(f"override {text!r} must look like key=value")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def _apply_override(cfg: dict, key: str, value) -> None:
    parts = key.split(".")
    node = cfg
    for part in parts[:-1]:
        node = node.setdefault(part, {})
    node[parts[-1]] = value


def cmd_run(args) -> int:
    try:
        cfg = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    for override in args.set or []:
        try:
            key, value = _parse_override(override)
        except ConfigInvalid as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        _apply_override(cfg, key, value)
    if args.seed is not None:
        cfg["seed"] = args.seed
    try:
        resolved = resolve_config(cfg)
    except ConfigInvalid as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return 1
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    metrics, criteria, csv_tables = run_experiment(resolved)
    for name, (header, rows) in csv_tables.items():
        (outdir / name).write_text(format_csv(header, rows))
    figure_path = None
    if not args.no_figures:
        figure_path = str(render(resolved["kind"], metrics, csv_tables, outdir))
    report = {
        "config": resolved,
        "threads_cap": int(os.environ.get("HV_THREADS", "0")) or None,
        "metrics": metrics,
        "criteria": criteria,
        "figure": figure_path,
        "pass": all(criteria.values()),
    }
    (outdir / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    for name, ok in criteria.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return 0 if report["pass"] else 2


def cmd_list(args) -> int:
    if args.json:
        payload = {
            kind: {
                "description": info["description"],
                "required": info["schema"]["required"],
            }
            for kind, info in EXPERIMENTS.items()
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0
    width = max(len(k) for k in EXPERIMENTS)
    for kind in sorted(EXPERIMENTS):
        info = EXPERIMENTS[kind]
        required = ", ".join(k for k in info["schema"]["required"] if k != "kind")
        print(f"{kind:<{width}}  {info['description']}  (requires: {required})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hv", description="Hidden-phase quantum model experiment runner"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment from a JSON config")
    p_run.add_argument("config", help="path to the experiment config")
    p_run.add_argument("--out", default="hv-out", help="output directory")
    p_run.add_argument("--seed", type=int, default=None, help="override the seed")
    p_run.add_argument(
        "--set", action="append", metavar="KEY=VALUE",
        help="override a config key (dotted paths allowed, value parsed as JSON)",
    )
    p_run.add_argument(
        "--no-figures", action="store_true", help="skip figure rendering"
    )
    p_run.set_defaults(func=cmd_run)

    p_list = sub.add_parser("list", help="list experiment kinds")
    p_list.add_argument("--json", action="store_true", help="machine readable")
    p_list.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
