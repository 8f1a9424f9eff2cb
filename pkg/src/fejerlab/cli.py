"""Command line front door.

    fejerlab run <config.json> [--out DIR]
    fejerlab oracle [--max-n 200] [--out DIR]
    fejerlab report <summary.json>... [--json PATH]

Exit status is 0 iff every contract passes; 1 for failed contracts; error
families map to the codes on :mod:`fejerlab.errors`.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .config import load_config, parse_config
from .errors import FejerLabError
from .experiments import run
from .io import write_json
from .report import consolidate, format_table, report

CONTRACT_FAILED = 1


def resolve_out(cli_out, cfg_out, name: str) -> Path:
    """``--out`` beats ``$FEJERLAB_OUT`` beats the config's ``output.dir``."""
    if cli_out:
        return Path(cli_out)
    env = os.environ.get("FEJERLAB_OUT")
    if env:
        return Path(env) / name
    if cfg_out:
        return Path(cfg_out)
    return Path("fejerlab_out") / name


def _finish(summary: dict, out: Path) -> int:
    rep = consolidate([summary])
    print(format_table(rep))
    print(f"artifacts: {out}")
    return 0 if rep["overall"] == "PASS" else CONTRACT_FAILED


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    out = resolve_out(args.out, cfg.output_dir, cfg.name)
    return _finish(run(cfg, out), out)


def cmd_oracle(args) -> int:
    cfg = parse_config({"experiment": "oracle", "max_n": args.max_n}, name="oracle")
    out = resolve_out(args.out, None, "oracle")
    return _finish(run(cfg, out), out)


def cmd_report(args) -> int:
    rep = report(args.summaries)
    print(format_table(rep))
    if args.json:
        write_json(rep, args.json)
    return 0 if rep["overall"] == "PASS" else CONTRACT_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fejerlab", description="Fejer monotone iteration laboratory")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one experiment config")
    r.add_argument("config")
    r.add_argument("--out", help="output directory")
    r.set_defaults(func=cmd_run)

    o = sub.add_parser("oracle", help="run the exact identity checks")
    o.add_argument("--max-n", type=int, default=200)
    o.add_argument("--out", help="output directory")
    o.set_defaults(func=cmd_oracle)

    rep = sub.add_parser("report", help="consolidate summary.json files")
    rep.add_argument("summaries", nargs="+")
    rep.add_argument("--json", help="write the consolidated report here")
    rep.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except FejerLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
