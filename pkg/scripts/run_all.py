"""Run every shipped config and write a consolidated report.

    python3 scripts/run_all.py [--configs configs] [--out runs]

Exits 0 iff every contract in every experiment passes.
"""

import argparse
import sys
import time
from pathlib import Path

from fejerlab.config import load_config
from fejerlab.experiments import run
from fejerlab.io import write_json
from fejerlab.report import consolidate, format_table


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--configs", default=Path(__file__).resolve().parents[1] / "configs", type=Path)
    p.add_argument("--out", default=Path("runs"), type=Path)
    args = p.parse_args(argv)

    summaries = []
    for path in sorted(args.configs.glob("*.json")):
        t0 = time.perf_counter()
        summaries.append(run(load_config(path), args.out / path.stem))
        print(f"{path.stem:<18} {time.perf_counter() - t0:6.2f}s", file=sys.stderr)
    rep = consolidate(summaries)
    write_json(rep, args.out / "report.json")
    print(format_table(rep))
    return 0 if rep["overall"] == "PASS" else 1


if __name__ == "__main__":
    sys.exit(main())
