"""Cluster counts of the normalized rotation iterates as epsilon shrinks.

For rational turns the count settles at the exact orbit size; for an
irrational angle it keeps growing roughly like 1/epsilon.

    python3 scripts/epsilon_sweep.py [--steps 5000] [--csv sweep.csv]
"""

import argparse
import csv
import math
import sys
from fractions import Fraction

from fejerlab import asymptotics as asy
from fejerlab.exact import rational_rotation_cluster_count
from fejerlab.fejer import iterate
from fejerlab.operators import PlanarRotationAveraged

EPSILONS = (0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.001)


def cases():
    for k, l in ((1, 5), (1, 3), (2, 5)):
        yield f"{k}/{l} turn", PlanarRotationAveraged.from_turns(k, l)
    yield "1 rad", PlanarRotationAveraged(1.0)
    yield "2pi(sqrt2-1) rad", PlanarRotationAveraged(2 * math.pi * (math.sqrt(2) - 1))


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--steps", type=int, default=5000)
    p.add_argument("--csv", help="also write the table here")
    args = p.parse_args(argv)

    rows = []
    for label, op in cases():
        tr = iterate(op, [1.0, 0.0], args.steps, stop_tol=1e-290)
        limit = asy.direction_sequences(tr, [0.0, 0.0]).of_kind(asy.Kind.TO_LIMIT)
        exact = ""
        if op.turns is not None:
            t = Fraction(op.turns)
            exact = rational_rotation_cluster_count(t.numerator, t.denominator).count
        gap = asy.max_angular_gap(limit, 0.5)
        for eps in EPSILONS:
            n = len(asy.cluster_directions(limit, 0.5, eps))
            rows.append({"case": label, "trace_length": len(tr), "epsilon": eps,
                         "clusters": n, "exact": exact, "max_gap_deg": round(gap, 4)})

    w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
