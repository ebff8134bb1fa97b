"""Run the full pipeline on every fan in data/fans and print the reports.

    python3 scripts/reproduce_examples.py [--json] [--epsilon 1/10000000 --c-gamma 1]
"""

from __future__ import annotations

import argparse
from fractions import Fraction
from pathlib import Path

from toricglue.report import ReportOptions, batch

FANS = Path(__file__).resolve().parent.parent / "data" / "fans"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dir", default=str(FANS))
    ap.add_argument("--epsilon", type=Fraction)
    ap.add_argument("--c-gamma", type=Fraction)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    res = batch(args.dir, ReportOptions(epsilon=args.epsilon, c_gamma=args.c_gamma))
    for rep in res.reports:
        print(rep.to_json() if args.json else rep.to_text())
        print()
    print(res.summary())


if __name__ == "__main__":
    main()
