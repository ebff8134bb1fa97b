"""Survey the Dirichlet-to-Neumann matrices: determinant sign and size per (m, gamma).

    python3 scripts/dtn_survey.py [--max-m 6] [--max-gamma 64]
"""

from __future__ import annotations

import argparse

from toricglue import lattice
from toricglue.spectral import ModeIndex, dtn_inverse, dtn_matrix


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-m", type=int, default=6)
    ap.add_argument("--max-gamma", type=int, default=64)
    args = ap.parse_args()
    print(f"{'m':>3} {'gammas':>7} {'min det':>14} {'max det':>14}  inverse exact")
    for m in range(2, args.max_m + 1):
        dets, exact = [], True
        for g in range(args.max_gamma + 1):
            d = dtn_matrix(ModeIndex(g, m))
            dets.append(d.determinant)
            exact &= lattice.matmul(dtn_inverse(d), d.entries) == lattice.identity(2)
        print(f"{m:>3} {len(dets):>7} {str(min(dets)):>14} {str(max(dets)):>14}  {exact}")


if __name__ == "__main__":
    main()
