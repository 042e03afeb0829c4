"""Reduced series of L(triv) for small orthogonal groups against the conjectured closed forms.

    python scripts/orthogonal_conjecture.py [--slow] [--workers 2]
"""

import argparse
import sys

from cherednik_lab.series import HilbertSeries
from cherednik_lab.verify import run_conjecture


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--slow", action="store_true", help="include q = 9")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for r in run_conjecture(args.slow, args.seed, args.workers):
        d = r.to_json()
        print(f"{r.family}({r.n},{r.q}) |G|={r.order} [{r.method}]")
        print(f"  H        = {d['H_factored']}")
        print(f"  h        = {d['h_string']}")
        print(f"  expected = {HilbertSeries(tuple(r.conjectured))}")
        print(f"  status   = {d['status']}" + (f" ({r.note})" if r.note else ""))
    return 0


if __name__ == "__main__":
    sys.exit(main())
