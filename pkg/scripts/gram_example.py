"""Print the contravariant form blocks of GL_2(F_2) at t = 1 with their generic ranks and kernels.

    python scripts/gram_example.py [--max-degree 6]
"""

import argparse
import random

from cherednik_lab import gram_block, group_data, make_context, rank_kernel
from cherednik_lab.poly import monomial_str


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-degree", type=int, default=6)
    args = ap.parse_args()
    ctx = make_context(group_data("GL", 2, 2), 1)
    rng = random.Random(0)
    for i in range(args.max_degree + 1):
        blk = gram_block(ctx, i)
        rep = rank_kernel(blk, "generic", rng=rng)
        print(f"degree {i}: basis {', '.join(monomial_str(e) for e in blk.basis)}")
        width = max(len(x) for row in blk.entry_strings() for x in row)
        for row in blk.entry_strings():
            print("   " + "  ".join(x.rjust(width) for x in row))
        print(f"   generic rank {rep.rank}, kernel {[str(v) for v in rep.kernel]}")


if __name__ == "__main__":
    main()
