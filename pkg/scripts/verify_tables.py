"""Run the GL/SL character table claims and print one line per claim.

    python scripts/verify_tables.py [--scope ALL] [--workers 4] [--seed 0]
"""

import argparse
import sys

from cherednik_lab.verify import SCOPES, claims_for, run_claims, verification_report


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scope", default="ALL", choices=(*SCOPES, "ALL"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    results = run_claims(claims_for(args.scope), args.seed, args.workers)
    for r in results:
        print(f"{r.status:8s} {r.claim_id:20s} c={r.config['c']}  H = {r.to_json()['computed_string']}")
    report = verification_report(results)
    print(f"overall: {report['overall']}")
    return 0 if report["overall"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
