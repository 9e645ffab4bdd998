"""Run the acceptance suite, print one line per criterion and save the report.

    python scripts/run_acceptance.py [--seed N] [--report acceptance_report.txt]
"""
import argparse
import sys
from dataclasses import replace

from aconvex.experiments import ALL_CRITERIA, SuiteConfig, report, run_criterion


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=SuiteConfig.seed)
    ap.add_argument("--report", default="acceptance_report.txt")
    ap.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    args = ap.parse_args()

    cfg = replace(SuiteConfig(), seed=args.seed)
    results = [run_criterion(n, cfg) for n in (args.only or sorted(ALL_CRITERIA))]
    for r in results:
        print(r.line())
    with open(args.report, "w", encoding="utf-8") as fh:
        fh.write(report(results))
    print(f"report written to {args.report}")
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
