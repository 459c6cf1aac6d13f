"""Run every property suite and write the reports to a JSON file.

    python scripts/run_suites.py --trials 200 --seed 0 --out reports.json
"""

import argparse
from pathlib import Path

from cohcorr.serialization import dumps
from cohcorr.verify import SUITES, run_suite


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--suites", nargs="+", default=list(SUITES))
    p.add_argument("--out", default="reports.json")
    args = p.parse_args()
    reports = []
    for name in args.suites:
        dims = (2, 2, 2) if name == "eq5_flag" else None
        r = run_suite(name, args.trials, dims, seed=args.seed)
        reports.append(r.to_dict())
        print(f"{name:28s} {r.status:8s} {r.violations:5d}/{r.trials:<5d} worst margin {r.max_violation_margin:+.3e}")
    Path(args.out).write_text(dumps(reports))
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
