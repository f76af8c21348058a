#!/usr/bin/env python3
"""Run the full experiment battery through the CLI, one output dir per subcommand.

Desk-scale defaults reproduce the headline tables in a few minutes; --fast
drops replication counts for a smoke run.  Every artifact lands under OUT/
as <experiment>/run_*.csv plus a JSON summary.
"""

import argparse
import sys
import time
from pathlib import Path

from levywave import cli


def battery(fast: bool) -> list[list[str]]:
    reps = "200" if fast else "10000"
    small = "100" if fast else "1000"
    seeds = "2" if fast else "5"
    tmax = "200" if fast else "2000"
    return [
        ["oracle"],
        ["simulate", "--reps", small, "--seeds", "2", "--theta-max", "50"],
        ["clt", "--reps", reps, "--theta", "2,8,32"],
        ["asclt", "--seeds", seeds, "--theta-max", tmax],
        ["il", "--reps", small, "--theta-max", "1024"],
        ["cov-decay", "--reps", "0", "--theta", "1,4,16,64,256"],
        ["lemma1", "--seeds", seeds, "--theta-max", tmax],
        ["poincare", "--reps", small, "--theta", "1,5"],
        ["calibrate", "--reps", reps],
    ]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out", help="output root (default: out)")
    ap.add_argument("--seed", default="0")
    ap.add_argument("--threads", default="8")
    ap.add_argument("--fast", action="store_true", help="smoke-run replication counts")
    args = ap.parse_args()

    failures = 0
    for argv in battery(args.fast):
        name = argv[0]
        out = Path(args.out) / name / "run"
        full = argv + ["--seed", args.seed, "--threads", args.threads, "--out", str(out)]
        t0 = time.time()
        code = cli.main(full)
        status = "ok" if code == 0 else f"exit {code}"
        print(f"[{name:9s}] {status} in {time.time() - t0:6.1f}s")
        failures += code != 0
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
