#!/usr/bin/env python3
"""Run every verification suite and print a one-paragraph summary of each.

Exits nonzero if any suite reports a mismatch or a failed check.  With
--fast, the two slowest suites shrink (the SL(6) sample drops to 1000
triples and the SO(8) discovery is skipped).
"""

import argparse
import sys

from rootgame import SUITES, run_suite

FAST_SKIP = {"so8-counterexamples"}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--fast", action="store_true")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--only", nargs="*", default=None)
    args = ap.parse_args()

    names = args.only or sorted(SUITES)
    failures = 0
    for name in names:
        if args.fast and name in FAST_SKIP:
            print(f"suite {name}: skipped (--fast)")
            continue
        kwargs = {}
        if name == "sl6-sample" and args.fast:
            kwargs["count"] = 1000
        rep = run_suite(name, jobs=args.jobs, **kwargs)
        print(rep.summary())
        print()
        if not rep.ok:
            failures += 1
    if failures:
        print(f"{failures} suite(s) failed")
        return 1
    print("all suites clean")
    return 0


if __name__ == "__main__":
    sys.exit(main())
