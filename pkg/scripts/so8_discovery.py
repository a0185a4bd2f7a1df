#!/usr/bin/env python3
"""Sweep every top-degree D4 triple and report the games the solver cannot
win whose intersection number is nonetheless positive, grouped into orbits
under argument permutation and triality.

This is the discovery run behind the so8-counterexamples suite; on one
core it takes well under a minute.
"""

import sys
import time

from rootgame import run_suite


def main():
    t0 = time.time()
    rep = run_suite("so8-counterexamples")
    print(rep.summary())
    print()
    print("counterexample instances (canonical order):")
    for cx in rep.extras["d4_counterexamples"]:
        print("  ", " | ".join(cx["instance"]), " value", cx["oracle"])
    print("orbits under argument permutation x triality:")
    for orbit in rep.extras["d4_orbits"]:
        print("  ", orbit)
    print(f"total {time.time() - t0:.1f}s")
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
