#!/usr/bin/env python3
"""Precompute and persist structure-constant tables for the sweep groups.

Caches land in ROOTGAME_CACHE_DIR (default ~/.cache/rootgame) as flat
varint files; rerunning a sweep afterwards skips the products entirely.
"""

import argparse
import itertools
import sys
import time

from rootgame import all_elements, build_root_system, ring_for
from rootgame.oracle import load_structure_cache, save_structure_cache

DEFAULT_GROUPS = ["A2", "A3", "A4", "B2", "B3", "D4", "G2"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("groups", nargs="*", default=DEFAULT_GROUPS)
    args = ap.parse_args()
    for spec in args.groups or DEFAULT_GROUPS:
        t0 = time.time()
        rs = build_root_system(spec)
        ring = ring_for(rs)
        loaded = load_structure_cache(ring)
        elems = sorted(all_elements(rs), key=lambda w: (w.length(), w.data))
        pairs = 0
        for u, v in itertools.combinations_with_replacement(elems, 2):
            if u.length() + v.length() <= rs.n:
                ring.product(u, v)
                pairs += 1
        path = save_structure_cache(ring)
        print(f"{spec}: {pairs} products ({loaded} preloaded) "
              f"-> {path} in {time.time() - t0:.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
