#!/usr/bin/env python3
"""Relator fuzzer: build seeded trivial relators from inverse pairs and
four-link commutation relations, reduce them, and check that the
free-product image is invariant under every logged move.

    python3 scripts/run_relator_fuzz.py --seed 0 --count 200 --max-len 40
"""

import argparse
import random
import sys

from cremona_kit.cli import parse_field
from cremona_kit.freeprod import homo_eval
from cremona_kit.rewrite import (
    make_center_pool,
    make_link_template,
    random_relator,
    reduce_relation,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--field", default="F2")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--max-len", type=int, default=40)
    ap.add_argument("--depths", type=int, nargs="+", default=[1, 2, 3, 5, 17, 19])
    args = ap.parse_args()
    field = parse_field(args.field)
    templates = [make_link_template(field, p) for p in make_center_pool(field, args.depths)]
    bad = 0
    for i in range(args.count):
        rng = random.Random(args.seed + i)
        w = random_relator(rng, templates, max_len=args.max_len)
        base = homo_eval(w)
        drift = []
        result = reduce_relation(
            w, observer=lambda state, move: drift.append(move) if homo_eval(state) != base else None
        )
        ok = result.is_trivial and not result.stuck and not drift and base.is_identity()
        if not ok:
            bad += 1
            print(f"seed {args.seed + i}: FAIL (trivial={result.is_trivial}, "
                  f"stuck={result.stuck}, drift={len(drift)})")
    print(f"{args.count - bad}/{args.count} relators reduced with invariant image")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
