#!/usr/bin/env python3
"""Refined-target experiment: index sets, orbit class counts, and the three
free-factor witness words.

    python3 scripts/run_refined_report.py --field F2 --bound 25
    python3 scripts/run_refined_report.py --field Q --bound 21
"""

import argparse
import json

from cremona_kit.cli import parse_field
from cremona_kit.constructions import refined_target_report
from cremona_kit.rewrite import word_to_json


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--field", default="F2")
    ap.add_argument("--bound", type=int, default=25)
    ap.add_argument("--words", action="store_true", help="include witness words")
    args = ap.parse_args()
    report = refined_target_report(parse_field(args.field), args.bound)
    out = report.to_json()
    if args.words:
        out["witness_words"] = {
            k: word_to_json(w) for k, w in sorted(report.witness_words.items())
        }
    print(json.dumps(out, sort_keys=True, indent=2))


if __name__ == "__main__":
    main()
