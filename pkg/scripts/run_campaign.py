#!/usr/bin/env python3
"""Enumerate the grid-plus-forks family and verify the claims over it.

Prints a per-claim summary table and the machine-readable report, and
exits 1 if any family member violates a claim.

    python scripts/run_campaign.py
    python scripts/run_campaign.py --pmax 5 --qmax 4 --max-forks 2
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from slimfork import EnumSpec, enumerate_family, verify_claims
from slimfork.campaign import CLAIM_NAMES


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--pmax", type=int, default=4)
    parser.add_argument("--qmax", type=int, default=4)
    parser.add_argument("--max-forks", type=int, default=3)
    parser.add_argument("--max-elements", type=int, default=40)
    parser.add_argument("--shuffle-seed", type=int, default=None,
                        help="permute work order (result must be identical)")
    parser.add_argument("--json-out", help="also write the report to this path")
    args = parser.parse_args()

    spec = EnumSpec(args.pmax, args.qmax, args.max_forks, args.max_elements)
    start = time.perf_counter()
    family = enumerate_family(spec, shuffle_seed=args.shuffle_seed)
    enum_time = time.perf_counter() - start
    report = verify_claims(family)

    by_forks: dict[int, int] = {}
    for entry in family.members():
        by_forks[entry.forks] = by_forks.get(entry.forks, 0) + 1
    print(f"family: {len(family)} classes "
          f"({', '.join(f'{v} with {k} fork(s)' for k, v in sorted(by_forks.items()))})")
    print(f"enumeration: {enum_time:.1f}s   verification: {report.wall_time_s:.1f}s")
    for name in CLAIM_NAMES:
        print(f"  {name:<14} checked {report.checked[name]:>5}   "
              f"passed {report.passed[name]:>5}   failed {report.failed[name]}")
    for counterexample in report.counterexamples:
        print(f"  COUNTEREXAMPLE {counterexample['claim']}: "
              f"script {json.dumps(counterexample['script'])} ({counterexample['detail']})")

    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as handle:
            json.dump(report.to_obj(), handle, sort_keys=True, indent=2)
            handle.write("\n")
    print("all claims hold" if report.ok() else "CLAIM VIOLATION FOUND")
    return 0 if report.ok() else 1


if __name__ == "__main__":
    sys.exit(main())
