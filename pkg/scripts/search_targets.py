#!/usr/bin/env python3
"""Representation search for a few candidate congruence lattices.

Chains of three or more elements are rejected by the dual-atom filter
without any enumeration; Boolean squares and cubes are found as
congruence lattices of grids.

    python scripts/search_targets.py --pmax 4 --qmax 4 --max-forks 2
"""

from __future__ import annotations

import argparse
import json
import sys

from slimfork import EnumSpec, GridSpec, build_diagram, grid, search_representation


def boolean_cube():
    return build_diagram([[1, 2, 3], [4, 5], [4, 6], [5, 6], [7], [7], [7], []],
                         name="boolean-cube")


def chain(k: int):
    return build_diagram([[i + 1] for i in range(k - 1)] + [[]], name=f"chain-{k}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--pmax", type=int, default=4)
    parser.add_argument("--qmax", type=int, default=4)
    parser.add_argument("--max-forks", type=int, default=2)
    parser.add_argument("--max-elements", type=int, default=40)
    args = parser.parse_args()
    spec = EnumSpec(args.pmax, args.qmax, args.max_forks, args.max_elements)

    targets = [chain(3), chain(4), chain(5), grid(GridSpec(2, 2)), boolean_cube()]
    for target in targets:
        result = search_representation(target, spec)
        witnesses = ", ".join(json.dumps(w.to_obj()) for w in result.witnesses[:3])
        if len(result.witnesses) > 3:
            witnesses += f", ... ({len(result.witnesses)} total)"
        print(f"{target.name:<14} -> {result.note}"
              + (f"   [{witnesses}]" if result.witnesses else ""))
    return 0


if __name__ == "__main__":
    sys.exit(main())
