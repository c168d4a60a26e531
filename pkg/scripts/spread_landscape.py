#!/usr/bin/env python3
"""Export a spread landscape CSV for one functional.

Sweeps the shifted sorted ramp Z(t) = ramp + t and records the bid-ask spread
at each shift, for external plotting.
"""

import argparse
import json

from lawprice import AtomSpace
from lawprice.friction import spread_landscape, write_spread_landscape
from lawprice.functionals import functional_from_config


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("functional", help='JSON spec, e.g. \'{"type": "expected_shortfall", "beta": 0.9}\'')
    parser.add_argument("--atoms", type=int, default=8)
    parser.add_argument("--lo", type=float, default=-2.0)
    parser.add_argument("--hi", type=float, default=2.0)
    parser.add_argument("--points", type=int, default=201)
    parser.add_argument("--out", default="landscape.csv")
    args = parser.parse_args()

    f = functional_from_config(json.loads(args.functional))
    rows = spread_landscape(f, AtomSpace(args.atoms), lo=args.lo, hi=args.hi, points=args.points)
    write_spread_landscape(rows, args.out)
    print(f"{f.name}: wrote {len(rows)} rows to {args.out}")


if __name__ == "__main__":
    main()
