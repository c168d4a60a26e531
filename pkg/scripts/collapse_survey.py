#!/usr/bin/env python3
"""Survey the friction structure of the law-invariant catalog.

Runs the collapse scanner over every catalog member that qualifies (law
invariant, zero at zero) and prints a verdict table: which prices are secretly
a multiple of the expectation, which sit on the zero-mean boundary, and how
much friction the rest certify.
"""

import argparse

from lawprice import (
    AtomSpace,
    choquet_functional,
    collapse_scan,
    entropic,
    expectation_functional,
    expected_shortfall,
    gate,
    mean_abs_dev,
    power_distortion,
)


def catalog():
    return [
        expectation_functional(0.5),
        expectation_functional(1.0),
        expectation_functional(2.0),
        expected_shortfall(0.5),
        expected_shortfall(0.9),
        mean_abs_dev(0.25),
        mean_abs_dev(0.75),
        choquet_functional(power_distortion(0.5)),
        gate(),
        entropic(0.5),
        entropic(2.0),
    ]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--atoms", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--budget", type=int, default=16)
    parser.add_argument("--tol", type=float, default=1e-9)
    args = parser.parse_args()

    space = AtomSpace(args.atoms)
    header = f"{'functional':28s} {'verdict':24s} {'objective':>12s} {'witness mean':>13s}"
    print(header)
    print("-" * len(header))
    for f in catalog():
        rep = collapse_scan(f, space, tol=args.tol, seed=args.seed, budget=args.budget)
        label = rep.verdict if rep.c is None else f"{rep.verdict}(c={rep.c:g})"
        print(
            f"{f.name:28s} {label:24s} {rep.min_objective:12.3e} {rep.best_witness_mean:13.4f}"
        )


if __name__ == "__main__":
    main()
