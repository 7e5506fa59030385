#!/usr/bin/env python3
"""Reproduce the three-graph comparison (idealized / Hutchinson / sampled AMV).

Thin wrapper over the CLI so the experiment is one command:

    python scripts/run_table1.py --output results/table1

Writes table1.{json,csv}, per-graph density curves, eigenvalue histograms
(11 equal bins), moment/damped-coefficient curves, and a manifest.
"""

import argparse
import sys

from specden.cli import main


def run():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--output", default="results/table1")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--seeds", type=int, default=5)
    parser.add_argument("--samples-per-matvec", type=int, default=None,
                        help="skip the doubling search and fix the budget")
    args = parser.parse_args()
    argv = ["experiment-table1", "--seed", str(args.seed),
            "--seeds", str(args.seeds), "--output", args.output]
    if args.samples_per_matvec is not None:
        argv += ["--samples-per-matvec", str(args.samples_per_matvec)]
    return main(argv)


if __name__ == "__main__":
    sys.exit(run())
