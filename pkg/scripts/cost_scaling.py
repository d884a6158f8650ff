#!/usr/bin/env python3
"""Counted multiply-adds per mIRR call as m grows at fixed n, with a log-log fit."""

import argparse

from carascale.experiments import loglog_slope, mean_ops_per_call


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--m", type=int, nargs="+", default=[5, 10, 20, 40])
    ap.add_argument("--calls", type=int, default=400)
    args = ap.parse_args(argv)

    ops = []
    for m in args.m:
        ops.append(mean_ops_per_call(m, args.n, args.calls, seed=m))
        print(f"m={m:>4}  ops/call={ops[-1]:>10.1f}  ops/(m+1)^2={ops[-1] / (m + 1) ** 2:.2f}")
    print(f"log-log slope: {loglog_slope(args.m, ops):.3f}")


if __name__ == "__main__":
    main()
