#!/usr/bin/env python3
"""Mean per-arc fit residual as a function of the curve degree."""

import argparse

from beziermask.experiments import blob_corpus, degree_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--degrees", default="3,5,7,9")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    masks = blob_corpus(args.count, seed=args.seed)
    degrees = [int(d) for d in args.degrees.split(",")]
    out = degree_sweep(masks, degrees=degrees)
    print(f"{'degree':>6s} {'rms residual (px)':>18s}")
    for d in degrees:
        print(f"{d:6d} {out[d]:18.4f}")


if __name__ == "__main__":
    main()
