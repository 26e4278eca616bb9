#!/usr/bin/env python3
"""Observed order of the grim-reaper pipeline over a grid ladder.

Each rung doubles n_u - 1 and n_v - 1 at fixed strip width, so h_u and h_v
halve together.

    python3 scripts/convergence_ladder.py --rungs 4
"""
import argparse

from solrep.verify import convergence_order


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--case", choices=["grim-reaper", "constant"], default="grim-reaper")
    ap.add_argument("--base", type=int, nargs=2, default=(101, 11), metavar=("N_U", "N_V"))
    ap.add_argument("--rungs", type=int, default=3)
    args = ap.parse_args()

    n_u, n_v = args.base
    grids = [((n_u - 1) * 2 ** r + 1, (n_v - 1) * 2 ** r + 1) for r in range(args.rungs)]
    order, pts = convergence_order(args.case, grids)
    print(f"{'n_u':>6} {'n_v':>5} {'h':>10} {'error':>12} {'ratio':>7}")
    prev = None
    for (nu, nv), (h, e) in zip(grids, pts):
        ratio = "" if prev is None else f"{prev / e:7.2f}"
        print(f"{nu:6d} {nv:5d} {h:10.4g} {e:12.4e} {ratio}")
        prev = e
    print(f"observed order {order:.3f}")


if __name__ == "__main__":
    main()
