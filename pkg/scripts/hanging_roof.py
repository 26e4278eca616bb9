#!/usr/bin/env python3
"""The k = 3 catenary cylinder ("hanging roof") from its lowest line.

Solves the Björling problem for the Case-A profile and checks the
singular-minimal equation H = (2/((k-1) z)) <e3, n> on the result.

    python3 scripts/hanging_roof.py --k 3 --m0 0.0 --out roof.ply
"""
import argparse
import json

import numpy as np

from solrep.families import catenary_cylinder_data, catenary_cylinder_patch
from solrep.io import export_mesh
from solrep.marcher import MarchConfig
from solrep.pipeline import solve_bjorling
from solrep.verify import conformal_factor_check, conformality, rigid_gap, soliton_residual


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--k", type=float, default=3.0)
    ap.add_argument("--m0", type=float, default=0.0, help="|G| on the data line")
    ap.add_argument("--n-u", type=int, default=401)
    ap.add_argument("--n-v", type=int, default=21)
    ap.add_argument("--epsilon", type=float, default=0.1)
    ap.add_argument("--out")
    args = ap.parse_args()

    data = catenary_cylinder_data(args.k, np.linspace(-0.5, 0.5, args.n_u), args.m0)
    sol = solve_bjorling(data, MarchConfig(epsilon=args.epsilon, n_v=args.n_v))
    rep = soliton_residual(sol.patch, args.k)
    rep.merge(conformality(sol.patch))
    rep.merge(conformal_factor_check(sol.raw, sol.gauss, sol.gamma))
    exact = catenary_cylinder_patch(args.k, sol.patch.grid, args.m0)
    print(json.dumps({"k": args.k, "z_range": [float(sol.patch.z.min()), float(sol.patch.z.max())],
                      "gap_to_closed_form": rigid_gap(sol.patch, exact, args.k),
                      **{name: r.max for name, r in rep.residuals.items()}, "pass": rep.passed}, indent=1))
    if args.out:
        export_mesh(sol.patch, args.out)


if __name__ == "__main__":
    main()
