"""Command-line driver.

    solrep exact --family grim-reaper --out gr.obj
    solrep bjorling --input data.json --epsilon 0.2 --out surf.obj --verify
    solrep verify --patch gr.obj --k 1
    solrep convergence --case grim-reaper

Exit status: 0 on success, 2 when a verification fails, 1 on any error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import families
from .bjorling import dump_bjorling, load_bjorling
from .errors import SolrepError, ValidationError
from .fields import GridSpec
from .io import export_field, export_mesh, read_obj
from .marcher import MarchConfig
from .pipeline import solve_bjorling
from .verify import (VerificationReport, conformality, convergence_order, gauss_consistency,
                     soliton_residual)

EXIT_OK, EXIT_ERROR, EXIT_FAIL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    k: float = 1.0
    grid: GridSpec | None = None
    march: MarchConfig | None = None
    input: Path | None = None
    out: Path | None = None
    field_out: Path | None = None
    report: Path | None = None
    mesh_format: str | None = None
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.k == 0:
            raise ValueError("k must be nonzero")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="solrep", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def outputs(sp):
        sp.add_argument("--out", type=Path, help="mesh file (.obj or .ply)")
        sp.add_argument("--format", choices=["obj", "ply"], help="mesh format (default: from suffix)")
        sp.add_argument("--field", type=Path, help="CSV file for the Gauss map")
        sp.add_argument("--report", type=Path, help="JSON verification report")

    ex = sub.add_parser("exact", help="build an oracle surface")
    ex.add_argument("--family", choices=["grim-reaper", "catenary", "rotational"], required=True)
    ex.add_argument("--k", type=float, default=None)
    ex.add_argument("--m0", type=float, default=0.0)
    ex.add_argument("--n-u", type=int, default=101)
    ex.add_argument("--n-v", type=int, default=41)
    ex.add_argument("--u-range", type=float, nargs=2, default=None)
    ex.add_argument("--v-range", type=float, nargs=2, default=None)
    ex.add_argument("--data-out", type=Path, help="also write Björling data along v = v_mid (JSON)")
    outputs(ex)

    bj = sub.add_parser("bjorling", help="solve a Björling problem from JSON data")
    bj.add_argument("--input", type=Path, required=True)
    bj.add_argument("--k", type=float, default=None, help="override k from the file")
    bj.add_argument("--epsilon", type=float, default=None)
    bj.add_argument("--n-v", type=int, default=41)
    bj.add_argument("--cutoff", type=float, default=2.0 / 3.0)
    bj.add_argument("--max-growth", type=float, default=1e2)
    bj.add_argument("--no-filter", action="store_true")
    bj.add_argument("--periodic", action="store_true", help="data closes up; march on the circle")
    bj.add_argument("--verify", action="store_true", help="check the result and exit 2 on failure")
    bj.add_argument("--tol", type=float, default=1e-3)
    outputs(bj)

    ve = sub.add_parser("verify", help="check a mesh written by this tool")
    ve.add_argument("--patch", type=Path, required=True)
    ve.add_argument("--k", type=float, default=None)
    ve.add_argument("--tol", type=float, default=1e-3)
    ve.add_argument("--report", type=Path)

    co = sub.add_parser("convergence", help="observed order over a grid ladder")
    co.add_argument("--case", choices=["grim-reaper", "constant"], required=True)
    co.add_argument("--grids", default="101x11,201x21,401x41", help="comma-separated n_u x n_v")
    co.add_argument("--expect", type=float, default=None, help="fail unless |order - expect| <= spread")
    co.add_argument("--spread", type=float, default=0.5)
    return p


def _emit(report: VerificationReport, path: Path | None):
    text = report.to_json()
    if path is not None:
        path.write_text(text + "\n")
    print(text)


def _write_outputs(args, patch, gf):
    if args.out is not None:
        export_mesh(patch, args.out, args.format)
    if args.field is not None:
        export_field(gf, args.field)


def _cmd_exact(args) -> int:
    fam = args.family
    k = 1.0 if fam == "grim-reaper" else (3.0 if args.k is None and fam == "catenary" else
                                          (1.0 if args.k is None else args.k))
    if fam == "grim-reaper" and args.k not in (None, 1.0):
        raise ValueError("the grim reaper has k = 1")
    u_range = args.u_range or {"grim-reaper": (-1.0, 1.0), "catenary": (-0.5, 0.5),
                               "rotational": (-0.3, 0.3)}[fam]
    v_range = args.v_range or ((0.0, 2.0 * np.pi) if fam == "rotational" else (-0.2, 0.2))
    grid = GridSpec(u_range[0], u_range[1], args.n_u, v_range[0], v_range[1], args.n_v)
    if fam == "grim-reaper":
        patch, gf = families.grim_reaper_patch(grid), families.grim_reaper_gauss(grid)
        data = families.grim_reaper_data(grid.u)
    elif fam == "catenary":
        patch = families.catenary_cylinder_patch(k, grid, args.m0)
        gf = families.catenary_cylinder_gauss(k, grid, args.m0)
        data = families.catenary_cylinder_data(k, grid.u, args.m0)
    else:
        patch = families.rotational_patch(k, grid, args.m0)
        gf = families.rotational_gauss(k, grid, args.m0)
        data = families.rotational_circle_data(k, grid.v, args.m0)
    _write_outputs(args, patch, gf)
    if args.data_out is not None:
        dump_bjorling(data, args.data_out)
    report = soliton_residual(patch, k)
    _emit(report, args.report)
    return EXIT_OK


def _cmd_bjorling(args) -> int:
    data = load_bjorling(args.input)
    if args.k is not None:
        data.k = float(args.k)
    eps = args.epsilon if args.epsilon is not None else 0.1 * float(data.u[-1] - data.u[0])
    cfg = MarchConfig(epsilon=eps, n_v=args.n_v, filter_cutoff=args.cutoff,
                      max_growth=args.max_growth, use_filter=not args.no_filter)
    sol = solve_bjorling(data, cfg, periodic=args.periodic)
    _write_outputs(args, sol.patch, sol.gauss)
    report = soliton_residual(sol.patch, data.k, args.tol)
    report.merge(conformality(sol.patch))
    report.merge(gauss_consistency(sol.raw, sol.gauss))
    _emit(report, args.report)
    return EXIT_FAIL if args.verify and not report.passed else EXIT_OK


def _cmd_verify(args) -> int:
    patch = read_obj(args.patch)
    report = soliton_residual(patch, patch.k if args.k is None else args.k, args.tol)
    _emit(report, args.report)
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_convergence(args) -> int:
    try:
        grids = [tuple(int(x) for x in g.lower().split("x")) for g in args.grids.split(",")]
    except ValueError:
        raise ValueError(f"bad --grids {args.grids!r}") from None
    order, pts = convergence_order(args.case, grids)
    print(json.dumps({"case": args.case, "order": None if np.isnan(order) else order,
                      "h": [p[0] for p in pts], "error": [p[1] for p in pts]}, indent=1))
    if args.expect is not None and not abs(order - args.expect) <= args.spread:
        return EXIT_FAIL
    return EXIT_OK


COMMANDS = {"exact": _cmd_exact, "bjorling": _cmd_bjorling, "verify": _cmd_verify,
            "convergence": _cmd_convergence}


def run_cli(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"invalid data: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (SolrepError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run_cli())
