"""Mesh and field files.

Vertices are written row-major (u outer, v inner), so sample (i, j) is
vertex i * n_v + j + 1. Numbers use 17 significant digits, which makes a
write/read cycle bit-exact.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import DimensionError
from .fields import ComplexField, GridSpec
from .gauss import GaussField
from .weierstrass import SurfacePatch

FMT = "%.17g"


def _quads(n_u: int, n_v: int) -> np.ndarray:
    i, j = np.meshgrid(np.arange(n_u - 1), np.arange(n_v - 1), indexing="ij")
    a = (i * n_v + j).ravel()
    return np.stack([a, a + n_v, a + n_v + 1, a + 1], axis=-1)


def export_mesh(patch: SurfacePatch, path, fmt: str | None = None) -> Path:
    """Write an OBJ or PLY quad mesh; format from ``fmt`` or the suffix."""
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".") or "obj").lower()
    n_u, n_v = patch.grid.shape
    if n_u < 2 or n_v < 2:
        raise DimensionError("a mesh needs at least 2 samples in each direction")
    verts = patch.positions.reshape(-1, 3)
    faces = _quads(n_u, n_v)
    lines = []
    if fmt == "obj":
        lines.append(f"# solrep grid {n_u} {n_v} k {FMT % patch.k}")
        lines += ["v " + " ".join(FMT % c for c in p) for p in verts]
        lines += ["f " + " ".join(str(int(q) + 1) for q in f) for f in faces]
    elif fmt == "ply":
        lines += ["ply", "format ascii 1.0", f"comment solrep grid {n_u} {n_v} k {FMT % patch.k}",
                  f"element vertex {len(verts)}", "property double x", "property double y",
                  "property double z", f"element face {len(faces)}",
                  "property list uchar int vertex_indices", "end_header"]
        lines += [" ".join(FMT % c for c in p) for p in verts]
        lines += ["4 " + " ".join(str(int(q)) for q in f) for f in faces]
    else:
        raise ValueError(f"unknown mesh format {fmt!r}")
    path.write_text("\n".join(lines) + "\n")
    return path


def read_obj(path) -> SurfacePatch:
    """Read a mesh written by export_mesh back into a patch on a unit grid."""
    n_u = n_v = None
    k = 1.0
    verts = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# solrep grid"):
            parts = line.split()
            n_u, n_v, k = int(parts[3]), int(parts[4]), float(parts[6])
        elif line.startswith("v "):
            verts.append([float(x) for x in line.split()[1:4]])
    if n_u is None:
        raise ValueError(f"{path}: missing '# solrep grid' header")
    pos = np.asarray(verts, dtype=float).reshape(n_u, n_v, 3)
    grid = GridSpec(0.0, float(n_u - 1), n_u, 0.0, float(n_v - 1), n_v)
    return SurfacePatch(grid, pos, k, grid.mid)


def write_field_csv(u, v, values, path) -> Path:
    """CSV "u,v,re_g,im_g", one row per sample with u outer."""
    values = np.asarray(values, dtype=complex)
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    if values.shape != (len(u), len(v)):
        raise DimensionError("values must have shape (len(u), len(v))")
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["u", "v", "re_g", "im_g"])
        for i, ui in enumerate(u):
            for j, vj in enumerate(v):
                g = values[i, j]
                w.writerow([FMT % ui, FMT % vj, FMT % g.real, FMT % g.imag])
    return path


def export_field(gf: GaussField | ComplexField, path) -> Path:
    f = gf.G if isinstance(gf, GaussField) else gf
    return write_field_csv(f.grid.u, f.grid.v, f.values, path)


def read_field(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(u, v, values) from a CSV written by write_field_csv."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["u", "v", "re_g", "im_g"]:
        raise ValueError(f"{path}: bad header")
    data = np.array([[float(x) for x in r] for r in rows[1:]])
    u = np.unique(data[:, 0])
    v = np.unique(data[:, 1])
    return u, v, (data[:, 2] + 1j * data[:, 3]).reshape(len(u), len(v))
