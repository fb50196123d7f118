"""Mesh and curve export for visual inspection.

Surfaces are sampled on the natural parameter grid of the domain (radius x
angle for an annulus, u x v for a rectangle) into quad meshes written as
Wavefront OBJ.  Vertices lying on the singular set (|g| = 1 up to a mesh
tolerance) are flagged and their 1-based indices go to a ``.sing`` sidecar
next to the OBJ so viewers can highlight the singular locus.

The image of the data curve itself is exported as a CSV polyline; for
shrinking curves the whole polyline collapses to the cone point and a single
row is written.
"""

from __future__ import annotations

import dataclasses
import math
from pathlib import Path
from typing import Sequence

import numpy as np

from .bjorling import MaxfaceSolution, weierstrass_from_phi
from .laurent import Annulus, Rectangle

SINGULAR_FLAG_TOL = 1e-6
COLLAPSE_TOL = 1e-8
FLOAT_FMT = "%.17g"


@dataclasses.dataclass(frozen=True)
class SurfaceMesh:
    """Quad mesh over the parameter grid; faces are 0-based index quadruples."""

    vertices: np.ndarray      # (N, 3)
    faces: np.ndarray         # (M, 4)
    vertex_flags: np.ndarray  # (N,) bool: on the singular set
    n_u: int
    n_v: int

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def n_faces(self) -> int:
        return int(self.faces.shape[0])


def sample_surface(sol: MaxfaceSolution, n_u: int = 16, n_v: int = 16) -> SurfaceMesh:
    """Evaluate the immersion on the domain grid and assemble quads.

    An annulus closes up in the angular direction ((n_u - 1) * n_v quads);
    a rectangle stays open ((n_u - 1) * (n_v - 1) quads).
    """
    if n_u < 8 or n_v < 8:
        raise ValueError("mesh needs at least 8 samples per direction")
    dom = sol.domain
    if isinstance(dom, Annulus):
        rs = np.linspace(dom.r_in, dom.r_out, n_u)
        angles = np.linspace(0.0, 2.0 * math.pi, n_v, endpoint=False)
        zs = rs[:, None] * np.exp(1j * angles)[None, :]
        wrap = True
    elif isinstance(dom, Rectangle):
        us = np.linspace(dom.u_min, dom.u_max, n_u)
        vs = np.linspace(dom.v_min, dom.v_max, n_v)
        zs = us[:, None] + 1j * vs[None, :]
        wrap = False
    else:
        raise TypeError(f"unsupported domain {type(dom).__name__}")

    flat = zs.reshape(-1)
    vertices = sol.immersion(flat)

    w = weierstrass_from_phi(sol.phi)
    with np.errstate(divide="ignore", invalid="ignore"):
        gv = np.asarray(w.g(flat), dtype=complex)
    flags = np.abs(np.abs(gv) - 1.0) < SINGULAR_FLAG_TOL
    flags &= np.isfinite(gv.real) & np.isfinite(gv.imag)

    faces = []
    for i in range(n_u - 1):
        j_max = n_v if wrap else n_v - 1
        for j in range(j_max):
            jn = (j + 1) % n_v
            faces.append((i * n_v + j, (i + 1) * n_v + j,
                          (i + 1) * n_v + jn, i * n_v + jn))
    return SurfaceMesh(vertices=vertices, faces=np.array(faces, dtype=int),
                       vertex_flags=flags, n_u=n_u, n_v=n_v)


@dataclasses.dataclass(frozen=True)
class SingularImage:
    """Image of the data curve under the immersion."""

    ts: np.ndarray
    points: np.ndarray         # (N, 3)
    collapsed: bool            # the whole curve maps to one point
    marked_ts: tuple[float, ...] = ()
    marked_points: np.ndarray | None = None


def singular_image_curve(sol: MaxfaceSolution, samples: int = 256,
                         marked: Sequence[float] = ()) -> SingularImage:
    """Trace the image of the singular curve, optionally with marked params."""
    if samples < 64:
        raise ValueError("curve export needs at least 64 samples")
    ts = sol.data.curve.t_grid(samples)
    pts = sol.on_curve(ts)
    collapsed = bool(np.max(np.linalg.norm(pts - pts[0], axis=-1)) < COLLAPSE_TOL)
    marked = tuple(float(t) for t in marked)
    marked_pts = sol.on_curve(np.array(marked)) if marked else None
    return SingularImage(ts=ts, points=pts, collapsed=collapsed,
                         marked_ts=marked, marked_points=marked_pts)


def write_obj(mesh: SurfaceMesh, path: str | Path) -> Path:
    """Write the mesh as OBJ plus a .sing sidecar of flagged vertex indices.

    Indices in both files are 1-based as usual for OBJ.
    """
    if mesh.n_vertices == 0 or mesh.n_faces == 0:
        raise ValueError("refusing to write an empty mesh")
    path = Path(path)
    lines = ["# quad mesh sampled from a maximal surface"]
    for v in mesh.vertices:
        lines.append("v " + " ".join(FLOAT_FMT % c for c in v))
    for f in mesh.faces:
        lines.append("f " + " ".join(str(int(i) + 1) for i in f))
    path.write_text("\n".join(lines) + "\n")

    sing = path.with_suffix(path.suffix + ".sing")
    flagged = np.nonzero(mesh.vertex_flags)[0] + 1
    sing.write_text("\n".join(str(int(i)) for i in flagged)
                    + ("\n" if flagged.size else ""))
    return path


def write_polyline_csv(ts: np.ndarray, points: np.ndarray,
                       path: str | Path, collapse: bool = False) -> Path:
    """CSV polyline t,x,y,z; a collapsed curve is written as its single point."""
    path = Path(path)
    ts = np.asarray(ts, dtype=float)
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or ts.shape[0] != pts.shape[0]:
        raise ValueError("expected matching ts (N,) and points (N, 3)")
    if pts.shape[0] == 0:
        raise ValueError("refusing to write an empty polyline")
    rows = ["t,x,y,z"]
    keep = pts[:1] if collapse else pts
    tkeep = ts[:1] if collapse else ts
    for t, p in zip(tkeep, keep):
        rows.append(",".join(FLOAT_FMT % c for c in (t, *p)))
    path.write_text("\n".join(rows) + "\n")
    return path
