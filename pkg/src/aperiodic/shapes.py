"""Convex polygon / prism helpers: areas, half-space forms, box intersection."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

EPS = 1e-12


@dataclass(frozen=True)
class Box:
    """Closed axis-aligned box; ``lo`` and ``hi`` have 2 or 3 entries."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("box corners differ in dimension")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"empty box {self.lo} .. {self.hi}")

    @property
    def dimension(self) -> int:
        return len(self.lo)

    @classmethod
    def parse(cls, text: str) -> "Box":
        """``x0,y0,x1,y1`` or ``x0,y0,z0,x1,y1,z1``."""
        vals = [float(v) for v in text.split(",")]
        if len(vals) not in (4, 6):
            raise ValueError(f"window needs 4 or 6 numbers, got {len(vals)}")
        half = len(vals) // 2
        return cls(tuple(vals[:half]), tuple(vals[half:]))

    def ball_hits(self, center: Sequence[float], radius: float) -> bool:
        d2 = 0.0
        for c, a, b in zip(center, self.lo, self.hi):
            if c < a:
                d2 += (a - c) ** 2
            elif c > b:
                d2 += (c - b) ** 2
        r = radius * (1 + 1e-9) + 1e-9
        return d2 <= r * r


def polygon_area(pts) -> float:
    """Signed shoelace area (positive for counter-clockwise order)."""
    p = np.asarray(pts, dtype=float)
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def is_convex_ccw(pts) -> bool:
    p = np.asarray(pts, dtype=float)
    n = len(p)
    if n < 3:
        return False
    for i in range(n):
        a, b, c = p[i], p[(i + 1) % n], p[(i + 2) % n]
        cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if cross <= EPS:
            return False
    return True


def polygon_halfspaces(pts) -> tuple[np.ndarray, np.ndarray]:
    """Outward unit normals A and offsets b with interior = {A x < b}."""
    p = np.asarray(pts, dtype=float)
    q = np.roll(p, -1, axis=0)
    d = q - p
    n = np.stack([d[:, 1], -d[:, 0]], axis=1)
    n /= np.linalg.norm(n, axis=1)[:, None]
    return n, np.einsum("ij,ij->i", n, p)


def prism_vertices(base, height: float) -> np.ndarray:
    b = np.asarray(base, dtype=float)
    z0 = np.zeros((len(b), 1))
    return np.vstack([np.hstack([b, z0]), np.hstack([b, z0 + height])])


def prism_halfspaces(base, height: float) -> tuple[np.ndarray, np.ndarray]:
    n2, b2 = polygon_halfspaces(base)
    n = np.vstack([np.hstack([n2, np.zeros((len(n2), 1))]), [[0, 0, -1.0], [0, 0, 1.0]]])
    b = np.concatenate([b2, [0.0, height]])
    return n, b


def prism_volume(verts) -> float:
    """Volume of a (possibly moved) triangular prism from its 6 vertices.

    Vertices are ordered bottom triangle then top triangle; the prism is
    split into three tetrahedra.
    """
    v = np.asarray(verts, dtype=float)
    if len(v) != 6:
        raise ValueError("triangular prism expected")
    a, b, c, d, e, f = v
    tets = [(a, b, c, d), (b, c, d, e), (c, d, e, f)]
    return float(sum(abs(np.linalg.det(np.array([q - p, r - p, s - p]))) / 6.0 for p, q, r, s in tets))


def _separated(axis, verts, box_lo, box_hi, tol) -> bool:
    nrm = np.linalg.norm(axis)
    if nrm < 1e-12:
        return False
    axis = axis / nrm
    proj = verts @ axis
    corners = np.array(list(itertools.product(*zip(box_lo, box_hi))))
    bproj = corners @ axis
    return proj.max() < bproj.min() - tol or proj.min() > bproj.max() + tol


def convex_intersects_box(verts, face_normals, edge_dirs, box: Box, tol: float = 1e-9) -> bool:
    """Separating-axis test between a convex polytope and a closed box.

    Touching counts as intersecting (the test errs toward inclusion).
    """
    v = np.asarray(verts, dtype=float)
    dim = v.shape[1]
    lo, hi = np.asarray(box.lo), np.asarray(box.hi)
    axes = [np.eye(dim)[i] for i in range(dim)]
    axes.extend(np.asarray(face_normals, dtype=float))
    if dim == 3:
        for e in np.asarray(edge_dirs, dtype=float):
            for i in range(3):
                axes.append(np.cross(e, np.eye(3)[i]))
    return not any(_separated(a, v, lo, hi, tol) for a in axes)
