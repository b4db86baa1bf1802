"""Generic substitution systems: expansion, counting, and the partition check."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from .geometry import Isometry2, Isometry3, OrientationKey2, RotationQuat, quat_mul
from .shapes import (
    Box,
    convex_intersects_box,
    is_convex_ccw,
    polygon_area,
    polygon_halfspaces,
    prism_halfspaces,
    prism_vertices,
    prism_volume,
)

ORIENTATION_KINDS = ("letter-only", "key2", "quat3")


class SubstitutionError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class Prototile:
    """A convex reference tile: a polygon, or a prism over a polygon when ``height`` is set."""

    id: int
    label: str
    vertices: tuple[tuple[float, float], ...]
    height: Optional[float] = None

    def __post_init__(self):
        if not is_convex_ccw(self.vertices):
            raise SubstitutionError(f"prototile {self.label!r} must be convex and counter-clockwise")
        if self.height is not None and self.height <= 0:
            raise SubstitutionError("prism height must be positive")

    @property
    def dimension(self) -> int:
        return 2 if self.height is None else 3

    @cached_property
    def solid_vertices(self) -> np.ndarray:
        if self.height is None:
            return np.asarray(self.vertices, dtype=float)
        return prism_vertices(self.vertices, self.height)

    @cached_property
    def center(self) -> np.ndarray:
        return self.solid_vertices.mean(axis=0)

    @cached_property
    def bounding_radius(self) -> float:
        return float(np.linalg.norm(self.solid_vertices - self.center, axis=1).max())

    @cached_property
    def diameter(self) -> float:
        v = self.solid_vertices
        return float(max(np.linalg.norm(a - b) for a in v for b in v))

    @cached_property
    def measure(self) -> float:
        """Area (2D) or volume (3D)."""
        a = polygon_area(self.vertices)
        return a if self.height is None else a * self.height

    @cached_property
    def halfspaces(self) -> tuple[np.ndarray, np.ndarray]:
        if self.height is None:
            return polygon_halfspaces(self.vertices)
        return prism_halfspaces(self.vertices, self.height)

    @cached_property
    def edge_directions(self) -> np.ndarray:
        base = np.asarray(self.vertices, dtype=float)
        d = np.roll(base, -1, axis=0) - base
        if self.height is None:
            return d
        return np.vstack([np.hstack([d, np.zeros((len(d), 1))]), [[0.0, 0.0, 1.0]]])


@dataclass(frozen=True)
class SubstitutionRule:
    """Children of ``parent`` in parent-scaled-by-lambda coordinates."""

    parent: int
    children: tuple[tuple[int, object], ...]


@dataclass(frozen=True)
class SubstitutionSystem:
    name: str
    dimension: int
    expansion_ratio: float
    ratio_description: str
    prototiles: tuple[Prototile, ...]
    rules: tuple[SubstitutionRule, ...]
    orientation_kind: str
    key_base: int = 4  # turn granularity of OrientationKey2 placements (2D only)

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise SubstitutionError("dimension must be 2 or 3")
        if not self.expansion_ratio > 1:
            raise SubstitutionError("expansion ratio must exceed 1")
        if self.orientation_kind not in ORIENTATION_KINDS:
            raise SubstitutionError(f"unknown orientation kind {self.orientation_kind!r}")
        ids = {p.id for p in self.prototiles}
        if [p.id for p in self.prototiles] != list(range(len(self.prototiles))):
            raise SubstitutionError("prototile ids must be 0..n-1 in order")
        for p in self.prototiles:
            if p.dimension != self.dimension:
                raise SubstitutionError(f"prototile {p.label!r} has the wrong dimension")
        for r in self.rules:
            if r.parent not in ids:
                raise SubstitutionError(f"rule for unknown prototile {r.parent}")
            for cid, _ in r.children:
                if cid not in ids:
                    raise SubstitutionError(f"rule {r.parent} references unknown prototile {cid}")

    def rule_for(self, prototile_id: int) -> SubstitutionRule:
        for r in self.rules:
            if r.parent == prototile_id:
                return r
        raise SubstitutionError(f"no rule for prototile {prototile_id} in {self.name}")

    def prototile(self, prototile_id: int) -> Prototile:
        return self.prototiles[prototile_id]

    def identity_placement(self):
        if self.dimension == 2:
            return Isometry2(OrientationKey2(base=self.key_base))
        return Isometry3()


@dataclass(frozen=True, slots=True)
class TileInstance:
    prototile_id: int
    placement: object
    address: tuple[int, ...] = ()
    scale: float = 1.0

    @property
    def orientation(self):
        return self.placement.orientation


def _rot(orientation) -> tuple:
    return _rot_cached(orientation)


@lru_cache(maxsize=1 << 16)
def _rot_cached(orientation) -> tuple:
    return tuple(float(v) for v in orientation.matrix().ravel())


def _compose_orientation(a, b):
    if isinstance(a, RotationQuat):
        return quat_mul(a, b)
    return a.compose(b)


def _child(system: SubstitutionSystem, parent: TileInstance, index: int, cid: int, iso) -> TileInstance:
    f = parent.scale / system.expansion_ratio
    pl = parent.placement
    r = _rot(pl.orientation)
    tc = iso.translation
    t = pl.translation
    o = _compose_orientation(pl.orientation, iso.orientation)
    if system.dimension == 2:
        nt = (t[0] + f * (r[0] * tc[0] + r[1] * tc[1]), t[1] + f * (r[2] * tc[0] + r[3] * tc[1]))
        placement = Isometry2(o, nt)
    else:
        nt = (
            t[0] + f * (r[0] * tc[0] + r[1] * tc[1] + r[2] * tc[2]),
            t[1] + f * (r[3] * tc[0] + r[4] * tc[1] + r[5] * tc[2]),
            t[2] + f * (r[6] * tc[0] + r[7] * tc[1] + r[8] * tc[2]),
        )
        placement = Isometry3(o, nt)
    return TileInstance(cid, placement, parent.address + (index,), f)


def subdivide(instance: TileInstance, system: SubstitutionSystem) -> list[TileInstance]:
    """Children of ``instance``, each 1/lambda the instance's linear size."""
    rule = system.rule_for(instance.prototile_id)
    return [_child(system, instance, i, cid, iso) for i, (cid, iso) in enumerate(rule.children)]


def tile_vertices(system: SubstitutionSystem, tile: TileInstance) -> np.ndarray:
    proto = system.prototile(tile.prototile_id)
    return tile.placement.apply(proto.solid_vertices * tile.scale)


def tile_intersects_box(system: SubstitutionSystem, tile: TileInstance, box: Box) -> bool:
    proto = system.prototile(tile.prototile_id)
    m = tile.placement.orientation.matrix()
    normals = proto.halfspaces[0] @ m.T
    edges = proto.edge_directions @ m.T
    return convex_intersects_box(tile_vertices(system, tile), normals, edges, box)


def _ball_hits(system: SubstitutionSystem, tile: TileInstance, box: Box) -> bool:
    proto = system.prototile(tile.prototile_id)
    c = tile.placement.apply(proto.center * tile.scale)
    return box.ball_hits(c, proto.bounding_radius * tile.scale)


def root_instance(system: SubstitutionSystem, level: int, root: int = 0) -> TileInstance:
    return TileInstance(root, system.identity_placement(), (), system.expansion_ratio ** level)


def _expand_from(system, start: TileInstance, depth: int, window: Optional[Box]) -> Iterator[TileInstance]:
    stack = [(start, 0)]
    while stack:
        node, d = stack.pop()
        if window is not None and not _ball_hits(system, node, window):
            continue
        if d == depth:
            if window is None or tile_intersects_box(system, node, window):
                yield TileInstance(node.prototile_id, node.placement, node.address, 1.0) if d else node
            continue
        kids = subdivide(node, system)
        for k in reversed(kids):
            stack.append((k, d + 1))


def _expand_worker(args):
    system, start, depth, window = args
    return list(_expand_from(system, start, depth, window))


def expand(
    system: SubstitutionSystem,
    level: int,
    window: Optional[Box] = None,
    root: int = 0,
    workers: int = 1,
) -> Iterator[TileInstance]:
    """Level-``level`` tiles of one root supertile, unit prototile size, in address order.

    With ``window`` only tiles whose geometry meets the closed box are returned;
    subtrees are pruned by bounding balls, which never drops an intersecting tile.
    """
    if level < 0:
        raise ValueError("level must be nonnegative")
    if window is not None and window.dimension != system.dimension:
        raise ValueError("window dimension does not match the system")
    start = root_instance(system, level, root)
    if level == 0:
        start = TileInstance(root, start.placement, (), 1.0)
    if workers <= 1 or level == 0:
        yield from _expand_from(system, start, level, window)
        return
    # split into subtrees at a shallow depth, farm them out, and reassemble in order
    frontier = [start]
    depth = 0
    while depth < level and len(frontier) < 4 * workers:
        nxt = []
        for n in frontier:
            if window is None or _ball_hits(system, n, window):
                nxt.extend(subdivide(n, system))
        frontier = nxt
        depth += 1
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for chunk in pool.map(_expand_worker, [(system, n, level - depth, window) for n in frontier]):
            yield from chunk


def substitution_matrix(system: SubstitutionSystem) -> np.ndarray:
    """M[i, j] = number of type-i children in the rule of type j."""
    n = len(system.prototiles)
    m = np.zeros((n, n), dtype=np.int64)
    for r in system.rules:
        for cid, _ in r.children:
            m[cid, r.parent] += 1
    return m


def predicted_counts(system: SubstitutionSystem, level: int, root: int = 0) -> np.ndarray:
    m = substitution_matrix(system)
    v = np.zeros(len(system.prototiles), dtype=object)
    v[root] = 1
    mo = m.astype(object)
    for _ in range(level):
        v = mo.dot(v)
    return np.array(v, dtype=object)


def dominant_eigen(m, tol: float = 1e-12, max_iter: int = 100_000) -> tuple[float, np.ndarray]:
    """Perron eigenpair of a nonnegative primitive matrix by power iteration.

    The eigenvector is scaled to sum to one.
    """
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("square matrix expected")
    if (a < 0).any():
        raise ValueError("matrix must be nonnegative")
    v = np.full(a.shape[0], 1.0 / a.shape[0])
    lam = 0.0
    for _ in range(max_iter):
        w = a @ v
        s = w.sum()
        if s == 0:
            raise ConvergenceError("iteration collapsed to zero; matrix not primitive")
        w /= s
        new_lam = float((a @ w).sum())
        if abs(new_lam - lam) <= tol * abs(new_lam) and np.abs(w - v).max() <= tol:
            return new_lam, w
        v, lam = w, new_lam
    raise ConvergenceError(f"power iteration did not converge in {max_iter} iterations")


@dataclass
class PartitionReport:
    system: str
    prototile_id: int
    area_residual: float
    multiplicity_violations: int
    samples: int
    rejected: int
    degenerate: bool = False
    details: list = field(default_factory=list)

    def passed(self, tolerance: float) -> bool:
        return (not self.degenerate) and abs(self.area_residual) <= tolerance and self.multiplicity_violations == 0


def _child_measure(system: SubstitutionSystem, cid: int, iso) -> float:
    proto = system.prototile(cid)
    v = iso.apply(proto.solid_vertices)
    if system.dimension == 2:
        return abs(polygon_area(v))
    return prism_volume(v)


def _signed_depth(proto: Prototile, iso, pts: np.ndarray) -> np.ndarray:
    """max_j (A_j x - b_j) in the prototile frame: < 0 inside, > 0 outside."""
    m = iso.orientation.matrix()
    local = (pts - np.asarray(iso.translation)) @ m  # inverse of an orthogonal map
    a, b = proto.halfspaces
    return (local @ a.T - b).max(axis=1)


def _sample_chunk(args):
    system, proto_id, n, seed, tol = args
    lam = system.expansion_ratio
    parent = system.prototile(proto_id)
    rule = system.rule_for(proto_id)
    rng = np.random.default_rng(seed)
    pv = parent.solid_vertices * lam
    lo, hi = pv.min(axis=0), pv.max(axis=0)
    pa, pb = parent.halfspaces
    got = []
    have = 0
    while have < n:
        pts = rng.uniform(lo, hi, size=(max(2 * (n - have), 64), len(lo)))
        inside = ((pts / lam) @ pa.T - pb).max(axis=1) < 0
        pts = pts[inside][: n - have]
        got.append(pts)
        have += len(pts)
    pts = np.vstack(got)
    depths = np.stack([_signed_depth(system.prototile(cid), iso, pts) for cid, iso in rule.children])
    near = (np.abs(depths) <= tol).any(axis=0)
    parent_depth = ((pts / lam) @ pa.T - pb).max(axis=1) * lam
    near |= parent_depth > -tol
    mult = (depths < 0).sum(axis=0)
    keep = ~near
    return int(keep.sum()), int(near.sum()), int((mult[keep] != 1).sum())


def verify_partition(
    system: SubstitutionSystem,
    prototile_id: int,
    sample_count: int,
    tolerance: float,
    seed: int = 0,
    workers: int = 1,
) -> PartitionReport:
    """Check that the rule for ``prototile_id`` decomposes the inflated prototile.

    Area (volume) residual is computed from the placed child vertices.  Interior
    sample points within ``tolerance`` of a child boundary are rejected, every
    other sample must lie in exactly one child.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    lam = system.expansion_ratio
    parent = system.prototile(prototile_id)
    rule = system.rule_for(prototile_id)
    measures = [_child_measure(system, cid, iso) for cid, iso in rule.children]
    d = system.dimension
    parent_measure = parent.measure
    degenerate = parent_measure <= tolerance or any(mm <= tolerance for mm in measures)
    residual = sum(measures) / lam ** d - parent_measure
    report = PartitionReport(system.name, prototile_id, residual, 0, 0, 0, degenerate)
    if degenerate:
        report.details.append("degenerate geometry (zero area or volume)")
        return report
    chunk = 25_000
    sizes = [chunk] * (sample_count // chunk)
    if sample_count % chunk:
        sizes.append(sample_count % chunk)
    seeds = np.random.SeedSequence([seed, prototile_id]).spawn(len(sizes))
    jobs = [(system, prototile_id, n, s, tolerance) for n, s in zip(sizes, seeds)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sample_chunk, jobs))
    else:
        results = [_sample_chunk(j) for j in jobs]
    report.samples = sum(r[0] for r in results)
    report.rejected = sum(r[1] for r in results)
    report.multiplicity_violations = sum(r[2] for r in results)
    return report


def placement_from_address(system: SubstitutionSystem, level: int, address: Sequence[int], root: int = 0):
    """Recompute a tile placement by walking rule isometries along its address."""
    node = root_instance(system, level, root)
    for idx in address:
        rule = system.rule_for(node.prototile_id)
        cid, iso = rule.children[idx]
        node = _child(system, node, idx, cid, iso)
    return node.prototile_id, node.placement
