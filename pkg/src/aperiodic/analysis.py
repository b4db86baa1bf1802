"""Orientation spectra of substitution systems and word balls of G(p, q)."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import IDENTITY_QUAT, axis_rotation, quat_mul
from .substitution import SubstitutionSystem, predicted_counts


@dataclass(frozen=True)
class SpectrumRow:
    level: int
    diameter: float
    tile_count: int
    orientation_count: int


@dataclass(frozen=True)
class GroupBallRow:
    word_length: int
    distinct_elements: int
    closed: bool


def _compose(a, b):
    if hasattr(a, "compose"):
        return a.compose(b)
    return quat_mul(a, b)


def _advance(system: SubstitutionSystem, states) -> set:
    nxt = set()
    for pid, o in states:
        for cid, iso in system.rule_for(pid).children:
            nxt.add((cid, _compose(o, iso.orientation)))
    return nxt


def _advance_chunk(args):
    system, states = args
    return _advance(system, states)


def orientation_states(system: SubstitutionSystem, level: int, root: int = 0) -> set:
    """Distinct (prototile, orientation) pairs among the level-``level`` tiles.

    Only the pair determines the orientations of a tile's descendants, so the
    set is propagated level by level instead of expanding every tile.
    """
    states = {(root, system.identity_placement().orientation)}
    for _ in range(level):
        states = _advance(system, states)
    return states


def orientation_spectrum(
    system: SubstitutionSystem, max_level: int, root: int = 0, workers: int = 1
) -> list[SpectrumRow]:
    """One row per level 0..max_level; counts are set sizes, so worker count cannot change them."""
    if max_level < 0:
        raise ValueError("max_level must be nonnegative")
    lam = system.expansion_ratio
    diam0 = system.prototile(root).diameter
    letter_only = system.orientation_kind == "letter-only"
    rows = []
    states = {(root, system.identity_placement().orientation)}
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for n in range(max_level + 1):
            if n and pool is not None and len(states) >= 256:
                items = list(states)
                chunks = [items[i::workers] for i in range(workers)]
                states = set().union(*pool.map(_advance_chunk, [(system, c) for c in chunks]))
            elif n:
                states = _advance(system, states)
            count = 1 if letter_only else len({o for _, o in states})
            tiles = int(predicted_counts(system, n, root).sum())
            rows.append(SpectrumRow(n, diam0 * lam ** n, tiles, count))
    finally:
        if pool is not None:
            pool.shutdown()
    return rows


GROUP_ORDERS = (2, 3, 4, 6)


def group_ball(p: int, q: int, max_word_length: int) -> list[GroupBallRow]:
    """Ball sizes of <g, h> with g = 2pi/p about axis 1 and h = 2pi/q about axis 3."""
    if p not in GROUP_ORDERS or q not in GROUP_ORDERS:
        raise ValueError(f"p and q must be in {GROUP_ORDERS}, got {p}, {q}")
    if max_word_length < 1:
        raise ValueError("max_word_length must be at least 1")
    g = axis_rotation(1, p)
    h = axis_rotation(3, q)
    gens = list(dict.fromkeys([g, g.inverse(), h, h.inverse()]))
    seen = {IDENTITY_QUAT}
    frontier = [IDENTITY_QUAT]
    rows = []
    prev = 1
    for n in range(1, max_word_length + 1):
        nxt = []
        for x in frontier:
            for s in gens:
                y = x * s
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        rows.append(GroupBallRow(n, len(seen), len(seen) == prev))
        prev = len(seen)
    return rows


def group_elements(p: int, q: int, max_word_length: int) -> set:
    g = axis_rotation(1, p)
    h = axis_rotation(3, q)
    gens = [g, g.inverse(), h, h.inverse()]
    seen = {IDENTITY_QUAT}
    frontier = [IDENTITY_QUAT]
    for _ in range(max_word_length):
        frontier = [y for y in {x * s for x in frontier for s in gens} if y not in seen]
        seen.update(frontier)
    return seen


@dataclass
class GrowthReport:
    fit_kind: str  # "logarithmic", "power" or "degenerate"
    log_params: tuple[float, float]  # count ~ a + b * log(diameter)
    power_params: tuple[float, float]  # count ~ c * diameter ** gamma
    log_residual: float
    power_residual: float

    @property
    def fit_params(self) -> tuple[float, float]:
        return self.power_params if self.fit_kind == "power" else self.log_params


def growth_report(rows: Sequence[SpectrumRow]) -> GrowthReport:
    """Compare a logarithmic and a power law for orientation count vs diameter.

    Both fits are least squares (the power law in log-log form); they are
    compared by their sum of squared residuals in count units.
    """
    if len(rows) < 3:
        raise ValueError("growth report needs at least 3 rows")
    d = np.array([r.diameter for r in rows], dtype=float)
    c = np.array([r.orientation_count for r in rows], dtype=float)
    ld = np.log(d)
    nan = (math.nan, math.nan)
    if np.all(c == c[0]):
        return GrowthReport("degenerate", nan, nan, math.nan, math.nan)
    b, a = np.polyfit(ld, c, 1)
    log_res = float(np.sum((a + b * ld - c) ** 2))
    gamma, lc = np.polyfit(ld, np.log(c), 1)
    power_res = float(np.sum((np.exp(lc) * d ** gamma - c) ** 2))
    kind = "logarithmic" if log_res <= power_res else "power"
    return GrowthReport(kind, (float(a), float(b)), (float(np.exp(lc)), float(gamma)), log_res, power_res)
