"""Binary tiling of the upper half-plane and the Böröczky disk packing.

A tile at level k occupies one cell of the strip 2**k <= y <= 2**(k+1); cells
in that strip have width 2**(k+1).  Each strip is a lattice of cells shifted by
a dyadic ``offset``; tiles below are forced, tiles above depend on a choice of
which half of its parent each ancestor is.
"""

from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exact import Dyadic
from .geometry import BinaryMap

DISK_CENTER = (Fraction(1, 2), Fraction(7, 4))  # in the primary tile
SHIFT = Fraction(6, 5)
RENDER_RADIUS = 0.2  # hyperbolic radius used only for drawing


class Choice(enum.Enum):
    LEFT_CHILD = "L"
    RIGHT_CHILD = "R"


def parse_choices(text: str) -> tuple[Choice, ...]:
    """``"LRRL"`` -> choices; empty string or ``"-"`` means none."""
    text = text.strip().upper()
    if text in ("", "-"):
        return ()
    try:
        return tuple(Choice(c) for c in text)
    except ValueError:
        raise ValueError(f"choices must be a string over L/R, got {text!r}") from None


@dataclass(frozen=True, order=True)
class BinaryTile:
    level: int
    index: int
    offset: Dyadic = field(default_factory=Dyadic, compare=False)

    def __post_init__(self):
        off = Dyadic.from_value(self.offset)
        w = self.level + 1
        shift = off.floor_div_pow2(w)
        object.__setattr__(self, "offset", off.mod_pow2(w))
        object.__setattr__(self, "index", self.index + shift)

    def __eq__(self, other):
        if not isinstance(other, BinaryTile):
            return NotImplemented
        return (self.level, self.index, self.offset) == (other.level, other.index, other.offset)

    def __hash__(self):
        return hash((self.level, self.index, self.offset))

    @property
    def width(self) -> Dyadic:
        return Dyadic.pow2(self.level + 1)

    @property
    def left(self) -> Dyadic:
        return self.offset + Dyadic(self.index, self.level + 1)

    @property
    def right(self) -> Dyadic:
        return self.left + self.width

    @property
    def bottom(self) -> Dyadic:
        return Dyadic.pow2(self.level)

    @property
    def top(self) -> Dyadic:
        return Dyadic.pow2(self.level + 1)

    def to_map(self) -> BinaryMap:
        """The map z -> 2**k z + left carrying the primary tile onto this one."""
        return BinaryMap(self.level, self.left)

    def bounds(self) -> tuple[float, float, float, float]:
        return float(self.left), float(self.bottom), float(self.right), float(self.top)

    def __repr__(self) -> str:
        extra = f", offset={self.offset}" if self.offset != 0 else ""
        return f"BinaryTile({self.level}, {self.index}{extra})"


PRIMARY = BinaryTile(0, 0)


def children(t: BinaryTile) -> tuple[BinaryTile, BinaryTile]:
    """The two tiles of the strip below that span ``t``'s horizontal extent."""
    k = t.level
    r = t.offset.mod_pow2(k)
    q = (t.offset - r).floor_div_pow2(k)
    m = 2 * t.index + q
    return BinaryTile(k - 1, m, r), BinaryTile(k - 1, m + 1, r)


def parent_of(t: BinaryTile, choice: Choice) -> BinaryTile:
    left = t.left if choice is Choice.LEFT_CHILD else t.left - t.width
    return BinaryTile(t.level + 1, 0, left)


class RegionError(ValueError):
    pass


def _strip_offset(ancestor: BinaryTile, level: int) -> Dyadic:
    return ancestor.offset.mod_pow2(level + 1)


def build_region(choices: Sequence[Choice], window) -> list[BinaryTile]:
    """Tiles meeting the open window (x0, x1) x (y0, y1).

    The strips up to the top of the last ancestor are fixed by ``choices``;
    windows reaching higher raise :class:`RegionError` naming the depth needed.
    """
    x0, y0, x1, y1 = (Fraction(v) for v in window)
    if y0 <= 0:
        raise RegionError("window must satisfy y0 > 0")
    if not (x0 < x1 and y0 < y1):
        raise RegionError("window must have positive width and height")
    anc = PRIMARY
    for c in choices:
        anc = parent_of(anc, c)
    top = anc.level
    if y1 > Fraction(2) ** (top + 1):
        need = math.ceil(math.log2(float(y1))) - 1
        while Fraction(2) ** (need + 1) < y1:
            need += 1
        raise RegionError(f"window top {float(y1)} needs {need} choices, got {len(choices)}")
    lo_level = math.floor(math.log2(float(y0)))
    while Fraction(2) ** lo_level > y0:
        lo_level -= 1
    while Fraction(2) ** (lo_level + 1) <= y0:
        lo_level += 1
    out = []
    for k in range(top, lo_level - 1, -1):
        off = _strip_offset(anc, k).to_fraction()
        w = Fraction(2) ** (k + 1)
        m0 = math.floor((x0 - off) / w)
        m1 = math.ceil((x1 - off) / w)
        for m in range(m0, m1):
            left = off + m * w
            if left < x1 and left + w > x0:
                out.append(BinaryTile(k, m, Dyadic.from_value(off)))
    return out


def tile_area(t: BinaryTile) -> float:
    """Hyperbolic area: width * (1/bottom - 1/top), identically 1."""
    w = math.ldexp(1.0, t.level + 1)
    return w * (math.ldexp(1.0, -t.level) - math.ldexp(1.0, -t.level - 1))


def tile_area_exact(t: BinaryTile) -> Fraction:
    return t.width.to_fraction() * (1 / t.bottom.to_fraction() - 1 / t.top.to_fraction())


@dataclass(frozen=True)
class DiskCenter:
    x: Fraction
    y: Fraction
    source: BinaryTile

    def __post_init__(self):
        if self.y <= 0:
            raise ValueError("disk center must lie in the upper half-plane")

    def euclidean_circle(self, radius: float = RENDER_RADIUS) -> tuple[float, float, float]:
        """Euclidean (cx, cy, r) of the hyperbolic disk of the given radius."""
        y = float(self.y)
        return float(self.x), y * math.cosh(radius), y * math.sinh(radius)


def disk_centers(tiles: Iterable[BinaryTile], mode: str = "original") -> list[DiskCenter]:
    if mode not in ("original", "shifted"):
        raise ValueError(f"mode must be original or shifted, got {mode!r}")
    out = []
    for t in tiles:
        x, y = t.to_map().apply_exact(*DISK_CENTER)
        if mode == "shifted":
            x, y = SHIFT * x, SHIFT * y
        out.append(DiskCenter(x, y, t))
    return out


@dataclass
class TileCounts:
    counts: dict
    outside: int = 0

    def __getitem__(self, tile: BinaryTile) -> int:
        return self.counts[tile]


def _level_of(y: Fraction) -> int:
    k = y.numerator.bit_length() - y.denominator.bit_length()
    while Fraction(2) ** k > y:
        k -= 1
    while Fraction(2) ** (k + 1) <= y:
        k += 1
    return k


def count_centers_per_tile(tiles: Iterable[BinaryTile], centers: Iterable[DiskCenter]) -> TileCounts:
    """Assign each center to the tile whose half-open cell contains it."""
    tiles = list(tiles)
    counts = {t: 0 for t in tiles}
    offsets = defaultdict(set)
    for t in tiles:
        offsets[t.level].add(t.offset.to_fraction())
    result = TileCounts(counts)
    for c in centers:
        k = _level_of(c.y)
        w = Fraction(2) ** (k + 1)
        hit = None
        for off in sorted(offsets.get(k, ())):
            cand = BinaryTile(k, math.floor((c.x - off) / w), Dyadic.from_value(off))
            if cand in counts:
                hit = cand
                break
        if hit is None:
            result.outside += 1
        else:
            counts[hit] += 1
    return result


def interior_tiles(tiles: Iterable[BinaryTile], window) -> list[BinaryTile]:
    """Tiles whose closed cell lies inside the closed window."""
    x0, y0, x1, y1 = (Fraction(v) for v in window)
    return [
        t for t in tiles
        if t.left.to_fraction() >= x0 and t.right.to_fraction() <= x1
        and t.bottom.to_fraction() >= y0 and t.top.to_fraction() <= y1
    ]


@dataclass
class PackingReport:
    tiles: int
    original: dict
    shifted: dict

    @property
    def mean_original(self) -> float:
        return sum(self.original.values()) / max(self.tiles, 1)

    @property
    def mean_shifted(self) -> float:
        return sum(self.shifted.values()) / max(self.tiles, 1)


def packing_report(choices: Sequence[Choice], window) -> PackingReport:
    """Original and shifted disk counts on the tiles lying wholly inside ``window``.

    The tiling is built one strip below the window and wide enough to hold the
    preimage of the window under the 6/5 shift, so every center that can land
    inside it is generated.
    """
    x0, y0, x1, y1 = (Fraction(v) for v in window)
    pad = Fraction(2) ** (_level_of(y1) + 1)
    lo, hi = min(x0, x0 / SHIFT) - pad, max(x1, x1 / SHIFT) + pad
    region = build_region(choices, (lo, y0 / 2, hi, y1))
    inner = interior_tiles(region, window)
    orig = count_centers_per_tile(inner, disk_centers(region, "original")).counts
    shifted = count_centers_per_tile(inner, disk_centers(region, "shifted")).counts
    return PackingReport(len(inner), orig, shifted)
