"""Writers for SVG, OBJ, JSON and CSV output.

Every float goes through :func:`fmt`, a fixed-width 12-significant-digit
format, so output bytes do not depend on shortest-repr rounding.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exact import Dyadic, fraction_str
from .geometry import OrientationKey2, RotationQuat
from .substitution import SubstitutionSystem, TileInstance, tile_vertices

PALETTE = ("#e6b84f", "#4f86c6", "#c65f4f", "#6fb36a", "#a37ac7", "#7a7a7a")


def fmt(v: float) -> str:
    v = float(v)
    if v == 0:
        v = 0.0  # drop the sign of -0.0
    return f"{v:.11e}"


# --- JSON -----------------------------------------------------------------


class Raw(str):
    """A pre-formatted JSON token (used for fixed-width numbers)."""


def dumps(obj, indent: int = 1, _level: int = 0) -> str:
    """Deterministic JSON writer: floats are fixed width, keys keep insertion order."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, Raw):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, float):
        return fmt(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(x, (int, float, Raw)) and not isinstance(x, bool) for x in obj):
            return "[" + ", ".join(dumps(x) for x in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(x, indent, _level + 1) for x in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def orientation_json(o) -> dict:
    if isinstance(o, (OrientationKey2, RotationQuat)):
        return o.to_json()
    raise TypeError(f"unknown orientation type {type(o).__name__}")


def orientation_from_json(obj: dict):
    if "w" in obj:
        return RotationQuat.from_json(obj)
    return OrientationKey2.from_json(obj)


def tile_record(system: SubstitutionSystem, tile: TileInstance) -> dict:
    proto = system.prototile(tile.prototile_id)
    verts = tile_vertices(system, tile)
    return {
        "proto": proto.label,
        "address": list(tile.address),
        "orientation": orientation_json(tile.placement.orientation),
        "translation": [float(v) for v in tile.placement.translation],
        "vertices": [[float(c) for c in v] for v in verts],
    }


def tiles_json(system: SubstitutionSystem, level: int, tiles: Iterable[TileInstance]) -> str:
    doc = {
        "system": system.name,
        "level": level,
        "expansion_ratio": system.ratio_description,
        "tiles": [tile_record(system, t) for t in tiles],
    }
    return dumps(doc) + "\n"


def read_tiles_json(text: str) -> dict:
    doc = json.loads(text)
    for t in doc["tiles"]:
        t["orientation"] = orientation_from_json(t["orientation"])
        t["address"] = tuple(t["address"])
    return doc


# --- CSV ------------------------------------------------------------------


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if isinstance(v, float) else ("true" if v is True else "false" if v is False else v) for v in r])
    return buf.getvalue()


def spectrum_csv(rows) -> str:
    return _csv(
        ("level", "diameter", "tile_count", "orientation_count"),
        ((r.level, float(r.diameter), r.tile_count, r.orientation_count) for r in rows),
    )


def group_csv(rows) -> str:
    return _csv(("word_length", "distinct_elements", "closed"), ((r.word_length, r.distinct_elements, r.closed) for r in rows))


# --- SVG ------------------------------------------------------------------


def _points(verts) -> str:
    return " ".join(f"{fmt(x)},{fmt(y)}" for x, y in verts)


def _svg_frame(x0, y0, x1, y1, legend_rows: int) -> tuple[str, float, float]:
    """Open the document with a viewBox on the y-flipped world box plus legend space."""
    w, h = x1 - x0, y1 - y0
    m = 0.02 * max(w, h)
    fs = 0.03 * max(w, h)
    legend_h = (legend_rows + 1) * 1.4 * fs
    vb = (x0 - m, -y1 - m - legend_h, w + 2 * m, h + 2 * m + legend_h)
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{" ".join(fmt(v) for v in vb)}">\n'
    )
    return head, fs, vb[1] + m


def _legend(entries, x, y, fs) -> list[str]:
    out = ['<g class="legend">']
    for i, (color, text) in enumerate(entries):
        yy = y + (i + 0.5) * 1.4 * fs
        out.append(f'<rect x="{fmt(x)}" y="{fmt(yy)}" width="{fmt(fs)}" height="{fmt(fs)}" fill="{color}" stroke="black" stroke-width="{fmt(fs / 20)}"/>')
        out.append(f'<text x="{fmt(x + 1.5 * fs)}" y="{fmt(yy + 0.85 * fs)}" font-size="{fmt(fs)}" font-family="sans-serif">{text}</text>')
    out.append("</g>")
    return out


def tiles_svg(system: SubstitutionSystem, level: int, tiles: Sequence[TileInstance]) -> str:
    if system.dimension != 2:
        raise ValueError("SVG output needs a 2D system")
    polys = [tile_vertices(system, t) for t in tiles]
    if polys:
        allv = np.vstack(polys)
        x0, y0 = allv.min(axis=0)
        x1, y1 = allv.max(axis=0)
    else:
        x0 = y0 = 0.0
        x1 = y1 = 1.0
    n_orient = len({t.placement.orientation for t in tiles})
    counts = {}
    for t in tiles:
        counts[t.prototile_id] = counts.get(t.prototile_id, 0) + 1
    entries = [
        (PALETTE[p.id % len(PALETTE)], f"{p.label} ({counts.get(p.id, 0)} tiles)") for p in system.prototiles
    ]
    entries.append(("#ffffff", f"{system.name} level {level}: {n_orient} orientations"))
    head, fs, ly = _svg_frame(float(x0), float(y0), float(x1), float(y1), len(entries))
    sw = fmt(0.01 * max(x1 - x0, y1 - y0) / max(1.0, len(tiles) ** 0.5) + 1e-3)
    out = [head.rstrip("\n")]
    out.extend(_legend(entries, float(x0), ly, fs))
    out.append(f'<g transform="scale(1,-1)" stroke="black" stroke-width="{sw}" stroke-linejoin="round">')
    for t, v in zip(tiles, polys):
        color = PALETTE[t.prototile_id % len(PALETTE)]
        out.append(f'<polygon fill="{color}" points="{_points(v)}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def hyperbolic_svg(tiles, centers=(), bumps: bool = False, radius: float = 0.2) -> str:
    bounds = [t.bounds() for t in tiles]
    if bounds:
        x0 = min(b[0] for b in bounds)
        y0 = min(b[1] for b in bounds)
        x1 = max(b[2] for b in bounds)
        y1 = max(b[3] for b in bounds)
    else:
        x0 = y0 = 0.0
        x1 = y1 = 1.0
    entries = [("#dce6f2", f"binary tiling: {len(bounds)} tiles")]
    if centers:
        entries.append(("#c65f4f", f"disks: {len(centers)} (hyperbolic radius {radius:g})"))
    head, fs, ly = _svg_frame(x0, y0, x1, y1, len(entries))
    out = [head.rstrip("\n")]
    out.extend(_legend(entries, x0, ly, fs))
    out.append('<g transform="scale(1,-1)" stroke="black" stroke-linejoin="round">')
    for (a, b, c, d) in bounds:
        sw = fmt((d - b) * 0.01)
        out.append(f'<rect x="{fmt(a)}" y="{fmt(b)}" width="{fmt(c - a)}" height="{fmt(d - b)}" fill="#dce6f2" stroke-width="{sw}"/>')
        if bumps:
            # rectangular bump on the right geodesic side, triangular bump on the top horocycle
            h = d - b
            e = 0.08 * h
            bump = (
                f"M{fmt(c)},{fmt(b + 0.4 * h)} L{fmt(c + e)},{fmt(b + 0.4 * h)} "
                f"L{fmt(c + e)},{fmt(b + 0.6 * h)} L{fmt(c)},{fmt(b + 0.6 * h)} "
                f"M{fmt(a + 0.45 * (c - a))},{fmt(d)} L{fmt(a + 0.5 * (c - a))},{fmt(d + e)} L{fmt(a + 0.55 * (c - a))},{fmt(d)}"
            )
            out.append(f'<path class="bump" d="{bump}" fill="none" stroke-width="{sw}"/>')
    for dc in centers:
        cx, cy, r = dc.euclidean_circle(radius)
        out.append(f'<circle cx="{fmt(cx)}" cy="{fmt(cy)}" r="{fmt(r)}" fill="#c65f4f" fill-opacity="0.6" stroke-width="{fmt(r * 0.05)}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _exact(v) -> str:
    if isinstance(v, Dyadic):
        v = v.to_fraction()
    return fraction_str(Fraction(v))


def hyperbolic_json(tiles, centers=(), counts=None, outside: int = 0, packing: str = "none") -> str:
    recs = []
    for t in tiles:
        rec = {
            "level": t.level,
            "index": t.index,
            "offset": _exact(t.offset),
            "x": [_exact(t.left), _exact(t.right)],
            "y": [_exact(t.bottom), _exact(t.top)],
        }
        if counts is not None:
            rec["count"] = counts.get(t, 0)
        recs.append(rec)
    doc = {
        "packing": packing,
        "tiles": recs,
        "centers": [
            {"x": _exact(c.x), "y": _exact(c.y), "source": [c.source.level, c.source.index, _exact(c.source.offset)]}
            for c in centers
        ],
    }
    if counts is not None:
        doc["outside"] = outside
    return dumps(doc) + "\n"


# --- OBJ ------------------------------------------------------------------

# prism vertex order: bottom 0,1,2 then top 3,4,5 (counter-clockwise seen from above)
_PRISM_FACES = ((0, 2, 1), (3, 4, 5), (0, 1, 4), (0, 4, 3), (1, 2, 5), (1, 5, 4), (2, 0, 3), (2, 3, 5))


def tiles_obj(system: SubstitutionSystem, level: int, tiles: Sequence[TileInstance]) -> str:
    if system.dimension != 3:
        raise ValueError("OBJ output needs a 3D system")
    index: dict[str, int] = {}
    vlines: list[str] = []
    objects: list[str] = []
    for t in tiles:
        verts = tile_vertices(system, t)
        ids = []
        for v in verts:
            key = " ".join(fmt(c) for c in v)
            if key not in index:
                index[key] = len(index) + 1
                vlines.append(f"v {key}")
            ids.append(index[key])
        name = "tile_" + ("_".join(map(str, t.address)) or "root")
        objects.append(f"o {name}")
        # a reflection would flip winding; rotations preserve it
        objects.extend(f"f {ids[a]} {ids[b]} {ids[c]}" for a, b, c in _PRISM_FACES)
    head = [f"# {system.name} level {level}: {len(tiles)} prisms, {len(vlines)} shared vertices"]
    return "\n".join(head + vlines + objects) + "\n"
