"""Acceptance criteria, one test per criterion; each prints a PASS/FAIL line."""

import math
import time
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from aperiodic.analysis import group_ball, growth_report, orientation_spectrum
from aperiodic.catalog import PHI, SYSTEMS, get_system, morse_label_at
from aperiodic.cli import main, run_verify
from aperiodic.hyperbolic import (
    PRIMARY,
    BinaryTile,
    disk_centers,
    packing_report,
    parse_choices,
    tile_area,
)
from aperiodic.substitution import dominant_eigen, expand, predicted_counts

RESULTS: dict[int, tuple[bool, str]] = {}

QUAQUAVERSAL_PINNED = [5, 16, 44, 112, 260]  # enumeration oracle, levels 1..5


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)
    print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


def test_criterion_01_partition_oracles(capsys):
    t0 = time.perf_counter()
    codes = {name: run_verify(get_system(name), 100_000, 1e-9) for name in SYSTEMS}
    elapsed = time.perf_counter() - t0
    capsys.readouterr()
    ok = all(c == 0 for c in codes.values()) and elapsed < 30
    record(1, ok, f"verify exit codes {codes}, {elapsed:.1f}s (limit 30s)")


def test_criterion_02_count_laws():
    t0 = time.perf_counter()
    bad = []
    for name, top in (("pinwheel", 8), ("quaquaversal", 5), ("thue-morse", 6), ("kite-dart", 12)):
        system = get_system(name)
        for n in range(top + 1):
            got = np.zeros(len(system.prototiles), dtype=np.int64)
            for t in expand(system, n):
                got[t.prototile_id] += 1
            want = [int(v) for v in predicted_counts(system, n)]
            if got.tolist() != want:
                bad.append((name, n, got.tolist(), want))
    elapsed = time.perf_counter() - t0
    pin8 = int(predicted_counts(get_system("pinwheel"), 8).sum())
    qq5 = int(predicted_counts(get_system("quaquaversal"), 5).sum())
    ok = not bad and elapsed < 60 and pin8 == 390_625 and qq5 == 32_768
    record(2, ok, f"mismatches {bad}, pinwheel L8 {pin8}, quaquaversal L5 {qq5}, {elapsed:.1f}s (limit 60s)")


def test_criterion_03_thue_morse_oracle():
    system = get_system("thue-morse")
    mismatches = 0
    for n in range(7):
        for t in expand(system, n):
            i, j = (int(round(v)) for v in t.placement.translation)
            if system.prototile(t.prototile_id).label != morse_label_at(i, j):
                mismatches += 1
    row = {}
    for t in expand(system, 4):
        i, j = (int(round(v)) for v in t.placement.translation)
        if j == 0:
            row[i] = system.prototile(t.prototile_id).label
    first = "".join(row[i] for i in range(16))
    ok = mismatches == 0 and first == "abbabaabbaababba"
    record(3, ok, f"{mismatches} mismatching cells up to level 6, first row {first}")


def test_criterion_04_pinwheel_growth():
    rows = orientation_spectrum(get_system("pinwheel"), 8)[1:]
    c = [r.orientation_count for r in rows]
    nondecreasing = all(b >= a for a, b in zip(c, c[1:]))
    exceeds = all(r.orientation_count > r.level for r in rows)
    envelope = all(r.orientation_count <= 8 * (2 * r.level + 1) for r in rows)
    rep = growth_report(rows)
    ok = nondecreasing and exceeds and envelope and rep.fit_kind == "logarithmic"
    record(4, ok, f"counts {c}, fit {rep.fit_kind} (log {rep.log_residual:.3g} vs power {rep.power_residual:.3g})")


def test_criterion_05_quaquaversal_growth():
    rows = orientation_spectrum(get_system("quaquaversal"), 5)[1:]
    c = [r.orientation_count for r in rows]
    increasing = all(b > a for a, b in zip(c, c[1:]))
    ratios = [b / a for a, b in zip(c, c[1:])]
    rep = growth_report(rows)
    ok = increasing and all(r > 1.5 for r in ratios) and rep.fit_kind == "power" and c == QUAQUAVERSAL_PINNED
    record(5, ok, f"counts {c}, ratios {[round(r, 3) for r in ratios]}, fit {rep.fit_kind}, pinned {QUAQUAVERSAL_PINNED}")


def test_criterion_06_group_finiteness():
    t0 = time.perf_counter()
    g44 = group_ball(4, 4, 10)
    g22 = group_ball(2, 2, 10)
    g33 = group_ball(3, 3, 10)
    g34 = group_ball(3, 4, 10)
    elapsed = time.perf_counter() - t0
    ok = (
        g44[-1].closed and g44[-1].distinct_elements == 24
        and g22[-1].closed and g22[-1].distinct_elements == 4
        and not any(r.closed for r in g33) and not any(r.closed for r in g34)
        and elapsed < 60
    )
    record(
        6, ok,
        f"G(4,4) {g44[-1].distinct_elements}, G(2,2) {g22[-1].distinct_elements}, "
        f"G(3,3) {g33[-1].distinct_elements} open, G(3,4) {g34[-1].distinct_elements} open, {elapsed:.1f}s (limit 60s)",
    )


def test_criterion_07_boroczky_coordinates():
    (orig,) = disk_centers([PRIMARY], "original")
    shifted = disk_centers([PRIMARY, BinaryTile(0, 1)], "shifted")
    got = [(c.x, c.y) for c in shifted]
    ok = (orig.x, orig.y) == (Fraction(1, 2), Fraction(7, 4)) and got == [
        (Fraction(3, 5), Fraction(21, 10)),
        (Fraction(3), Fraction(21, 10)),
    ]
    record(7, ok, f"original {orig.x} + {orig.y}i, shifted {[f'{x} + {y}i' for x, y in got]}")


def test_criterion_08_density_paradox():
    # six strips (levels 0..5) and twenty top-strip cells wide
    window = (0, 1, 20 * 64, 64)
    rep = packing_report(parse_choices("LLLLL"), window)
    orig = Counter(rep.original.values())
    shifted = Counter(rep.shifted.values())
    ok = rep.tiles > 0 and set(orig) == {1} and set(shifted) == {2}
    record(8, ok, f"{rep.tiles} interior tiles, original counts {dict(orig)}, shifted counts {dict(shifted)}")


def test_criterion_09_hyperbolic_area():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        t = BinaryTile(int(rng.integers(-20, 21)), int(rng.integers(-10**6, 10**6)))
        worst = max(worst, abs(tile_area(t) - 1))
    record(9, worst <= 1e-12, f"max |area - 1| = {worst:.2e} over 100 tiles")


def test_criterion_10_kite_dart_ratio():
    counts = Counter(t.prototile_id for t in expand(get_system("kite-dart"), 12))
    ratio = counts[0] / counts[1]
    rel = abs(ratio - PHI) / PHI
    lam, _ = dominant_eigen([[2, 1], [1, 1]])
    eig_err = abs(lam - (3 + math.sqrt(5)) / 2)
    ok = rel < 0.01 and eig_err <= 1e-9
    record(10, ok, f"ratio {ratio:.10f} (rel err {rel:.2e}), eigenvalue error {eig_err:.2e}")


def test_criterion_11_determinism(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("APERIODIC_OUT_DIR", str(tmp_path))
    jobs = [
        ["stats", "quaquaversal", "--max-level", "5"],
        ["stats", "pinwheel", "--max-level", "8"],
        ["generate", "pinwheel", "--level", "5", "--format", "svg"],
        ["generate", "kite-dart", "--level", "8", "--format", "json"],
        ["generate", "quaquaversal", "--level", "3", "--format", "obj"],
    ]
    differ = []
    for job in jobs:
        blobs = []
        for tag, workers in (("a", "1"), ("b", "1"), ("c", "4")):
            out = tmp_path / f"{job[0]}-{job[1]}-{tag}"
            assert main(job + ["--workers", workers, "--out", str(out)]) == 0
            blobs.append(out.read_bytes())
        if len(set(blobs)) != 1:
            differ.append(" ".join(job))
    capsys.readouterr()
    record(11, not differ, f"{len(jobs)} commands x (2 runs + 4 workers), differing: {differ or 'none'}")
