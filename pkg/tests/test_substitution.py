import math
import random

import numpy as np
import pytest

from aperiodic.geometry import Isometry2, Isometry3, OrientationKey2
from aperiodic.shapes import Box
from aperiodic.substitution import (
    ConvergenceError,
    Prototile,
    SubstitutionError,
    SubstitutionRule,
    SubstitutionSystem,
    dominant_eigen,
    expand,
    placement_from_address,
    predicted_counts,
    root_instance,
    subdivide,
    substitution_matrix,
    tile_intersects_box,
    tile_vertices,
    verify_partition,
)


def test_subdivide_child_counts(pinwheel, thue_morse, quaquaversal):
    for system, n in ((pinwheel, 5), (thue_morse, 4), (quaquaversal, 8)):
        kids = subdivide(root_instance(system, 1), system)
        assert len(kids) == n
        assert [k.address for k in kids] == [(i,) for i in range(n)]
        assert all(math.isclose(k.scale, 1.0) for k in kids)


def test_subdivide_missing_rule():
    sq = ((0, 0), (1, 0), (1, 1), (0, 1))
    system = SubstitutionSystem(
        "partial", 2, 2.0, "2", (Prototile(0, "a", sq), Prototile(1, "b", sq)),
        (SubstitutionRule(0, tuple((0, Isometry2(OrientationKey2(), t)) for t in ((0, 0), (1, 0), (0, 1), (1, 1)))),),
        "letter-only",
    )
    inst = root_instance(system, 1, root=1)
    with pytest.raises(SubstitutionError):
        subdivide(inst, system)


def test_system_validation():
    sq = ((0, 0), (1, 0), (1, 1), (0, 1))
    with pytest.raises(SubstitutionError):
        SubstitutionSystem("bad", 2, 1.0, "1", (Prototile(0, "a", sq),), (), "letter-only")
    with pytest.raises(SubstitutionError):
        SubstitutionSystem("bad", 2, 2.0, "2", (Prototile(0, "a", sq),), (SubstitutionRule(0, ((3, Isometry2()),)),), "letter-only")
    with pytest.raises(SubstitutionError):
        Prototile(0, "cw", ((0, 0), (0, 1), (1, 0)))


def test_expand_examples(pinwheel, quaquaversal, kite_dart):
    assert sum(1 for _ in expand(pinwheel, 3)) == 125
    assert sum(1 for _ in expand(quaquaversal, 2)) == 64
    for system in (pinwheel, quaquaversal, kite_dart):
        (only,) = list(expand(system, 0))
        assert only.address == ()
        assert only.placement.orientation.is_identity()
        assert np.allclose(only.placement.translation, 0)
    with pytest.raises(ValueError):
        list(expand(pinwheel, -1))


def test_substitution_matrix_examples(pinwheel, kite_dart, thue_morse):
    assert substitution_matrix(pinwheel).tolist() == [[5]]
    assert substitution_matrix(kite_dart).tolist() == [[2, 1], [1, 1]]
    assert substitution_matrix(thue_morse).tolist() == [[2, 2], [2, 2]]


def test_count_law_small(kite_dart, thue_morse):
    for system in (kite_dart, thue_morse):
        for n in range(7):
            tiles = list(expand(system, n))
            by_type = np.bincount([t.prototile_id for t in tiles], minlength=len(system.prototiles))
            assert by_type.tolist() == [int(v) for v in predicted_counts(system, n)]


def test_dominant_eigen_examples():
    lam, v = dominant_eigen([[5]])
    assert lam == pytest.approx(5)
    lam, v = dominant_eigen([[2, 1], [1, 1]])
    assert abs(lam - (3 + math.sqrt(5)) / 2) < 1e-9
    assert v[0] / v[1] == pytest.approx((1 + math.sqrt(5)) / 2, rel=1e-9)
    lam, _ = dominant_eigen([[2, 2], [2, 2]])
    assert lam == pytest.approx(4)


def test_dominant_eigen_matches_area_scaling(pinwheel, quaquaversal, kite_dart):
    for s in (pinwheel, quaquaversal, kite_dart):
        lam, _ = dominant_eigen(substitution_matrix(s))
        assert lam == pytest.approx(s.expansion_ratio ** s.dimension, rel=1e-9)


def test_dominant_eigen_errors():
    with pytest.raises(ConvergenceError):
        dominant_eigen([[0, 2], [1, 0]], max_iter=50)
    with pytest.raises(ValueError):
        dominant_eigen([[-1]])


def test_verify_partition_examples(pinwheel, quaquaversal):
    rep = verify_partition(pinwheel, 0, 100_000, 1e-9)
    assert abs(rep.area_residual) <= 1e-12
    assert rep.multiplicity_violations == 0
    rep = verify_partition(quaquaversal, 0, 20_000, 1e-9)
    assert abs(rep.area_residual) <= 1e-12
    assert rep.multiplicity_violations == 0
    with pytest.raises(ValueError):
        verify_partition(pinwheel, 0, 0, 1e-9)


def test_verify_partition_detects_overlap(corrupted_pinwheel):
    rep = verify_partition(corrupted_pinwheel, 0, 20_000, 1e-9)
    assert rep.multiplicity_violations > 0
    assert not rep.passed(1e-9)


def test_verify_partition_reports_degenerate():
    flat = Prototile(0, "flat", ((0, 0), (1, 0), (0, 1)), height=1e-12)
    system = SubstitutionSystem(
        "flat", 3, 2.0, "2", (flat,), (SubstitutionRule(0, tuple((0, Isometry3()) for _ in range(8))),), "quat3"
    )
    rep = verify_partition(system, 0, 10, 1e-9)
    assert rep.degenerate
    assert not rep.passed(1e-9)


def test_verify_partition_seeded_and_worker_independent(pinwheel):
    a = verify_partition(pinwheel, 0, 60_000, 1e-9, seed=7, workers=1)
    b = verify_partition(pinwheel, 0, 60_000, 1e-9, seed=7, workers=3)
    assert (a.samples, a.rejected, a.multiplicity_violations) == (b.samples, b.rejected, b.multiplicity_violations)


def test_window_soundness_pinwheel(pinwheel):
    rng = random.Random(3)
    for level in range(1, 6):
        full = list(expand(pinwheel, level))
        pts = np.array([t.placement.translation for t in full])
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        for _ in range(3):
            x = sorted(rng.uniform(lo[0] - 1, hi[0] + 1) for _ in range(2))
            y = sorted(rng.uniform(lo[1] - 1, hi[1] + 1) for _ in range(2))
            box = Box((x[0], y[0]), (x[1], y[1]))
            want = {t.address for t in full if tile_intersects_box(pinwheel, t, box)}
            got = {t.address for t in expand(pinwheel, level, window=box)}
            assert got == want


def test_window_soundness_quaquaversal(quaquaversal):
    full = list(expand(quaquaversal, 3))
    box = Box((1.0, 1.0, 1.0), (4.0, 3.0, 5.0))
    want = {t.address for t in full if tile_intersects_box(quaquaversal, t, box)}
    got = {t.address for t in expand(quaquaversal, 3, window=box)}
    assert got == want and 0 < len(got) < len(full)


def test_window_touching_counts(thue_morse):
    # a degenerate box on a shared edge touches tiles on both sides
    box = Box((1.0, 0.2), (1.0, 0.3))
    got = {t.address for t in expand(thue_morse, 1, window=box)}
    assert got == {(0,), (1,)}


def test_address_consistency(pinwheel, quaquaversal, kite_dart):
    for system, level in ((pinwheel, 4), (quaquaversal, 3), (kite_dart, 6)):
        lam = system.expansion_ratio
        for t in list(expand(system, level))[::7]:
            pid, pl = placement_from_address(system, level, t.address)
            assert pid == t.prototile_id
            assert pl.orientation == t.placement.orientation
            assert np.allclose(pl.translation, t.placement.translation, atol=1e-9)
            # independent route: push the prototile through each rule map x -> iso(x) / lam
            pts = system.prototile(pid).solid_vertices
            node = 0
            chain = []
            for idx in t.address:
                cid, iso = system.rule_for(node).children[idx]
                chain.append(iso)
                node = cid
            for iso in reversed(chain):
                pts = iso.apply(pts) / lam
            assert np.allclose(pts * lam**level, tile_vertices(system, t), atol=1e-9)


def test_expand_deterministic_across_workers(pinwheel, quaquaversal):
    for system, level in ((pinwheel, 5), (quaquaversal, 3)):
        one = [(t.address, t.placement) for t in expand(system, level)]
        many = [(t.address, t.placement) for t in expand(system, level, workers=3)]
        assert one == many


def test_expand_window_with_workers(pinwheel):
    box = Box((0.0, 0.0), (20.0, 10.0))
    one = [t.address for t in expand(pinwheel, 5, window=box)]
    many = [t.address for t in expand(pinwheel, 5, window=box, workers=2)]
    assert one == many
