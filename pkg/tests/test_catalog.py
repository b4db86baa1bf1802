import math

import numpy as np
import pytest

from aperiodic.analysis import orientation_states
from aperiodic.catalog import PHI, SYSTEMS, get_system, morse_label_at
from aperiodic.exact import QF
from aperiodic.geometry import Q4, Q6, IDENTITY_QUAT, RotationQuat
from aperiodic.substitution import expand, verify_partition


def letter_grid(system, level):
    grid = {}
    for t in expand(system, level):
        x, y = (int(round(v)) for v in t.placement.translation)
        grid[(x, y)] = system.prototile(t.prototile_id).label
    return grid


def test_morse_label_examples():
    assert morse_label_at(0, 0) == "a"
    assert "".join(morse_label_at(i, 0) for i in range(16)) == "abbabaabbaababba"
    assert morse_label_at(3, 5) == "a"
    with pytest.raises(ValueError):
        morse_label_at(-1, 0)


def test_thue_morse_level1_block(thue_morse):
    assert letter_grid(thue_morse, 1) == {(0, 0): "a", (1, 0): "b", (0, 1): "b", (1, 1): "a"}
    assert sum(1 for _ in expand(thue_morse, 6)) == 4096


def test_thue_morse_matches_popcount(thue_morse):
    for n in range(7):
        grid = letter_grid(thue_morse, n)
        assert len(grid) == 4**n
        assert all(grid[(i, j)] == morse_label_at(i, j) for i in range(2**n) for j in range(2**n))


def test_morse_substitution_on_words():
    # iterating a -> ab, b -> ba reproduces the first row
    w = "a"
    for _ in range(4):
        w = "".join("ab" if c == "a" else "ba" for c in w)
    assert w == "".join(morse_label_at(i, 0) for i in range(16))


def test_pinwheel_rule(pinwheel):
    (rule,) = pinwheel.rules
    assert len(rule.children) == 5
    assert any(iso.orientation.alpha != 0 for _, iso in rule.children)
    assert any(iso.orientation.reflected for _, iso in rule.children)
    assert any(not iso.orientation.reflected for _, iso in rule.children)
    assert pinwheel.expansion_ratio == pytest.approx(math.sqrt(5))
    assert sum(1 for _ in expand(pinwheel, 4)) == 625


def test_pinwheel_linear_envelope(pinwheel):
    for n in range(1, 9):
        assert all(abs(o.alpha) <= n for _, o in orientation_states(pinwheel, n))


def test_kite_dart_rule(kite_dart):
    assert [p.label for p in kite_dart.prototiles] == ["half-kite", "half-dart"]
    assert kite_dart.expansion_ratio == pytest.approx(PHI)
    hk = kite_dart.rule_for(0)
    assert len(hk.children) == 3
    for _, iso in hk.children + kite_dart.rule_for(1).children:
        assert iso.orientation.alpha == 0 and iso.orientation.base == 10
    assert sum(1 for _ in expand(kite_dart, 1)) == 3


def test_kite_dart_ratio_converges_monotonically(kite_dart):
    errs = []
    for n in range(6, 13):
        ids = np.bincount([t.prototile_id for t in expand(kite_dart, n)], minlength=2)
        errs.append(abs(ids[0] / ids[1] - PHI))
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] / PHI < 0.01


def test_quaquaversal_rule(quaquaversal):
    (rule,) = quaquaversal.rules
    assert len(rule.children) == 8
    allowed = {IDENTITY_QUAT, Q4, Q4.inverse(), Q4.inverse() * Q6, Q4 * Q6.inverse()}
    for _, iso in rule.children:
        q = iso.rotation
        assert q in allowed
        assert all(isinstance(c, QF) for c in q.components())
        assert q.norm2() == QF(1)
    assert sum(1 for _ in expand(quaquaversal, 3)) == 512


def test_quaquaversal_child_rotations_pinned(quaquaversal):
    s2, s6 = QF(0, 1) / 4, QF(0, 0, 0, 1) / 4
    rots = {iso.rotation for _, iso in quaquaversal.rules[0].children}
    assert RotationQuat(s6, -s6, s2, s2) in rots
    assert RotationQuat(s6, s6, s2, -s2) in rots


@pytest.mark.parametrize("name", sorted(SYSTEMS))
def test_every_system_partitions(name):
    system = get_system(name)
    for p in system.prototiles:
        rep = verify_partition(system, p.id, 100_000, 1e-9)
        assert rep.passed(1e-9), rep


def test_constructors_are_pure():
    assert get_system("pinwheel") == get_system("pinwheel")
    with pytest.raises(KeyError):
        get_system("penrose-rhomb")
