"""The four Euclidean substitution systems and the Thue-Morse closed form."""

from __future__ import annotations

import math

from .geometry import Isometry2, Isometry3, OrientationKey2, Q4, Q6, IDENTITY_QUAT, quat_mul
from .substitution import Prototile, SubstitutionRule, SubstitutionSystem

PHI = (1 + math.sqrt(5)) / 2
SQRT5 = math.sqrt(5)
SQRT3 = math.sqrt(3)

_C36 = math.cos(math.pi / 5)
_S36 = math.sin(math.pi / 5)


def make_thue_morse() -> SubstitutionSystem:
    """Unit squares a, b with a -> [[a, b], [b, a]] and b the complement."""
    square = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))
    protos = (Prototile(0, "a", square), Prototile(1, "b", square))
    cells = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0))
    flips = (0, 1, 1, 0)

    def rule(parent):
        return SubstitutionRule(parent, tuple((parent ^ f, Isometry2(OrientationKey2(), t)) for f, t in zip(flips, cells)))

    return SubstitutionSystem("thue-morse", 2, 2.0, "2", protos, (rule(0), rule(1)), "letter-only")


def morse_label_at(i: int, j: int) -> str:
    """Letter of cell (i, j) in the two-dimensional Thue-Morse array rooted at a."""
    if i < 0 or j < 0:
        raise ValueError("cell indices must be nonnegative")
    return "a" if (i.bit_count() + j.bit_count()) % 2 == 0 else "b"


def make_pinwheel() -> SubstitutionSystem:
    """Right triangle with legs 2 (along x) and 1 (along y), cut into 5 copies.

    The inflated triangle has vertices (0,0), (2*sqrt5, 0), (0, sqrt5).  The
    foot H of the altitude from the right angle splits off two copies; the
    remaining triangle is cut along its midlines and the rectangle left over
    is split along a diagonal.
    """
    s5 = SQRT5
    proto = Prototile(0, "triangle", ((0.0, 0.0), (2.0, 0.0), (0.0, 1.0)))
    h = (2 / s5, 4 / s5)
    m1 = (1 / s5, 2 / s5)
    m2 = (6 / s5, 2 / s5)
    m3 = (s5, 0.0)

    def k(alpha, turns, refl):
        return OrientationKey2(alpha, turns, refl, 4)

    children = (
        (0, Isometry2(k(-1, 3, True), h)),
        (0, Isometry2(k(-1, 0, True), m1)),
        (0, Isometry2(k(-1, 0, True), m2)),
        (0, Isometry2(k(-1, 0, False), m1)),
        (0, Isometry2(k(-1, 2, False), m2)),
    )
    return SubstitutionSystem(
        "pinwheel", 2, s5, "sqrt(5)", (proto,), (SubstitutionRule(0, children),), "key2"
    )


def make_kite_dart() -> SubstitutionSystem:
    """Half-kite and half-dart Robinson triangles with golden-ratio inflation.

    Half-kite: apex angle pi/5, legs phi, base 1.  Half-dart: angles
    pi/5, pi/5, 3pi/5 with sides 1, 1, phi.
    """
    hk = Prototile(0, "half-kite", ((0.0, 0.0), (PHI, 0.0), (PHI * _C36, PHI * _S36)))
    hd = Prototile(1, "half-dart", ((0.0, 0.0), (PHI, 0.0), (_C36, _S36)))

    def k(turns, refl=False):
        return OrientationKey2(0, turns, refl, 10)

    apex = (PHI * PHI * _C36, PHI * PHI * _S36)
    hk_rule = SubstitutionRule(
        0,
        (
            (0, Isometry2(k(8, True), apex)),
            (0, Isometry2(k(6), apex)),
            (1, Isometry2(k(0), (0.0, 0.0))),
        ),
    )
    hd_rule = SubstitutionRule(
        1,
        (
            (0, Isometry2(k(0), (0.0, 0.0))),
            (1, Isometry2(k(4), (PHI * PHI, 0.0))),
        ),
    )
    return SubstitutionSystem(
        "kite-dart", 2, PHI, "(1+sqrt(5))/2", (hk, hd), (hk_rule, hd_rule), "key2", key_base=10
    )


def make_quaquaversal() -> SubstitutionSystem:
    """Triangular prism over the 30-60-90 triangle (0,0), (sqrt3,0), (0,1), height 1.

    The doubled prism splits into eight unit copies.  Rotations are exact
    quaternions built from the quarter turn about x and the sixth turn about z.
    """
    proto = Prototile(0, "prism", ((0.0, 0.0), (SQRT3, 0.0), (0.0, 1.0)), height=1.0)
    ident = IDENTITY_QUAT
    q4i = Q4.inverse()
    children = (
        (0, Isometry3(ident, (SQRT3, 0.0, 0.0))),
        (0, Isometry3(ident, (0.0, 1.0, 1.0))),
        (0, Isometry3(ident, (SQRT3, 0.0, 1.0))),
        (0, Isometry3(Q4, (0.0, 1.0, 0.0))),
        (0, Isometry3(ident, (0.0, 1.0, 0.0))),
        (0, Isometry3(quat_mul(q4i, Q6), (SQRT3 / 2, 0.0, 1.5))),
        (0, Isometry3(q4i, (0.0, 0.0, 2.0))),
        (0, Isometry3(quat_mul(Q4, Q6.inverse()), (SQRT3 / 2, 1.0, 1.5))),
    )
    return SubstitutionSystem(
        "quaquaversal", 3, 2.0, "2", (proto,), (SubstitutionRule(0, children),), "quat3"
    )


SYSTEMS = {
    "thue-morse": make_thue_morse,
    "pinwheel": make_pinwheel,
    "kite-dart": make_kite_dart,
    "quaquaversal": make_quaquaversal,
}


def get_system(name: str) -> SubstitutionSystem:
    try:
        return SYSTEMS[name]()
    except KeyError:
        raise KeyError(f"unknown system {name!r}; choose from {', '.join(SYSTEMS)}") from None
