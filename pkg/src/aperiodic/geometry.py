"""Isometries and exact orientation identities.

Convention used throughout the package: isometries act on points from the
left, and ``f.compose(g)`` (or ``compose_key2(f, g)``) applies ``g`` first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .exact import QF, Dyadic, Order, lex_compare, rational_vector, SQRT2, SQRT3

ALPHA = math.atan2(1.0, 2.0)  # pinwheel angle arctan(1/2), irrational w.r.t. pi


@dataclass(frozen=True, slots=True)
class OrientationKey2:
    """Exact element R(theta) F^r of O(2) with theta = alpha*n + 2*pi*turns/base.

    ``base`` is 4 for the pinwheel (quarter turns) and 10 for kite-dart
    half-tiles (tenth turns).  F is reflection across the horizontal axis.
    """

    alpha: int = 0
    turns: int = 0
    reflected: bool = False
    base: int = 4

    def __post_init__(self):
        if not 0 <= self.turns < self.base:
            object.__setattr__(self, "turns", self.turns % self.base)

    # `quarterTurns` in the language-neutral description
    @property
    def quarter_turns(self) -> int:
        return self.turns

    def angle(self) -> float:
        return self.alpha * ALPHA + 2.0 * math.pi * self.turns / self.base

    def matrix(self) -> np.ndarray:
        return _key2_matrix(self)

    def compose(self, other: "OrientationKey2") -> "OrientationKey2":
        return compose_key2(self, other)

    def inverse(self) -> "OrientationKey2":
        if self.reflected:
            return self
        return OrientationKey2(-self.alpha, -self.turns, False, self.base)

    def is_identity(self) -> bool:
        return self.alpha == 0 and self.turns == 0 and not self.reflected

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "turns": self.turns, "base": self.base, "reflected": self.reflected}

    @classmethod
    def from_json(cls, obj: dict) -> "OrientationKey2":
        return cls(int(obj["alpha"]), int(obj["turns"]), bool(obj["reflected"]), int(obj["base"]))


def compose_key2(f: OrientationKey2, g: OrientationKey2) -> OrientationKey2:
    if f.base != g.base:
        raise ValueError(f"cannot compose keys with bases {f.base} and {g.base}")
    s = -1 if f.reflected else 1
    return OrientationKey2(f.alpha + s * g.alpha, f.turns + s * g.turns, f.reflected != g.reflected, f.base)


@lru_cache(maxsize=None)
def _key2_matrix(key: OrientationKey2) -> np.ndarray:
    th = key.angle()
    c, s = math.cos(th), math.sin(th)
    m = np.array([[c, -s], [s, c]])
    if key.reflected:
        m = m @ np.array([[1.0, 0.0], [0.0, -1.0]])
    m.setflags(write=False)
    return m


IDENTITY_KEY2 = OrientationKey2()


@dataclass(frozen=True, slots=True)
class Isometry2:
    orientation: OrientationKey2 = IDENTITY_KEY2
    translation: tuple[float, float] = (0.0, 0.0)

    def apply(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return p @ self.orientation.matrix().T + np.asarray(self.translation)

    def compose(self, other: "Isometry2") -> "Isometry2":
        t = self.orientation.matrix() @ np.asarray(other.translation) + np.asarray(self.translation)
        return Isometry2(self.orientation.compose(other.orientation), (float(t[0]), float(t[1])))

    def inverse(self) -> "Isometry2":
        inv = self.orientation.inverse()
        t = -(inv.matrix() @ np.asarray(self.translation))
        return Isometry2(inv, (float(t[0]), float(t[1])))


class RotationQuat:
    """Unit quaternion over Q(sqrt2, sqrt3) in canonical sign.

    Canonical sign: the 16 rational coefficients (w, x, y, z each expanded in
    the basis 1, sqrt2, sqrt3, sqrt6) compare lexicographically greater than
    their negation.
    """

    __slots__ = ("w", "x", "y", "z", "_hash", "_matrix")

    def __init__(self, w, x, y, z, *, check: bool = True):
        comps = [QF.coerce(v) for v in (w, x, y, z)]
        vec = rational_vector(comps)
        if lex_compare(vec, [-v for v in vec]) == Order.LT:
            comps = [-c for c in comps]
        self.w, self.x, self.y, self.z = comps
        self._hash = None
        self._matrix = None
        if check and self.norm2() != QF(1):
            raise ValueError(f"quaternion is not unit: norm^2 = {self.norm2()}")

    def components(self) -> tuple[QF, QF, QF, QF]:
        return (self.w, self.x, self.y, self.z)

    def norm2(self) -> QF:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __eq__(self, other) -> bool:
        if not isinstance(other, RotationQuat):
            return NotImplemented
        return self.components() == other.components()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.components())
        return self._hash

    def __repr__(self) -> str:
        return f"RotationQuat({self.w}, {self.x}, {self.y}, {self.z})"

    def __mul__(self, other: "RotationQuat") -> "RotationQuat":
        return quat_mul(self, other)

    def inverse(self) -> "RotationQuat":
        return RotationQuat(self.w, -self.x, -self.y, -self.z, check=False)

    def to_float(self) -> np.ndarray:
        return np.array([float(c) for c in self.components()])

    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            w, x, y, z = self.to_float()
            m = np.array([
                [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
                [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
                [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
            ])
            m.setflags(write=False)
            self._matrix = m
        return self._matrix

    def is_identity(self) -> bool:
        return self == IDENTITY_QUAT

    def to_json(self) -> dict:
        from .exact import qf_to_json

        return {k: qf_to_json(v) for k, v in zip("wxyz", self.components())}

    @classmethod
    def from_json(cls, obj: dict) -> "RotationQuat":
        from .exact import qf_from_json

        return cls(*(qf_from_json(obj[k]) for k in "wxyz"))


@lru_cache(maxsize=1 << 16)
def quat_mul(p: RotationQuat, q: RotationQuat) -> RotationQuat:
    """Hamilton product p*q (q applied first), re-canonicalized."""
    pw, px, py, pz = p.components()
    qw, qx, qy, qz = q.components()
    return RotationQuat(
        pw * qw - px * qx - py * qy - pz * qz,
        pw * qx + px * qw + py * qz - pz * qy,
        pw * qy - px * qz + py * qw + pz * qx,
        pw * qz + px * qy - py * qx + pz * qw,
        check=False,
    )


IDENTITY_QUAT = RotationQuat(1, 0, 0, 0)

# (cos(pi/p), sin(pi/p)) for rotation angle 2*pi/p
_HALF_ANGLE = {
    1: (QF(-1), QF(0)),
    2: (QF(0), QF(1)),
    3: (QF(1, 0) / 2, SQRT3 / 2),
    4: (SQRT2 / 2, SQRT2 / 2),
    6: (SQRT3 / 2, QF(1) / 2),
}


def axis_rotation(axis: int, p: int) -> RotationQuat:
    """Exact rotation by 2*pi/p about coordinate axis 1, 2 or 3."""
    if p not in _HALF_ANGLE:
        raise ValueError(f"rotation order {p} has cos/sin outside Q(√2,√3)")
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {axis}")
    c, s = _HALF_ANGLE[p]
    v = [QF(0), QF(0), QF(0)]
    v[axis - 1] = s
    return RotationQuat(c, *v)


Q3 = axis_rotation(3, 3)  # 2pi/3 about the third axis
Q4 = axis_rotation(1, 4)  # pi/2 about the first axis
Q6 = axis_rotation(3, 6)  # pi/3 about the third axis


@dataclass(frozen=True, slots=True)
class Isometry3:
    rotation: RotationQuat = IDENTITY_QUAT
    translation: tuple[float, float, float] = (0.0, 0.0, 0.0)

    @property
    def orientation(self) -> RotationQuat:
        return self.rotation

    def apply(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return p @ self.rotation.matrix().T + np.asarray(self.translation)

    def compose(self, other: "Isometry3") -> "Isometry3":
        t = self.rotation.matrix() @ np.asarray(other.translation) + np.asarray(self.translation)
        return Isometry3(quat_mul(self.rotation, other.rotation), tuple(float(v) for v in t))

    def inverse(self) -> "Isometry3":
        inv = self.rotation.inverse()
        t = -(inv.matrix() @ np.asarray(self.translation))
        return Isometry3(inv, tuple(float(v) for v in t))


Isometry = Union[Isometry2, Isometry3]


def apply_iso(iso: Isometry, point: Sequence[float]) -> np.ndarray:
    return iso.apply(point)


@dataclass(frozen=True)
class BinaryMap:
    """Upper half-plane map z -> 2**level_shift * z + offset (offset real, dyadic)."""

    level_shift: int = 0
    offset: Dyadic = field(default_factory=Dyadic)

    def __post_init__(self):
        if not isinstance(self.offset, Dyadic):
            object.__setattr__(self, "offset", Dyadic.from_value(self.offset))

    def compose(self, other: "BinaryMap") -> "BinaryMap":
        return bin_compose(self, other)

    def inverse(self) -> "BinaryMap":
        return BinaryMap(-self.level_shift, (-self.offset).shift(-self.level_shift))

    def apply(self, z: complex) -> complex:
        return math.ldexp(1.0, self.level_shift) * z + float(self.offset)

    def apply_exact(self, x, y):
        from fractions import Fraction

        s = Fraction(2) ** self.level_shift
        return s * Fraction(x) + self.offset.to_fraction(), s * Fraction(y)


def bin_compose(f: BinaryMap, g: BinaryMap) -> BinaryMap:
    return BinaryMap(f.level_shift + g.level_shift, g.offset.shift(f.level_shift) + f.offset)
