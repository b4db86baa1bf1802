"""Substitution tilings with exact orientation bookkeeping, plus the hyperbolic binary tiling."""

from .catalog import SYSTEMS, get_system, make_kite_dart, make_pinwheel, make_quaquaversal, make_thue_morse, morse_label_at
from .substitution import expand, subdivide, substitution_matrix, dominant_eigen, verify_partition

__all__ = [
    "SYSTEMS",
    "get_system",
    "make_kite_dart",
    "make_pinwheel",
    "make_quaquaversal",
    "make_thue_morse",
    "morse_label_at",
    "expand",
    "subdivide",
    "substitution_matrix",
    "dominant_eigen",
    "verify_partition",
]
__version__ = "0.1.0"
