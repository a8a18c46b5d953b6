"""Radial harmonic analysis on affine buildings.

The building itself is never materialized: every kernel of two special
vertices is represented radially, as a finitely supported function of the
vectorial distance in the dominant coweight cone.
"""

from buildingwave.rootsys import (
    CartanType,
    Coweight,
    CorootVector,
    RootDatum,
    RootSystemError,
    build_root_system,
    root_system,
)

__all__ = [
    "CartanType",
    "Coweight",
    "CorootVector",
    "RootDatum",
    "RootSystemError",
    "build_root_system",
    "root_system",
]

__version__ = "0.1.0"
