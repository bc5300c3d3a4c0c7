"""Neutral Kahler geometry of the space of oriented geodesics of hyperbolic 3-space.

The library models oriented geodesics by pairs of extended complex numbers,
equips their four-dimensional space with its compatible complex structure,
symplectic form and neutral metric, computes the optical scalars of geodesic
congruences, reconstructs orthogonal surfaces of twist-free congruences, and
verifies numerically that those surfaces are Weingarten exactly when the
metric induced on the congruence is flat.
"""

from . import catalog, congruence, exprdsl, geodesics, induced, kahler, models, surfaces
from .errors import GeometryError

__all__ = [
    "GeometryError",
    "catalog",
    "congruence",
    "exprdsl",
    "geodesics",
    "induced",
    "kahler",
    "models",
    "surfaces",
]

__version__ = "0.1.0"
