"""Cutting blocking sets, minimal codes and higgledy-piggledy sets in PG(N, q)."""

__version__ = "0.1.0"

from .gf import Field, make_field  # noqa: E402
from .pg import Geometry, Subspace, gaussian_binomial, theta  # noqa: E402
from .cutcheck import LineSet, PointSet, Verdict, Witness  # noqa: E402

__all__ = [
    "Field",
    "Geometry",
    "LineSet",
    "PointSet",
    "Subspace",
    "Verdict",
    "Witness",
    "__version__",
    "gaussian_binomial",
    "make_field",
    "theta",
]
