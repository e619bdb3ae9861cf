"""Exact symbolic verification of the non-standard quantum deformation of
ISO(1,1), its dual, and the associated Lie bialgebra and Poisson-Lie data."""

from .checks import CheckResult
from .coeffring import ExpPoly, Ring
from .hopfcore import CATALOG_KEYS, HopfPresentation, catalog_get
from .ncengine import TensorAlgebra, TowerPresentation

__all__ = [
    "CATALOG_KEYS",
    "CheckResult",
    "ExpPoly",
    "HopfPresentation",
    "Ring",
    "TensorAlgebra",
    "TowerPresentation",
    "catalog_get",
]
__version__ = "0.1.0"
