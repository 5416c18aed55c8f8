"""Curve complexes of punctured surfaces via normal coordinates on ideal triangulations."""
from .surface import SurfaceSig

__version__ = "0.1.0"

__all__ = ["SurfaceSig", "__version__"]
