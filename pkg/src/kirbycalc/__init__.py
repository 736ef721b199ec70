"""Exact Kirby calculus on the algebraic shadow of 4-manifold handle decompositions."""
from .errors import KirbyError
from .handlebody import (INDETERMINATE, UNKNOWN, HandleCounts, HandleDecomposition,
                         KnotTag, TwoHandle, counts, euler_characteristic, homology_h1)
from .intalg import AbelianGroup

__all__ = ["KirbyError", "INDETERMINATE", "UNKNOWN", "HandleCounts", "HandleDecomposition",
           "KnotTag", "TwoHandle", "counts", "euler_characteristic", "homology_h1", "AbelianGroup"]
__version__ = "0.1.0"
