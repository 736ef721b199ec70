"""One-stop invariant summary used by the interpreter and the command line."""
from __future__ import annotations

from typing import Dict

from .errors import BoundaryPreconditionError
from .handlebody import (INDETERMINATE, HandleDecomposition, boundary_h1_order, counts,
                         homology_h1, linking_determinant, linking_signature)
from .plumbing import boundary_lens_space


def summary(X: HandleDecomposition) -> Dict:
    c = counts(X)
    det = linking_determinant(X)
    sig = linking_signature(X)
    try:
        order = boundary_h1_order(X)
    except BoundaryPreconditionError:
        order = None
    lens = boundary_lens_space(X)
    return {
        "counts": list(c.as_tuple()),
        "chi": c.chi,
        "h1": str(homology_h1(X)),
        "det": None if det is INDETERMINATE else det,
        "signature": None if sig is INDETERMINATE else list(sig),
        "boundary_h1_order": None if order is None or order is INDETERMINATE else order,
        "boundary_lens_space": None if lens is None else str(lens),
    }


def format_summary(info: Dict) -> str:
    def show(value):
        if value is None:
            return "indeterminate"
        if isinstance(value, list):
            return "(" + ", ".join(map(str, value)) + ")"
        return str(value)

    lines = [
        f"counts (h0,h1,h2,h3,h4): {show(info['counts'])}",
        f"euler characteristic: {info['chi']}",
        f"H1: {info['h1']}",
        f"det(linking): {show(info['det'])}",
        f"signature (+,0,-): {show(info['signature'])}",
    ]
    if info["boundary_h1_order"] is not None:
        lines.append(f"|H1(boundary)|: {info['boundary_h1_order']}")
    if info["boundary_lens_space"] is not None:
        lines.append(f"boundary: {info['boundary_lens_space']}")
    return "\n".join(lines)
