"""Elementary Kirby moves as integer-matrix rewrites.

A slide of handle ``i`` over handle ``j`` with sign ``s`` is the congruence
``A -> E A E^T`` where ``E`` adds ``s`` times row ``j`` to row ``i``.  Unknown
entries propagate through the arithmetic; nothing here ever turns an
Unknown into a concrete integer.
"""
from __future__ import annotations

from typing import List

from .errors import (DomainError, FramingNotUnitError, NonMeridianError,
                     StrictnessError, UnknownEntryError)
from .handlebody import UNKNOWN, HandleDecomposition, KnotTag


def _check_sign(sign: int) -> int:
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign!r}")
    return sign


def _matrix(X: HandleDecomposition) -> List[list]:
    return [list(row) for row in X.linking]


def handle_slide(X: HandleDecomposition, i: str, j: str, sign: int = 1) -> HandleDecomposition:
    """Slide 2-handle ``i`` over 2-handle ``j``.

    ``sign=+1`` band-sums with ``j`` as oriented, ``sign=-1`` with its
    reverse.  The knot type of ``i`` becomes Unknown.
    """
    _check_sign(sign)
    a, b = X.index(i), X.index(j)
    if a == b:
        raise DomainError("cannot slide a handle over itself")
    A = _matrix(X)
    n = len(A)
    # row a += sign * row b, then column a += sign * column b
    A[a] = [A[a][k] + sign * A[b][k] for k in range(n)]
    for row in A:
        row[a] = row[a] + sign * row[b]
    incidence = [list(row) for row in X.incidence]
    for row in incidence:
        row[a] += sign * row[b]
    knots = [h.knot for h in X.two_handles]
    knots[a] = KnotTag.UNKNOWN
    return X.with_data(A, incidence, knots)


def reverse_orientation(X: HandleDecomposition, label: str) -> HandleDecomposition:
    """Reverse the orientation of one attaching circle (negates its off-diagonal row)."""
    a = X.index(label)
    A = _matrix(X)
    for k in range(len(A)):
        if k != a:
            A[a][k] = -A[a][k]
            A[k][a] = -A[k][a]
    incidence = [list(row) for row in X.incidence]
    for row in incidence:
        row[a] = -row[a]
    return X.with_data(A, incidence)


def blow_up(X: HandleDecomposition, sign: int = -1, label: str = None) -> HandleDecomposition:
    """Connected sum with a (sign)-framed unknot split from everything else."""
    _check_sign(sign)
    label = label or X.fresh_label()
    A = _matrix(X)
    for row in A:
        row.append(0)
    A.append([0] * len(A) + [sign])
    incidence = [list(row) + [0] for row in X.incidence]
    knots = [h.knot for h in X.two_handles] + [KnotTag.UNKNOT]
    return X.with_data(A, incidence, knots, X.labels + [label])


def delete_two_handle(X: HandleDecomposition, label: str) -> HandleDecomposition:
    a = X.index(label)
    keep = [k for k in range(len(X.two_handles)) if k != a]
    A = [[X.linking[r][c] for c in keep] for r in keep]
    incidence = [[row[c] for c in keep] for row in X.incidence]
    return X.with_data(A, incidence, [X.two_handles[k].knot for k in keep],
                       [X.two_handles[k].label for k in keep])


def blow_down(X: HandleDecomposition, label: str, strict: bool = False) -> HandleDecomposition:
    """Remove a +-1-framed handle after sliding everything linked with it off.

    Every other handle ``j`` with ``linking(j, label) = m`` is slid over the
    blown-down handle ``|m|`` times so that its linking with it becomes 0.
    In strict mode the handle must be a certified unknot passing over no
    1-handle.
    """
    a = X.index(label)
    f = X.two_handles[a].framing
    if f is UNKNOWN or f not in (1, -1):
        raise FramingNotUnitError(f"framing of {label} is {f}, not +-1")
    if strict:
        if X.two_handles[a].knot is not KnotTag.UNKNOT:
            raise StrictnessError(f"{label} is not a certified unknot")
        if any(row[a] for row in X.incidence):
            raise StrictnessError(f"{label} runs over a 1-handle")
    for k, h in enumerate(X.two_handles):
        if k != a and X.linking[k][a] is UNKNOWN:
            raise UnknownEntryError(f"linking of {h.label} with {label} is Unknown")
    out = X
    for h in X.two_handles:
        if h.label == label:
            continue
        m = out.link(h.label, label)
        if m == 0:
            continue
        # each slide changes the linking with ``label`` by sign * f
        sign = -f if m > 0 else f
        for _ in range(abs(m)):
            out = handle_slide(out, h.label, label, sign)
    return delete_two_handle(out, label)


def cancel_12(X: HandleDecomposition, dotted: str, meridian: str) -> HandleDecomposition:
    """Cancel a dotted circle against a 2-handle running over it once.

    Every other 2-handle running over ``dotted`` is first slid over
    ``meridian`` until its incidence there is zero.  The slides' effect on
    linking numbers goes through the dotted circle and cannot be certified
    from algebraic data, so every linking entry of a slid handle becomes
    Unknown.
    """
    d = X.one_handle_index(dotted)
    k = X.index(meridian)
    e = X.incidence[d][k]
    if abs(e) != 1:
        raise NonMeridianError(f"{meridian} runs over {dotted} {e} times algebraically, not +-1")
    out = X
    slid = []
    for idx, h in enumerate(X.two_handles):
        if idx == k:
            continue
        m = out.incidence[d][out.index(h.label)]
        if m == 0:
            continue
        sign = -e if m > 0 else e
        for _ in range(abs(m)):
            out = handle_slide(out, h.label, meridian, sign)
        slid.append(h.label)

    A = _matrix(out)
    for label in slid:
        s = out.index(label)
        for t in range(len(A)):
            A[s][t] = UNKNOWN
            A[t][s] = UNKNOWN
    out = out.with_data(A)

    out = delete_two_handle(out, meridian)
    keep = [r for r in range(len(out.one_handles)) if r != d]
    return out.with_data(out.linking,
                         incidence=[out.incidence[r] for r in keep],
                         one_handles=tuple(out.one_handles[r] for r in keep))


def add_one_handle(X: HandleDecomposition, label: str = None,
                   incidence: dict = None) -> HandleDecomposition:
    """Add a dotted circle; ``incidence`` maps 2-handle labels to signed counts."""
    label = label or X.fresh_label("d")
    row = [0] * len(X.two_handles)
    for name, value in (incidence or {}).items():
        row[X.index(name)] = int(value)
    return X.with_data(X.linking, incidence=[list(r) for r in X.incidence] + [row],
                       one_handles=X.one_handles + (label,))
