"""Handle decompositions of 4-manifolds as framed-link data.

A :class:`HandleDecomposition` records handle counts together with the
algebraic shadow of a Kirby diagram: the linking matrix of the 2-handles
(framings on the diagonal) and the signed incidence of each 2-handle over
each dotted circle.  Entries the available data cannot determine are the
singleton :data:`UNKNOWN`.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import intalg
from .errors import (DomainError, DuplicateFourHandleError, DuplicateLabelError,
                     HasOneHandlesError, HasUpperHandlesError, MissingLabelError,
                     UnknownLinkingError)
from .intalg import AbelianGroup


class _Unknown:
    """An integer the data does not determine.

    Arithmetic absorbs into Unknown, and comparisons never succeed: even
    ``UNKNOWN == UNKNOWN`` is False.  Use :func:`is_unknown` to test for it.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNKNOWN"

    def __str__(self):
        return "?"

    def _absorb(self, *_):
        return self

    __add__ = __radd__ = __sub__ = __rsub__ = _absorb
    __mul__ = __rmul__ = __floordiv__ = __rfloordiv__ = _absorb

    def __neg__(self):
        return self

    __pos__ = __abs__ = __neg__

    def __eq__(self, other):
        return False

    def __ne__(self, other):
        return True

    def __hash__(self):
        return id(self)

    def __bool__(self):
        raise TypeError("the truth value of an Unknown integer is indeterminate")

    def __reduce__(self):
        return (_Unknown, ())


UNKNOWN = _Unknown()
ExtInt = Union[int, _Unknown]


def is_unknown(x) -> bool:
    return x is UNKNOWN


def is_known(x) -> bool:
    return x is not UNKNOWN


class _Indeterminate:
    """Returned by invariants whose value the known data does not fix."""

    def __repr__(self):
        return "INDETERMINATE"

    __str__ = __repr__

    def __reduce__(self):
        return "INDETERMINATE"


INDETERMINATE = _Indeterminate()


class KnotTag(enum.Enum):
    UNKNOT = "unknot"
    RIGHT_TREFOIL = "right_trefoil"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TwoHandle:
    label: str
    framing: ExtInt
    knot: KnotTag = KnotTag.UNKNOT


@dataclass(frozen=True)
class HandleCounts:
    h0: int
    h1: int
    h2: int
    h3: int
    h4: int

    def __post_init__(self):
        if min(self.as_tuple()) < 0:
            raise DomainError(f"negative handle count in {self.as_tuple()}")

    def as_tuple(self) -> Tuple[int, int, int, int, int]:
        return (self.h0, self.h1, self.h2, self.h3, self.h4)

    @property
    def chi(self) -> int:
        return self.h0 - self.h1 + self.h2 - self.h3 + self.h4

    def union_expression(self) -> str:
        """Render as e.g. ``one 0-handle ∪ 12 2-handles ∪ two 3-handles ∪ one 4-handle``."""
        words = {1: "one", 2: "two", 3: "three"}
        parts = []
        for index, count in enumerate(self.as_tuple()):
            if count:
                noun = f"{index}-handle" + ("s" if count != 1 else "")
                parts.append(f"{words.get(count, count)} {noun}")
        return " ∪ ".join(parts) if parts else "empty"


def _entry_key(x):
    return "?" if x is UNKNOWN else x


@dataclass(frozen=True, eq=False)
class HandleDecomposition:
    """Immutable handle decomposition.  Every move returns a new value.

    ``linking[i][j]`` is indexed in the order of ``two_handles`` and its
    diagonal must equal the framings.  ``incidence[d][k]`` is the signed
    algebraic number of times 2-handle ``k`` runs over dotted circle ``d``.
    """

    h0: int = 1
    one_handles: Tuple[str, ...] = ()
    two_handles: Tuple[TwoHandle, ...] = ()
    linking: Tuple[Tuple[ExtInt, ...], ...] = ()
    incidence: Tuple[Tuple[int, ...], ...] = field(default=None)
    h3: int = 0
    h4: int = 0

    def __post_init__(self):
        set_ = lambda name, value: object.__setattr__(self, name, value)
        set_("one_handles", tuple(self.one_handles))
        set_("two_handles", tuple(self.two_handles))
        set_("linking", tuple(tuple(row) for row in self.linking))
        if self.incidence is None:
            set_("incidence", tuple((0,) * len(self.two_handles) for _ in self.one_handles))
        else:
            set_("incidence", tuple(tuple(int(x) for x in row) for row in self.incidence))

        for name in ("h0", "h3", "h4"):
            if isinstance(getattr(self, name), bool) or not isinstance(getattr(self, name), int):
                raise DomainError(f"{name} must be an integer")
        if self.h0 < 1 or min(self.h3, self.h4) < 0:
            raise DomainError("need h0 >= 1 and non-negative h3, h4")
        labels = [h.label for h in self.two_handles] + list(self.one_handles)
        if len(set(labels)) != len(labels):
            raise DuplicateLabelError(f"labels must be unique, got {labels}")
        n = len(self.two_handles)
        if len(self.linking) != n or any(len(row) != n for row in self.linking):
            raise DomainError(f"linking matrix must be {n}x{n}")
        for i in range(n):
            for j in range(i + 1, n):
                a, b = self.linking[i][j], self.linking[j][i]
                if (a is UNKNOWN) != (b is UNKNOWN) or (a is not UNKNOWN and a != b):
                    raise DomainError("linking matrix must be symmetric")
            f, d = self.two_handles[i].framing, self.linking[i][i]
            if (f is UNKNOWN) != (d is UNKNOWN) or (f is not UNKNOWN and f != d):
                raise DomainError(f"framing of {self.two_handles[i].label} disagrees with linking diagonal")
        if len(self.incidence) != len(self.one_handles) or any(
                len(row) != n for row in self.incidence):
            raise DomainError(f"incidence matrix must be {len(self.one_handles)}x{n}")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_linking(cls, linking: Sequence[Sequence[ExtInt]], labels: Sequence[str] = None,
                     knots: Sequence[KnotTag] = None, **kwargs) -> "HandleDecomposition":
        """Build from a linking matrix, taking framings off the diagonal."""
        n = len(linking)
        labels = list(labels) if labels is not None else [f"k{i + 1}" for i in range(n)]
        knots = list(knots) if knots is not None else [KnotTag.UNKNOT] * n
        handles = tuple(TwoHandle(labels[i], linking[i][i], knots[i]) for i in range(n))
        return cls(two_handles=handles, linking=linking, **kwargs)

    def _with(self, **changes) -> "HandleDecomposition":
        values = dict(h0=self.h0, one_handles=self.one_handles, two_handles=self.two_handles,
                      linking=self.linking, incidence=self.incidence, h3=self.h3, h4=self.h4)
        values.update(changes)
        return HandleDecomposition(**values)

    def with_data(self, linking, incidence=None, knots=None, labels=None,
                  one_handles=None) -> "HandleDecomposition":
        """Replace 2-handle data wholesale; framings are read off ``linking``."""
        labels = self.labels if labels is None else list(labels)
        knots = [h.knot for h in self.two_handles] if knots is None else list(knots)
        handles = tuple(TwoHandle(labels[i], linking[i][i], knots[i]) for i in range(len(labels)))
        return self._with(two_handles=handles, linking=linking,
                          incidence=self.incidence if incidence is None else incidence,
                          one_handles=self.one_handles if one_handles is None else one_handles)

    # -- lookups ----------------------------------------------------------------

    @property
    def labels(self) -> List[str]:
        return [h.label for h in self.two_handles]

    def index(self, label: str) -> int:
        for i, h in enumerate(self.two_handles):
            if h.label == label:
                return i
        raise MissingLabelError(label)

    def one_handle_index(self, label: str) -> int:
        try:
            return self.one_handles.index(label)
        except ValueError:
            raise MissingLabelError(label) from None

    def handle(self, label: str) -> TwoHandle:
        return self.two_handles[self.index(label)]

    def link(self, a: str, b: str) -> ExtInt:
        return self.linking[self.index(a)][self.index(b)]

    def submatrix(self, labels: Sequence[str]) -> List[List[ExtInt]]:
        idx = [self.index(x) for x in labels]
        return [[self.linking[i][j] for j in idx] for i in idx]

    @property
    def fully_known(self) -> bool:
        return all(x is not UNKNOWN for row in self.linking for x in row)

    def known_linking(self) -> Optional[List[List[int]]]:
        """The linking matrix as plain ints, or None if any entry is Unknown."""
        return [list(row) for row in self.linking] if self.fully_known else None

    def fresh_label(self, prefix: str = "k") -> str:
        taken = set(self.labels) | set(self.one_handles)
        n = 1
        while f"{prefix}{n}" in taken:
            n += 1
        return f"{prefix}{n}"

    # -- comparison ---------------------------------------------------------------

    def _key(self):
        return (self.h0, self.one_handles,
                tuple((h.label, _entry_key(h.framing), h.knot) for h in self.two_handles),
                tuple(tuple(_entry_key(x) for x in row) for row in self.linking),
                self.incidence, self.h3, self.h4)

    def __eq__(self, other):
        # structural equality: two Unknown entries in the same slot agree
        if not isinstance(other, HandleDecomposition):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (f"HandleDecomposition(counts={counts(self).as_tuple()}, "
                f"labels={self.labels}, one_handles={list(self.one_handles)})")


def empty_decomposition() -> HandleDecomposition:
    return HandleDecomposition()


# ---------------------------------------------------------------------------
# Invariants


def counts(X: HandleDecomposition) -> HandleCounts:
    return HandleCounts(X.h0, len(X.one_handles), len(X.two_handles), X.h3, X.h4)


def euler_characteristic(X: HandleDecomposition) -> int:
    return counts(X).chi


def add_three_handles(X: HandleDecomposition, k: int) -> HandleDecomposition:
    if k < 0:
        raise DomainError("cannot add a negative number of 3-handles")
    return X._with(h3=X.h3 + k)


def add_four_handle(X: HandleDecomposition) -> HandleDecomposition:
    if X.h4:
        raise DuplicateFourHandleError("decomposition already has a 4-handle")
    return X._with(h4=1)


def homology_h1(X: HandleDecomposition) -> AbelianGroup:
    """H1 of the 4-manifold: cokernel of the 2-handle -> 1-handle incidence map."""
    if not X.one_handles:
        return AbelianGroup()
    return intalg.cokernel([list(row) for row in X.incidence], rows=len(X.one_handles))


def _require_closed_form(X: HandleDecomposition) -> List[List[int]]:
    if X.one_handles:
        raise HasOneHandlesError("boundary invariants need a decomposition without 1-handles")
    if X.h3 or X.h4:
        raise HasUpperHandlesError("boundary invariants need a decomposition without 3- or 4-handles")
    A = X.known_linking()
    if A is None:
        raise UnknownLinkingError("linking matrix has Unknown entries")
    return A


def boundary_h1_order(X: HandleDecomposition):
    """``|H1(boundary)| = |det(linking)|``, or INDETERMINATE when the form is degenerate."""
    A = _require_closed_form(X)
    det = intalg.determinant(A)
    return abs(det) if det else INDETERMINATE


def linking_determinant(X: HandleDecomposition):
    A = X.known_linking()
    return INDETERMINATE if A is None else intalg.determinant(A)


def linking_signature(X: HandleDecomposition):
    A = X.known_linking()
    return INDETERMINATE if A is None else intalg.signature(A)


# ---------------------------------------------------------------------------
# Serialization
#
# JSON object with keys h0, one_handles, two_handles, linking, incidence, h3,
# h4.  two_handles is a list of [label, framing, knot] triples; knot is one of
# "unknot", "right_trefoil", "unknown"; any Unknown integer is the string "?".

FORMAT_KEYS = ("h0", "one_handles", "two_handles", "linking", "incidence", "h3", "h4")


def _encode(x):
    return "?" if x is UNKNOWN else x


def _decode(x) -> ExtInt:
    if x == "?":
        return UNKNOWN
    if isinstance(x, bool) or not isinstance(x, int):
        raise DomainError(f"expected an integer or '?', got {x!r}")
    return x


def _decode_int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DomainError(f"incidence entries must be integers, got {x!r}")
    return x


def to_dict(X: HandleDecomposition) -> Dict:
    return {
        "h0": X.h0,
        "one_handles": list(X.one_handles),
        "two_handles": [[h.label, _encode(h.framing), h.knot.value] for h in X.two_handles],
        "linking": [[_encode(x) for x in row] for row in X.linking],
        "incidence": [list(row) for row in X.incidence],
        "h3": X.h3,
        "h4": X.h4,
    }


def from_dict(data: Dict) -> HandleDecomposition:
    missing = [k for k in FORMAT_KEYS if k not in data]
    if missing:
        raise DomainError(f"decomposition is missing fields {missing}")
    try:
        handles = tuple(TwoHandle(str(label), _decode(framing), KnotTag(knot))
                        for label, framing, knot in data["two_handles"])
    except (TypeError, ValueError) as exc:
        raise DomainError(f"malformed two_handles entry: {exc}") from None
    return HandleDecomposition(
        h0=data["h0"],
        one_handles=tuple(str(x) for x in data["one_handles"]),
        two_handles=handles,
        linking=[[_decode(x) for x in row] for row in data["linking"]],
        incidence=[[_decode_int(x) for x in row] for row in data["incidence"]],
        h3=data["h3"],
        h4=data["h4"],
    )


def dumps(X: HandleDecomposition) -> str:
    d = to_dict(X)
    # one matrix row per line keeps files diffable
    lines = ["{"]
    items = list(d.items())
    for n, (key, value) in enumerate(items):
        comma = "," if n < len(items) - 1 else ""
        if key in ("two_handles", "linking", "incidence") and value:
            rows = ",\n".join("    " + json.dumps(row, ensure_ascii=False) for row in value)
            lines.append(f'  "{key}": [\n{rows}\n  ]{comma}')
        else:
            lines.append(f'  "{key}": {json.dumps(value)}{comma}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> HandleDecomposition:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"not a decomposition file: {exc}") from None
    if not isinstance(data, dict):
        raise DomainError("decomposition file must hold a JSON object")
    return from_dict(data)


def load(path) -> HandleDecomposition:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(X: HandleDecomposition, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(X))
