"""Rational blow-down and logarithmic transforms, with certificates for elliptic surfaces.

The composite operations here act on the algebraic shadow of a Kirby
diagram.  Whatever the shadow cannot certify (framings fixed only by a
picture, knot types after band sums) is carried as Unknown, and every
pipeline returns a :class:`Certificate` listing each check it made.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Sequence, Tuple

from . import intalg
from .errors import ConventionError, DomainError, ShapeError, UnknownEntryError
from .handlebody import (UNKNOWN, HandleCounts, HandleDecomposition, KnotTag,
                         counts, euler_characteristic, homology_h1)
from .moves import add_one_handle, blow_up, cancel_12, delete_two_handle, handle_slide
from .plumbing import LensSpace, b_p, c_p, lens_space_of_chain

PROVED_PAIRS = ((2, 3), (2, 5), (3, 4), (4, 5))
PROVED_MULTIPLICITIES = (2, 3, 4)

PASS, FAIL, INDETERMINATE = "pass", "fail", "indeterminate"


# ---------------------------------------------------------------------------
# Certificates


@dataclass(frozen=True)
class Check:
    """One verified claim.  ``source`` says where the expected value comes from:
    ``published`` (a stated handle-count or boundary result), ``derived``
    (computed independently here) or ``structural`` (a precondition)."""

    name: str
    status: str
    expected: object = None
    actual: object = None
    source: str = "derived"

    def to_dict(self) -> Dict:
        return {"name": self.name, "status": self.status, "expected": _jsonable(self.expected),
                "actual": _jsonable(self.actual), "source": self.source}


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if x is None or isinstance(x, (int, str, bool)):
        return x
    return str(x)


def check(name: str, expected, actual, source: str = "derived") -> Check:
    return Check(name, PASS if expected == actual else FAIL, expected, actual, source)


@dataclass(frozen=True)
class Certificate:
    construction: Tuple[str, ...]
    counts: HandleCounts
    chi: int
    checks: Tuple[Check, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "construction", tuple(self.construction))
        object.__setattr__(self, "checks", tuple(self.checks))
        if self.chi != self.counts.chi:
            raise DomainError(f"certificate chi {self.chi} disagrees with counts {self.counts.as_tuple()}")

    @property
    def passed(self) -> bool:
        return all(c.status == PASS for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if c.status != PASS]

    def to_dict(self) -> Dict:
        return {
            "construction": list(self.construction),
            "counts": list(self.counts.as_tuple()),
            "chi": self.chi,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = ["construction:"]
        lines += [f"  {n + 1}. {step}" for n, step in enumerate(self.construction)]
        lines.append(f"result: {self.counts.union_expression()}")
        lines.append(f"counts (h0,h1,h2,h3,h4) = {self.counts.as_tuple()}")
        lines.append(f"euler characteristic = {self.chi}")
        lines.append("checks:")
        for c in self.checks:
            lines.append(f"  [{c.status.upper():>13}] {c.name}: expected {c.expected}, "
                         f"got {c.actual} ({c.source})")
        lines.append("verdict: " + ("all checks pass" if self.passed else
                                    f"{len(self.failures())} check(s) not passing"))
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Shapes


def _is_zero(x) -> bool:
    return x is not UNKNOWN and x == 0


def _is_unit(x) -> bool:
    return x is not UNKNOWN and abs(x) == 1


@dataclass(frozen=True)
class Figure6Shape:
    """A copy of C_p in ``host`` with an attachment handle linking one end once.

    ``chain`` lists the C_p handles starting at the -(p+2)-framed end.
    ``attach_end`` is ``"tail"`` (the -2 end) or ``"head"``.  Apart from the
    attachment, every host handle must have known zero linking with the
    chain, and the host has no 1-handles.
    """

    host: HandleDecomposition
    chain: Tuple[str, ...]
    attachment: str
    p: int
    attach_end: str = "tail"

    def __post_init__(self):
        object.__setattr__(self, "chain", tuple(self.chain))

    @property
    def end_label(self) -> str:
        return self.chain[0] if self.attach_end == "head" else self.chain[-1]

    def validate(self) -> None:
        X, p = self.host, self.p
        if p < 2:
            raise ShapeError(f"C_p needs p >= 2, got {p}")
        if X.one_handles:
            raise ShapeError("host must have no 1-handles")
        if self.attach_end not in ("head", "tail"):
            raise ShapeError(f"attach_end must be 'head' or 'tail', got {self.attach_end!r}")
        if len(self.chain) != p - 1 or len(set(self.chain)) != p - 1:
            raise ShapeError(f"C_{p} needs {p - 1} distinct chain handles")
        if self.attachment in self.chain:
            raise ShapeError("attachment must not belong to the chain")
        for label in self.chain + (self.attachment,):
            X.index(label)
        if not _submatrix_equals(X.submatrix(self.chain), c_p(p).linking):
            raise ShapeError(f"chain linking matrix is not that of C_{p}")
        for label in self.chain:
            if X.handle(label).knot is not KnotTag.UNKNOT:
                raise ShapeError(f"chain handle {label} is not a certified unknot")
        for label in self.chain:
            value = X.link(self.attachment, label)
            if label == self.end_label:
                if not _is_unit(value):
                    raise ShapeError(f"attachment must link {label} exactly once, got {value}")
            elif not _is_zero(value):
                raise ShapeError(f"attachment must not link chain handle {label}, got {value}")
        for h in X.two_handles:
            if h.label in self.chain or h.label == self.attachment:
                continue
            for label in self.chain:
                if not _is_zero(X.link(h.label, label)):
                    raise ShapeError(f"{h.label} links chain handle {label}")


@dataclass(frozen=True)
class Figure8Shape:
    """A cusp neighbourhood (0-framed right trefoil) linked once by an attachment.

    The cusp handle must link no other handle.  The attachment's framing may
    be Unknown: it stands for an arbitrary integer.
    """

    host: HandleDecomposition
    cusp: str
    attachment: str
    conjectural: bool = False

    def validate(self) -> None:
        X = self.host
        if X.one_handles:
            raise ShapeError("host must have no 1-handles")
        cusp = X.handle(self.cusp)
        X.index(self.attachment)
        if self.cusp == self.attachment:
            raise ShapeError("cusp and attachment must differ")
        if cusp.framing is UNKNOWN or cusp.framing != 0:
            raise ShapeError(f"cusp handle must be 0-framed, got {cusp.framing}")
        if cusp.knot is not KnotTag.RIGHT_TREFOIL:
            raise ShapeError(f"cusp handle must be a right trefoil, got {cusp.knot}")
        if not _is_unit(X.link(self.cusp, self.attachment)):
            raise ShapeError("attachment must link the cusp exactly once")
        for h in X.two_handles:
            if h.label not in (self.cusp, self.attachment) and not _is_zero(X.link(self.cusp, h.label)):
                raise ShapeError(f"{h.label} links the cusp handle")


def _submatrix_equals(A, B) -> bool:
    return len(A) == len(B) and all(
        a is not UNKNOWN and a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


# ---------------------------------------------------------------------------
# Searching for configurations


def find_cp_chains(X: HandleDecomposition, p: int) -> List[Figure6Shape]:
    """Every (chain, attachment) pair in X forming a valid :class:`Figure6Shape`.

    Chains are ordered label sequences whose induced linking matrix equals
    that of ``c_p(p)`` exactly.  Results are in host order.
    """
    if p < 2:
        raise DomainError(f"C_p needs p >= 2, got {p}")
    if X.one_handles:
        return []
    target = c_p(p).linking
    n = len(X.two_handles)
    unknots = [i for i in range(n) if X.two_handles[i].knot is KnotTag.UNKNOT]

    chains = []

    def extend(seq):
        k = len(seq)
        if k == p - 1:
            chains.append(list(seq))
            return
        for i in unknots:
            if i in seq:
                continue
            if X.linking[i][i] is UNKNOWN or X.linking[i][i] != target[k][k]:
                continue
            if all(X.linking[i][seq[t]] is not UNKNOWN and X.linking[i][seq[t]] == target[k][t]
                   for t in range(k)):
                extend(seq + [i])

    extend([])
    out = []
    labels = X.labels
    for chain in chains:
        names = tuple(labels[i] for i in chain)
        ends = ["tail"] if p == 2 else ["head", "tail"]
        for a in range(n):
            if a in chain:
                continue
            for end in ends:
                shape = Figure6Shape(X, names, labels[a], p, end)
                try:
                    shape.validate()
                except ShapeError:
                    continue
                out.append(shape)
    return out


def find_cusp_shapes(X: HandleDecomposition) -> List[Figure8Shape]:
    out = []
    for cusp in X.two_handles:
        if cusp.knot is not KnotTag.RIGHT_TREFOIL:
            continue
        for att in X.two_handles:
            if att.label == cusp.label:
                continue
            shape = Figure8Shape(X, cusp.label, att.label)
            try:
                shape.validate()
            except ShapeError:
                continue
            out.append(shape)
    return out


# ---------------------------------------------------------------------------
# Rational blow-down


def _signature_shift(sig) -> int:
    return sig[0] - sig[2]


def rational_blowdown(shape: Figure6Shape) -> Tuple[HandleDecomposition, Certificate]:
    """Replace the C_p copy by B_p and cancel B_p's 1-handle against the attachment.

    The output has no 1-handles and ``|two_handles(host)| - p + 1`` 2-handles.
    The surviving B_p 2-handle has Unknown framing and linking.
    """
    shape.validate()
    X, p = shape.host, shape.p
    before = counts(X)
    h2_rest = before.h2 - (p - 1) - 1
    steps, checks = [], []

    chain = [[int(x) for x in row] for row in X.submatrix(shape.chain)]
    checks.append(Check("chain is C_p", PASS, f"C_{p}", f"chain {list(shape.chain)}", "structural"))
    lens = lens_space_of_chain([chain[i][i] for i in range(p - 1)])
    checks.append(check("chain boundary lens space", str(LensSpace(p * p, p - 1)), str(lens), "published"))
    checks.append(check("|det| of chain", p * p, abs(intalg.determinant(chain)), "published"))
    chain_sig = intalg.signature(chain)
    checks.append(check("chain negative definite", (0, 0, p - 1), chain_sig, "derived"))
    checks.append(check("H1 of B_p", f"Z/{p}", str(homology_h1(b_p(p))), "derived"))

    Y = X
    for label in shape.chain:
        Y = delete_two_handle(Y, label)
    steps.append(f"remove the C_{p} chain {list(shape.chain)}")

    dotted = Y.fresh_label("d")
    ball = Y.fresh_label("k")
    att = Y.index(shape.attachment)
    n = len(Y.two_handles)
    A = [list(row) + [UNKNOWN] for row in Y.linking]
    A.append([UNKNOWN] * (n + 1))
    # the slide making the attachment a meridian of the dotted circle is
    # diagram-level data, so its row is no longer certified
    for t in range(n + 1):
        A[att][t] = UNKNOWN
        A[t][att] = UNKNOWN
    knots = [h.knot for h in Y.two_handles] + [KnotTag.UNKNOWN]
    knots[att] = KnotTag.UNKNOWN
    Y = Y.with_data(A, [list(r) + [0] for r in Y.incidence], knots, Y.labels + [ball])
    Y = add_one_handle(Y, dotted, {ball: p, shape.attachment: 1})
    steps.append(f"glue B_{p}: dotted circle {dotted} with 2-handle {ball} running over it {p} times")
    steps.append(f"slide to make {shape.attachment} a meridian of {dotted}")
    checks.append(check("H1 with B_p glued", "0", str(homology_h1(Y)), "derived"))

    Z = cancel_12(Y, dotted, shape.attachment)
    steps.append(f"cancel {dotted} against {shape.attachment}")

    after = counts(Z)
    checks.append(check("counts after rational blow-down",
                        (before.h0, 0, h2_rest + 1, before.h3, before.h4), after.as_tuple(), "published"))
    checks.append(check("no 1-handles", 0, after.h1, "published"))
    checks.append(check("H1 trivial", "0", str(homology_h1(Z)), "published"))
    checks.append(check("euler characteristic drops by p-1",
                        euler_characteristic(X) - (p - 1), euler_characteristic(Z), "derived"))
    cert = Certificate(tuple(steps), after, after.chi, tuple(checks))
    return Z, cert


# ---------------------------------------------------------------------------
# Logarithmic transform


def _set_knots(X: HandleDecomposition, tags: Dict[str, KnotTag]) -> HandleDecomposition:
    return X.with_data(X.linking, knots=[tags.get(h.label, h.knot) for h in X.two_handles])


def _unlink_from_chain(X: HandleDecomposition, label: str, chain: Sequence[str],
                       attachment: str, attach_end: str):
    """Slide ``label`` over chain handles and the attachment until it links no chain handle.

    Always solvable: the chain matrix is tridiagonal with unit off-diagonal,
    so the linear system is solved from the end away from the attachment,
    and the attachment absorbs the residue at its own end.
    Returns the new decomposition and the list of slides made.
    """
    order = list(chain) if attach_end == "head" else list(chain)[::-1]
    m = len(order)
    Q = [[X.link(a, b) for b in order] for a in order]
    w = [X.link(label, c) for c in order]
    ell = X.link(attachment, order[0])
    if any(v is UNKNOWN for v in w) or ell is UNKNOWN:
        raise UnknownEntryError(f"linking of {label} with the chain is Unknown")
    # want Q y + t * ell * e_0 = -w
    y = [0] * (m + 1)
    for i in range(m - 1, 0, -1):
        rhs = -w[i] - Q[i][i] * y[i] - (Q[i][i + 1] * y[i + 1] if i + 1 < m else 0)
        y[i - 1] = rhs * Q[i][i - 1]
    rhs = -w[0] - Q[0][0] * y[0] - (Q[0][1] * y[1] if m > 1 else 0)
    t = rhs * ell
    moves = []
    for name, times in list(zip(order, y[:m])) + [(attachment, t)]:
        sign = 1 if times > 0 else -1
        for _ in range(abs(times)):
            X = handle_slide(X, label, name, sign)
        if times:
            moves.append(f"slide {label} over {'-' if sign < 0 else ''}{name} x{abs(times)}")
    return X, moves


def assemble_cp(shape: Figure8Shape, p: int) -> Tuple[Figure6Shape, List[str], List[Check]]:
    """Blow up p-1 times and slide the cusp into a copy of C_p.

    With exceptional classes e1..e_{p-1} and cusp class c the chain is
    ``c - 2 e1 - e2 - ... - e_{p-1}, e1 - e2, ..., e_{p-2} - e_{p-1}``;
    the attachment links its -(p+2) end.  The remaining exceptional handle
    is slid off the chain afterwards.
    """
    X = shape.host
    steps, checks = [], []
    exceptional = []
    for _ in range(p - 1):
        label = X.fresh_label("e")
        X = blow_up(X, -1, label)
        exceptional.append(label)
    steps.append(f"blow up {p - 1} time(s) with sign -1: {exceptional}")
    checks.append(check("signature shift from blow-ups", -(p - 1),
                        _signature_shift(intalg.signature([[-int(i == j) for j in range(p - 1)]
                                                           for i in range(p - 1)])), "derived"))

    c = shape.cusp
    for idx, e in enumerate(exceptional):
        for _ in range(2 if idx == 0 else 1):
            X = handle_slide(X, c, e, -1)
    others = "".join(f", over -{e} once" for e in exceptional[1:])
    steps.append(f"slide {c} over -{exceptional[0]} twice{others}")
    # e_i -> e_i - e_{i+1}; e_{i+1} is still untouched when e_i slides over it
    for a, b in zip(exceptional, exceptional[1:]):
        X = handle_slide(X, a, b, -1)
        steps.append(f"slide {a} over -{b}")

    chain = [c] + exceptional[:-1]
    leftover = exceptional[-1]
    X, moves = _unlink_from_chain(X, leftover, chain, shape.attachment, "head")
    steps.extend(moves)
    X = _set_knots(X, {label: KnotTag.UNKNOT for label in chain})
    steps.append(f"chain {chain} is an unknotted C_{p} by construction")

    fig6 = Figure6Shape(X, tuple(chain), shape.attachment, p, "head")
    found = [s for s in find_cp_chains(X, p)
             if s.chain == fig6.chain and s.attachment == fig6.attachment]
    if not found:
        raise ConventionError(f"assembled chain {chain} is not a valid C_{p} configuration")
    checks.append(Check("assembled chain found by search", PASS, "present", "present", "structural"))
    return fig6, steps, checks


def log_transform(shape: Figure8Shape, p: int) -> Tuple[HandleDecomposition, Certificate]:
    """Multiplicity-p logarithmic transform in the cusp: p-1 blow-ups, then rational blow-down."""
    if p < 2:
        raise DomainError(f"multiplicity must be >= 2, got {p}")
    shape.validate()
    before = counts(shape.host)
    h2_rest = before.h2 - 2
    fig6, steps, checks = assemble_cp(shape, p)
    chain_sig = intalg.signature([[int(x) for x in row] for row in fig6.host.submatrix(fig6.chain)])
    out, rbd = rational_blowdown(fig6)
    steps += list(rbd.construction)
    checks += list(rbd.checks)
    blowup_shift = -(p - 1)
    removal_shift = -_signature_shift(chain_sig)
    checks.append(check("signature bookkeeping cancels", 0, blowup_shift + removal_shift, "derived"))
    after = counts(out)
    checks.append(check("counts after log transform",
                        (before.h0, 0, h2_rest + 2, before.h3, before.h4), after.as_tuple(), "published"))
    checks.append(check("euler characteristic preserved", euler_characteristic(shape.host),
                        after.chi, "derived"))
    return out, Certificate(tuple(steps), after, after.chi, tuple(checks))


# ---------------------------------------------------------------------------
# Elliptic surfaces


def elliptic_en_p(n: int, p: int, conjectural: bool = False) -> Figure8Shape:
    """Certificate-level model of E(n)_p: 12n 2-handles, two 3-handles, one 4-handle.

    Only the cusp (0-framed right trefoil) and its single linking with the
    attachment handle are concrete; every other framing and linking is
    Unknown.  Multiplicities outside {2, 3, 4} need ``conjectural=True``.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p}")
    if p not in PROVED_MULTIPLICITIES and not conjectural:
        raise DomainError(f"E(n)_{p} shape is only established for p in {PROVED_MULTIPLICITIES}; "
                          "pass conjectural=True to proceed")
    size = 12 * n
    labels = ["cusp", "att"] + [f"k{i + 1}" for i in range(size - 2)]
    A = [[UNKNOWN] * size for _ in range(size)]
    for j in range(size):
        A[0][j] = A[j][0] = 0
    A[0][1] = A[1][0] = 1
    knots = [KnotTag.RIGHT_TREFOIL] + [KnotTag.UNKNOWN] * (size - 1)
    host = HandleDecomposition.from_linking(A, labels, knots, h3=2, h4=1)
    return Figure8Shape(host, "cusp", "att", conjectural=p not in PROVED_MULTIPLICITIES)


def verify_main_theorem(n: int, p: int, q: int, allow_conjectural: bool = False) -> Certificate:
    """Certify the handle decomposition of E(n)_{p,q} without 1-handles."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if min(p, q) < 2 or gcd(p, q) != 1:
        raise DomainError(f"need coprime multiplicities >= 2, got ({p}, {q})")
    proved = (p, q) in PROVED_PAIRS
    if not proved and not allow_conjectural:
        raise DomainError(f"(p, q) = ({p}, {q}) is not one of the established pairs {PROVED_PAIRS}")
    shape = elliptic_en_p(n, p, conjectural=not proved)
    host_counts = counts(shape.host)
    steps = [f"E({n})_{p}: {host_counts.union_expression()} with a cusp neighbourhood"]
    checks = [
        Check("host configuration established",
              INDETERMINATE if shape.conjectural or not proved else PASS,
              "established", "conjectural" if shape.conjectural or not proved else "established",
              "published"),
        check("host euler characteristic", 12 * n, host_counts.chi, "published"),
    ]
    out, cert = log_transform(shape, q)
    steps.append(f"log transform of multiplicity {q} in the cusp:")
    steps += [f"  {s}" for s in cert.construction]
    checks += list(cert.checks)
    result = counts(out)
    checks.append(check("E(n)_{p,q} counts", (1, 0, 12 * n, 2, 1), result.as_tuple(), "published"))
    checks.append(check("E(n)_{p,q} euler characteristic", 12 * n, result.chi, "published"))
    checks.append(check("E(n)_{p,q} H1", "0", str(homology_h1(out)), "published"))
    steps.append(f"E({n})_{{{p},{q}}} = {result.union_expression()}")
    return Certificate(tuple(steps), result, result.chi, tuple(checks))
