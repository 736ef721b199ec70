"""Plumbing graphs and the C_p / B_p pieces, with lens-space identification of chain boundaries."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import List, Optional, Sequence, Tuple

from . import intalg
from .errors import ConventionError, DomainError
from .handlebody import UNKNOWN, HandleDecomposition, KnotTag, TwoHandle


@dataclass(frozen=True)
class PlumbingGraph:
    vertices: Tuple[Tuple[str, int], ...]
    edges: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple((str(v), int(w)) for v, w in self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        labels = [v for v, _ in self.vertices]
        if len(set(labels)) != len(labels):
            raise DomainError("vertex labels must be unique")
        seen = set()
        for a, b in self.edges:
            if a == b:
                raise DomainError(f"loop at {a}")
            if a not in labels or b not in labels:
                raise DomainError(f"edge {a}-{b} mentions an unknown vertex")
            key = frozenset((a, b))
            if key in seen:
                raise DomainError(f"repeated edge {a}-{b}")
            seen.add(key)

    @classmethod
    def chain(cls, weights: Sequence[int], prefix: str = "k") -> "PlumbingGraph":
        labels = [f"{prefix}{i + 1}" for i in range(len(weights))]
        return cls(tuple(zip(labels, weights)), tuple(zip(labels, labels[1:])))

    def disjoint_union(self, other: "PlumbingGraph") -> "PlumbingGraph":
        return PlumbingGraph(self.vertices + other.vertices, self.edges + other.edges)


def from_plumbing(G: PlumbingGraph) -> HandleDecomposition:
    labels = [v for v, _ in G.vertices]
    pos = {v: i for i, v in enumerate(labels)}
    A = [[0] * len(labels) for _ in labels]
    for i, (_, w) in enumerate(G.vertices):
        A[i][i] = w
    for a, b in G.edges:
        A[pos[a]][pos[b]] = A[pos[b]][pos[a]] = 1
    return HandleDecomposition.from_linking(A, labels)


def cp_weights(p: int) -> List[int]:
    if p < 2:
        raise DomainError(f"C_p needs p >= 2, got {p}")
    return [-(p + 2)] + [-2] * (p - 2)


def c_p(p: int) -> HandleDecomposition:
    """Linear plumbing with weights -(p+2), -2, ..., -2 (p-1 vertices)."""
    weights = cp_weights(p)
    if not lens_equivalent(lens_space_of_chain(weights), LensSpace(p * p, p - 1)):
        raise ConventionError(f"C_{p} chain does not bound L({p * p}, {p - 1})")
    return from_plumbing(PlumbingGraph.chain(weights))


def b_p(p: int) -> HandleDecomposition:
    """Rational ball B_p: one dotted circle and a 2-handle running over it p times.

    The 2-handle's framing and knot type depend on the diagram and are left
    Unknown.
    """
    if p < 2:
        raise DomainError(f"B_p needs p >= 2, got {p}")
    return HandleDecomposition(
        one_handles=("d1",),
        two_handles=(TwoHandle("k1", UNKNOWN, KnotTag.UNKNOWN),),
        linking=((UNKNOWN,),),
        incidence=((p,),),
    )


# ---------------------------------------------------------------------------
# Lens spaces


@dataclass(frozen=True)
class LensSpace:
    """L(p, q) up to (unoriented) diffeomorphism; ``q`` is stored normalized."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p < 1:
            raise DomainError(f"lens space needs p >= 1, got {p}")
        if p == 1:
            object.__setattr__(self, "q", 0)
            return
        if gcd(p, q) != 1:
            raise DomainError(f"L({p}, {q}) needs gcd(p, q) = 1")
        object.__setattr__(self, "q", min(_orbit(p, q)))

    def __str__(self):
        return f"L({self.p},{self.q})"


def _orbit(p: int, q: int) -> set:
    q %= p
    inv = pow(q, -1, p)
    return {q, (-q) % p, inv, (-inv) % p}


def lens_equivalent(a: LensSpace, b: LensSpace) -> bool:
    if a.p != b.p:
        return False
    if a.p == 1:
        return True
    return b.q % b.p in _orbit(a.p, a.q)


def lens_space_of_chain(weights: Sequence[int]) -> LensSpace:
    """Boundary of the linear plumbing with the given weights (all <= -2)."""
    if not weights:
        raise DomainError("empty chain")
    if any(w > -2 for w in weights):
        raise DomainError(f"chain weights must all be <= -2, got {list(weights)}")
    p, q = intalg.evaluate_hj([-w for w in weights])
    return LensSpace(p, q)


def chain_weights(X: HandleDecomposition) -> Optional[List[int]]:
    """Framings along the path if the linking matrix is a linear plumbing, else None.

    Requires known entries, off-diagonal entries in {0, +-1} whose support
    forms a single path.  Edge signs can be absorbed by reorienting handles,
    so only their absolute value matters.
    """
    A = X.known_linking()
    if not A:
        return None
    n = len(A)
    adj = {i: [j for j in range(n) if j != i and A[i][j]] for i in range(n)}
    if any(abs(A[i][j]) != 1 for i in adj for j in adj[i]):
        return None
    if sum(len(v) for v in adj.values()) != 2 * (n - 1):
        return None
    ends = [i for i in adj if len(adj[i]) <= 1]
    if n > 1 and len(ends) != 2:
        return None
    order, prev, cur = [], None, ends[0]
    while cur is not None:
        order.append(cur)
        nxt = [j for j in adj[cur] if j != prev]
        prev, cur = cur, (nxt[0] if nxt else None)
    if len(order) != n:
        return None
    return [A[i][i] for i in order]


def boundary_lens_space(X: HandleDecomposition) -> Optional[LensSpace]:
    """Lens space bounded by X when X is a negative HJ chain 2-handlebody."""
    if X.one_handles or X.h3 or X.h4:
        return None
    weights = chain_weights(X)
    if not weights or any(w > -2 for w in weights):
        return None
    return lens_space_of_chain(weights)


# ---------------------------------------------------------------------------
# Text formats


def parse_plumbing(text: str) -> PlumbingGraph:
    """Parse ``chain W1 W2 ...`` or a vertex/edge list.

    The vertex/edge list has one item per line::

        vertex a -5
        vertex b -2
        edge a b

    ``#`` starts a comment.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise DomainError("empty plumbing description")
    head = lines[0].split()
    if head[0] == "chain":
        if len(lines) != 1:
            raise DomainError("chain syntax is a single line")
        try:
            return PlumbingGraph.chain([int(w) for w in head[1:]])
        except ValueError:
            raise DomainError(f"chain weights must be integers: {lines[0]!r}") from None
    vertices, edges = [], []
    for ln in lines:
        parts = ln.split()
        if parts[0] == "vertex" and len(parts) == 3:
            try:
                vertices.append((parts[1], int(parts[2])))
            except ValueError:
                raise DomainError(f"bad vertex weight in {ln!r}") from None
        elif parts[0] == "edge" and len(parts) == 3:
            edges.append((parts[1], parts[2]))
        else:
            raise DomainError(f"cannot parse plumbing line {ln!r}")
    return PlumbingGraph(tuple(vertices), tuple(edges))
