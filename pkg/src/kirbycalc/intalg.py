"""Exact integer linear algebra.

Matrices are plain nested sequences of Python ints (arbitrary precision).
Every function copies its input; nothing here mutates an argument.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import List, Sequence, Tuple

from .errors import DomainError

Matrix = List[List[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def copy_matrix(M: Sequence[Sequence[int]]) -> Matrix:
    return [[int(x) for x in row] for row in M]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(A))]


def transpose(A: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def is_symmetric(A: Sequence[Sequence[int]]) -> bool:
    n = len(A)
    return all(len(row) == n for row in A) and all(
        A[i][j] == A[j][i] for i in range(n) for j in range(i + 1, n))


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group Z^free_rank + sum of Z/d."""

    free_rank: int = 0
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise DomainError("free rank must be non-negative")
        if any(d < 2 for d in self.torsion):
            raise DomainError(f"torsion coefficients must be >= 2, got {self.torsion}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise DomainError(f"torsion {self.torsion} violates the divisibility chain")

    @classmethod
    def from_diagonal(cls, diagonal: Sequence[int], generators: int) -> "AbelianGroup":
        """Cokernel of a diagonal map into Z^generators with the given invariant factors."""
        nonzero = [abs(d) for d in diagonal if d != 0]
        torsion = tuple(d for d in nonzero if d != 1)
        return cls(generators - len(nonzero), torsion)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self):
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(M: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D`` in Smith normal form.

    ``U`` and ``V`` are unimodular; ``D`` is diagonal with non-negative
    entries forming a divisibility chain.  Pivots are chosen by smallest
    absolute value to keep intermediate entries small.
    """
    D = copy_matrix(M)
    m = len(D)
    n = len(D[0]) if m else 0
    U = identity(m)
    V = identity(n)

    def swap_rows(a, b):
        D[a], D[b] = D[b], D[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for row in D:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        D[dst] = [x + k * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in D:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return U, D, V
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            pivot = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // pivot))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // pivot))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                continue
            # row and column cleared; enforce divisibility on the remainder
            bad = next((i for i in range(t + 1, m)
                        for j in range(t + 1, n) if D[i][j] % pivot), None)
            if bad is not None:
                add_row(t, bad, 1)
                continue
            if pivot < 0:
                D[t] = [-x for x in D[t]]
                U[t] = [-x for x in U[t]]
            break
    return U, D, V


def invariant_factors(M: Sequence[Sequence[int]]) -> List[int]:
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def cokernel(M: Sequence[Sequence[int]], rows: int = None) -> AbelianGroup:
    """Cokernel of ``M`` viewed as a map Z^cols -> Z^rows."""
    rows = len(M) if rows is None else rows
    if rows == 0:
        return AbelianGroup()
    if not M or not M[0]:
        return AbelianGroup(rows)
    return AbelianGroup.from_diagonal(invariant_factors(M), rows)


# ---------------------------------------------------------------------------
# Symmetric forms


def determinant(A: Sequence[Sequence[int]]) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    M = copy_matrix(A)
    n = len(M)
    if any(len(row) != n for row in M):
        raise DomainError("determinant needs a square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


def _content(M: Matrix) -> int:
    g = 0
    for row in M:
        for x in row:
            g = gcd(g, x)
    return g


def signature(A: Sequence[Sequence[int]]) -> Tuple[int, int, int]:
    """Inertia ``(n_plus, n_zero, n_minus)`` of a symmetric integer matrix.

    Uses congruence diagonalization over the integers: a nonzero diagonal
    pivot is split off via its scaled Schur complement, and when the whole
    remaining diagonal vanishes a hyperbolic 2x2 block is split off instead.
    Each remainder is divided by its (positive) content, which leaves the
    inertia unchanged.
    """
    if not is_symmetric(A):
        raise DomainError("signature needs a symmetric matrix")
    M = copy_matrix(A)
    plus = zero = minus = 0
    while M:
        size = len(M)
        k = next((i for i in range(size) if M[i][i]), None)
        if k is not None:
            order = [k] + [i for i in range(size) if i != k]
            M = [[M[i][j] for j in order] for i in order]
            a = M[0][0]
            s = 1 if a > 0 else -1
            if a > 0:
                plus += 1
            else:
                minus += 1
            b = [M[i][0] for i in range(1, size)]
            M = [[s * (a * M[i][j] - b[i - 1] * b[j - 1]) for j in range(1, size)]
                 for i in range(1, size)]
        else:
            pair = next(((i, j) for i in range(size) for j in range(i + 1, size) if M[i][j]), None)
            if pair is None:
                zero += size
                break
            i0, j0 = pair
            order = [i0, j0] + [i for i in range(size) if i not in pair]
            M = [[M[i][j] for j in order] for i in order]
            c = M[0][1]
            plus += 1
            minus += 1
            b0 = [M[i][0] for i in range(2, size)]
            b1 = [M[i][1] for i in range(2, size)]
            M = [[c * c * M[i][j] - c * (b0[i - 2] * b1[j - 2] + b1[i - 2] * b0[j - 2])
                  for j in range(2, size)] for i in range(2, size)]
        g = _content(M)
        if g > 1:
            M = [[x // g for x in row] for row in M]
    return plus, zero, minus


# ---------------------------------------------------------------------------
# Hirzebruch-Jung continued fractions


def hj_continued_fraction(p: int, q: int) -> List[int]:
    """Expand ``p/q`` as ``a1 - 1/(a2 - 1/(... - 1/ak))`` with every ``ai >= 2``."""
    if not (0 < q < p) or gcd(p, q) != 1:
        raise DomainError(f"need 0 < q < p and gcd(p, q) = 1, got ({p}, {q})")
    out = []
    while q:
        a = -(-p // q)
        out.append(a)
        p, q = q, a * q - p
    return out


def evaluate_hj(coeffs: Sequence[int]) -> Tuple[int, int]:
    """Evaluate a HJ continued fraction to a reduced ``(p, q)`` with ``q > 0``."""
    if not coeffs:
        raise DomainError("empty continued fraction")
    num, den = int(coeffs[-1]), 1
    for a in reversed(coeffs[:-1]):
        if num == 0:
            raise ZeroDivisionError("a tail of the continued fraction evaluates to 0")
        num, den = a * num - den, num
    if den < 0:
        num, den = -num, -den
    g = gcd(num, den)
    return num // g, den // g
