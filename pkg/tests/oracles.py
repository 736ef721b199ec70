"""Independent reference computations.  Deliberately naive; none of them
share code with the package."""
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd

import sympy


def leibniz_det(A):
    n = len(A)
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i in range(n):
            term *= A[i][perm[i]]
        total += term
    return total


def sympy_det(A):
    return int(sympy.Matrix(A).det()) if A else 1


def snf_by_minors(A):
    """Invariant factors from gcds of k x k minors: d1...dk = gcd of k-minors."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    out, prev = [], 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, sympy_det([[A[i][j] for j in cs] for i in rs]))
        if g == 0:
            return out + [0] * (min(rows, cols) - k + 1)
        out.append(g // prev)
        prev = g
    return out


def signature_by_charpoly(A):
    """Inertia via Descartes' rule on the (real-rooted) characteristic polynomial."""
    if not A:
        return (0, 0, 0)
    x = sympy.symbols("x")
    coeffs = sympy.Poly(sympy.Matrix(A).charpoly(x).as_expr(), x).all_coeffs()
    zero = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zero += 1

    def changes(cs):
        cs = [c for c in cs if c != 0]
        return sum(1 for a, b in zip(cs, cs[1:]) if a * b < 0)

    deg = len(coeffs) - 1
    plus = changes(coeffs)
    minus = changes([c * (-1) ** (deg - i) for i, c in enumerate(coeffs)])
    return (plus, zero, minus)


def hj_value(coeffs):
    value = Fraction(coeffs[-1])
    for a in reversed(coeffs[:-1]):
        value = a - 1 / value
    return value


def hj_search(p, q, max_len=None):
    """Brute-force the expansion: peel the unique a >= 2 leaving a remainder > 1."""
    target = Fraction(p, q)
    out = []
    while True:
        if target.denominator == 1:
            return out + [target.numerator]
        a = 2
        while not (a - 1 < target <= a):
            a += 1
        out.append(a)
        target = 1 / (a - target)


def lens_equivalent_brute(p, q1, q2):
    """Search the orbit {+-q1, +-q1^-1} mod p, finding the inverse by exhaustion."""
    if p == 1:
        return True
    inverse = next(t for t in range(p) if (t * q1) % p == 1)
    orbit = {(s * v) % p for s in (1, -1) for v in (q1, inverse)}
    return q2 % p in orbit


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]
