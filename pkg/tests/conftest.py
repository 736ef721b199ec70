import random

import pytest

from kirbycalc.handlebody import HandleDecomposition

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_symmetric(rng, n, lo=-5, hi=5):
    A = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            A[i][j] = A[j][i] = rng.randint(lo, hi)
    return A


def random_unimodular(rng, n, steps=12):
    """Product of elementary row additions and swaps."""
    E = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if n > 1 and rng.random() < 0.2:
            E[i], E[j] = E[j], E[i]
        elif n > 1:
            k = rng.choice([-2, -1, 1, 2])
            E[i] = [a + k * b for a, b in zip(E[i], E[j])]
        else:
            E[0][0] *= -1
    return E


def random_matrix(rng, rows, cols, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


@pytest.fixture
def rng():
    return random.Random(20261018)


def decomposition(A, **kwargs):
    return HandleDecomposition.from_linking(A, **kwargs)
