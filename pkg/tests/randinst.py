"""Seeded random loop systems for property and acceptance tests."""

from __future__ import annotations

import random
from fractions import Fraction

from loopterm.numq import QMatrix, is_invertible
from loopterm.polyring import LoopSystem


def rand_rational(rng: random.Random, bound: int = 5) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def rand_matrix(rng: random.Random, r: int, c: int, bound: int = 5) -> QMatrix:
    return QMatrix([[rand_rational(rng, bound) for _ in range(c)] for _ in range(r)], cols=c)


def rand_triangular(rng: random.Random, d: int, bound: int = 5) -> QMatrix:
    """Upper triangular with nonzero diagonal, so every eigenvalue is rational."""
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            if j < i:
                row.append(Fraction(0))
            elif j == i:
                x = Fraction(0)
                while x == 0:
                    x = rand_rational(rng, bound)
                row.append(x)
            else:
                row.append(rand_rational(rng, bound))
        rows.append(row)
    return QMatrix(rows, cols=d)


def rand_invertible(rng: random.Random, d: int, triangular: bool = False) -> QMatrix:
    while True:
        A = rand_triangular(rng, d) if triangular else rand_matrix(rng, d, d)
        if is_invertible(A):
            return A


def rand_system(rng: random.Random, max_d: int = 3, max_k: int = 2, max_n: int = 3, triangular: bool | None = None) -> LoopSystem:
    """A commuting invertible family: A_2 = a I + b A_1, rejection-sampled for invertibility."""
    d = rng.randint(1, max_d)
    k = rng.randint(1, max_k)
    n = rng.randint(1, max_n)
    tri = rng.random() < 0.5 if triangular is None else triangular
    A1 = rand_invertible(rng, d, tri)
    mats = [A1]
    while len(mats) < k:
        a, b = rand_rational(rng), rand_rational(rng)
        A2 = QMatrix.identity(d).scale(a) + A1.scale(b)
        if is_invertible(A2):
            mats.append(A2)
    rows = []
    while len(rows) < n:
        c = tuple(rand_rational(rng) for _ in range(d))
        if any(c):
            rows.append(c)
    return LoopSystem(tuple(mats), tuple(rows))
