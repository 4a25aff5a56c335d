"""Shared oracles and generators for the test suite.

The oracles here are deliberately independent of the library code paths they
check: brute-force box enumeration for lattice minima, cofactor expansion for
determinants, gcd-of-minors for elementary divisors.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd, lcm

import numpy as np

from blockbounds import RationalMatrix


@lru_cache(maxsize=16)
def _box_points(dim: int, bound: int) -> np.ndarray:
    rng = np.arange(-bound, bound + 1)
    grids = np.meshgrid(*([rng] * dim), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
    return pts[np.any(pts != 0, axis=1)]


def box_minimum(matrix: RationalMatrix, bound: int = 6) -> tuple[Fraction, tuple]:
    """Brute-force min of x G x^t over the integer box |x_i| <= bound.

    Scales the Gram matrix to integers so the numpy evaluation is exact
    (entries stay far below the int64 range for the sizes used in tests).
    """
    s = lcm(*(x.denominator for row in matrix for x in row))
    g = np.array([[int(x * s) for x in row] for row in matrix], dtype=np.int64)
    pts = _box_points(matrix.rows, bound)
    vals = np.einsum("nd,de,ne->n", pts, g, pts)
    i = int(np.argmin(vals))
    return Fraction(int(vals[i]), s), tuple(int(x) for x in pts[i])


def random_pd_int_matrix(rng: random.Random, dim: int, spread: int = 2) -> RationalMatrix:
    """A^t A + I for small random integer A; positive definite, and any
    minimizing vector provably fits in the |x_i| <= 6 box for dim <= 4."""
    a = [[rng.randint(-spread, spread) for _ in range(dim)] for _ in range(dim)]
    g = [
        [
            sum(a[k][i] * a[k][j] for k in range(dim)) + (1 if i == j else 0)
            for j in range(dim)
        ]
        for i in range(dim)
    ]
    return RationalMatrix(g)


def random_unimodular(rng: random.Random, dim: int, ops: int = 6) -> RationalMatrix:
    rows = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    for _ in range(ops):
        i, j = rng.randrange(dim), rng.randrange(dim)
        if i == j:
            continue
        c = rng.choice((-2, -1, 1, 2))
        rows[i] = [x + c * y for x, y in zip(rows[i], rows[j])]
    return RationalMatrix(rows)


def conjugacy_class_count(elements, mul) -> int:
    """Brute-force class count of a finite group given by a multiplication
    table; the first element must be the identity."""
    elements = list(elements)
    ident = elements[0]
    inverses = {}
    for g in elements:
        for h in elements:
            if mul(g, h) == ident and mul(h, g) == ident:
                inverses[g] = h
                break
    seen = set()
    classes = 0
    for g in elements:
        if g in seen:
            continue
        classes += 1
        for h in elements:
            seen.add(mul(mul(h, g), inverses[h]))
    return classes


def commutator_subgroup_order(elements, mul) -> int:
    elements = list(elements)
    ident = elements[0]
    inverses = {}
    for g in elements:
        for h in elements:
            if mul(g, h) == ident and mul(h, g) == ident:
                inverses[g] = h
                break
    comms = {
        mul(mul(g, h), mul(inverses[g], inverses[h]))
        for g in elements
        for h in elements
    }
    group = set(comms) | {ident}
    frontier = list(group)
    while frontier:
        new = []
        for a in frontier:
            for b in comms:
                c = mul(a, b)
                if c not in group:
                    group.add(c)
                    new.append(c)
        frontier = new
    return len(group)


def semidirect_c9_by_inversion():
    """The order-18 group with a cyclic part of order 9 inverted by an
    involution; identity first."""
    elems = [(a, s) for s in range(2) for a in range(9)]

    def mul(x, y):
        a, s = x
        b, t = y
        return ((a + (b if s == 0 else (-b) % 9)) % 9, (s + t) % 2)

    return elems, mul


def cofactor_determinant(matrix: RationalMatrix) -> Fraction:
    """Recursive cofactor expansion; independent of the elimination code."""
    n = matrix.rows
    if n == 1:
        return matrix[0, 0]
    total = Fraction(0)
    for j in range(n):
        if matrix[0, j] == 0:
            continue
        minor = RationalMatrix(
            [
                [matrix[i, c] for c in range(n) if c != j]
                for i in range(1, n)
            ]
        )
        sign = -1 if j % 2 else 1
        total += sign * matrix[0, j] * cofactor_determinant(minor)
    return total


def minor_gcd_divisors(matrix: RationalMatrix) -> list[int]:
    """Elementary divisors via gcds of k x k minors (tiny matrices only)."""
    n = matrix.rows
    gcds = []
    for k in range(1, n + 1):
        g = 0
        for rows in combinations(range(n), k):
            for cols in combinations(range(n), k):
                sub = RationalMatrix([[matrix[i, j] for j in cols] for i in rows])
                g = gcd(g, int(cofactor_determinant(sub)))
        gcds.append(g)
    divisors = []
    prev = 1
    for g in gcds:
        divisors.append(g // prev)
        prev = g
    return divisors
