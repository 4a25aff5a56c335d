"""Exact minima of positive definite quadratic forms over nonzero integer vectors.

The search is Fincke-Pohst enumeration on an LLL-reduced Gram matrix.  LLL
swap decisions use floating point for speed, but every basis change is applied
to the Gram matrix in exact rational arithmetic, so the reduced Gram matrix,
the enumeration bounds and the reported minimum are all exact.  Floats can
only affect how fast the answer arrives, never what it is.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isfinite, isqrt, lcm

from .exactmat import (
    DomainError,
    RationalMatrix,
    ShapeError,
    determinant,
    is_positive_definite,
)

DEFAULT_DIM_CAP = 24


class GramForm:
    """Symmetric positive definite rational matrix, checked on construction."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: RationalMatrix):
        if not matrix.is_symmetric():
            raise DomainError("Gram matrix must be symmetric")
        if not is_positive_definite(matrix):
            raise DomainError("Gram matrix must be positive definite")
        self.matrix = matrix

    @property
    def dim(self) -> int:
        return self.matrix.rows

    def __repr__(self) -> str:
        return f"GramForm(dim={self.dim})"


@dataclass(frozen=True)
class LatticeMinimum:
    """Certified minimum of x G x^t over nonzero integer vectors.

    ``witness`` is sign-normalized (first nonzero coordinate positive) and is
    the reverse-lexicographically smallest minimizer, so e.g. the identity
    form reports e_1.  ``num_minimizers`` counts minimizers up to sign.
    """

    value: Fraction
    witness: tuple[int, ...]
    num_minimizers: int


@dataclass(frozen=True)
class Certificate:
    """Outcome of an integral-positive-definiteness check."""

    ok: bool
    minimum: LatticeMinimum | None
    symmetrized: bool = False
    reason: str = ""


def _float_gso(g: list[list[Fraction]]) -> tuple[list[list[float]], list[float]]:
    n = len(g)
    gf = [[float(x) for x in row] for row in g]
    mu = [[0.0] * n for _ in range(n)]
    bstar = [0.0] * n
    for i in range(n):
        bstar[i] = gf[i][i] - sum(mu[i][k] * mu[i][k] * bstar[k] for k in range(i))
        if bstar[i] <= 0.0:
            # numerically degenerate; harmless, caller only loses reduction quality
            bstar[i] = 1e-300
        for j in range(i + 1, n):
            mu[j][i] = (
                gf[j][i] - sum(mu[j][k] * mu[i][k] * bstar[k] for k in range(i))
            ) / bstar[i]
    return mu, bstar


def _row_op(g: list[list[Fraction]], u: list[list[int]], k: int, j: int, r: int):
    """b_k <- b_k - r*b_j, applied exactly to Gram rows/cols and to u."""
    u[k] = [a - r * b for a, b in zip(u[k], u[j])]
    g[k] = [a - r * b for a, b in zip(g[k], g[j])]
    for row in g:
        row[k] = row[k] - r * row[j]


def _swap(g: list[list[Fraction]], u: list[list[int]], k: int):
    u[k], u[k - 1] = u[k - 1], u[k]
    g[k], g[k - 1] = g[k - 1], g[k]
    for row in g:
        row[k], row[k - 1] = row[k - 1], row[k]


def _lll_rows(matrix: RationalMatrix, delta: float = 0.75):
    """LLL on a Gram matrix; returns (coords u, reduced gram) with g' = u g u^t."""
    n = matrix.rows
    g = [list(row) for row in matrix]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    if n == 1:
        return u, g
    max_steps = 1000 + 100 * n * n
    k = 1
    steps = 0
    while k < n and steps < max_steps:
        steps += 1
        mu, bstar = _float_gso(g)
        for j in range(k - 1, -1, -1):
            m_kj = mu[k][j]
            if not isfinite(m_kj) or abs(m_kj) > 1e15:
                continue  # degenerate float data; skip, exactness is unaffected
            r = round(m_kj)
            if r:
                _row_op(g, u, k, j, r)
                for t in range(j):
                    mu[k][t] -= r * mu[j][t]
                mu[k][j] -= r
        lovasz = (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1]
        if not isfinite(lovasz) or bstar[k] >= lovasz:
            k += 1
        else:
            _swap(g, u, k)
            k = max(k - 1, 1)
    return u, g


def lll_reduce(gram: GramForm | RationalMatrix, delta: float = 0.75):
    """Return (transform, reduced) with transform unimodular and
    reduced = transform^t . gram . transform, recomputed exactly."""
    matrix = gram.matrix if isinstance(gram, GramForm) else GramForm(gram).matrix
    u, _ = _lll_rows(matrix, delta)
    transform = RationalMatrix(u).transpose()
    if abs(determinant(transform)) != 1:
        raise AssertionError("LLL transform is not unimodular")
    reduced = transform.transpose() @ matrix @ transform
    return transform, reduced


def _ldl(m: list[list[int]]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """m = L D L^t with L unit lower triangular, D positive; exact."""
    n = len(m)
    d = [Fraction(0)] * n
    lo = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = Fraction(m[i][i]) - sum(lo[i][k] * lo[i][k] * d[k] for k in range(i))
        lo[i][i] = Fraction(1)
        for j in range(i + 1, n):
            lo[j][i] = (
                Fraction(m[j][i]) - sum(lo[j][k] * lo[i][k] * d[k] for k in range(i))
            ) / d[i]
    return d, lo


def _normalize_sign(vec: tuple[int, ...]) -> tuple[int, ...]:
    for x in vec:
        if x:
            return vec if x > 0 else tuple(-v for v in vec)
    return vec


def _int_range(sigma: Fraction, bound: Fraction) -> tuple[int, int]:
    """Integers y with (y + sigma)^2 <= bound; bound >= 0."""
    a, b = sigma.numerator, sigma.denominator
    bn, bd = bound.numerator, bound.denominator
    lim = isqrt(b * b * bn * bd) // bd
    return -((lim + a) // b), (lim - a) // b


def form_minimum(
    gram: GramForm | RationalMatrix, max_dim: int = DEFAULT_DIM_CAP
) -> LatticeMinimum:
    """Exact global minimum of x G x^t over Z^dim \\ {0}, with witness."""
    matrix = gram.matrix if isinstance(gram, GramForm) else GramForm(gram).matrix
    if matrix.rows > max_dim:
        raise DomainError(
            f"dimension {matrix.rows} exceeds the enumeration cap {max_dim}; "
            "pass max_dim explicitly to override"
        )
    return _form_minimum_cached(matrix)


@lru_cache(maxsize=128)
def _form_minimum_cached(matrix: RationalMatrix) -> LatticeMinimum:
    n = matrix.rows
    u, g = _lll_rows(matrix)
    s = lcm(*(x.denominator for row in g for x in row))
    m = [[int(x * s) for x in row] for row in g]
    d, lo = _ldl(m)
    lcols: list[list[tuple[int, Fraction]]] = [
        [(j, lo[j][i]) for j in range(i + 1, n) if lo[j][i]] for i in range(n)
    ]

    best = Fraction(min(m[i][i] for i in range(n)))
    minimizers: set[tuple[int, ...]] = set()
    y = [0] * n
    zero = Fraction(0)

    def original(yvec) -> tuple[int, ...]:
        return tuple(
            sum(yvec[i] * u[i][c] for i in range(n) if yvec[i]) for c in range(n)
        )

    def descend(level: int, acc: Fraction):
        nonlocal best, minimizers
        sigma = zero
        for j, lji in lcols[level]:
            if y[j]:
                sigma += lji * y[j]
        room = (best - acc) / d[level]
        lo_i, hi_i = _int_range(sigma, room)
        for yi in range(lo_i, hi_i + 1):
            t = yi + sigma
            acc2 = acc + d[level] * t * t
            if acc2 > best:
                continue
            y[level] = yi
            if level == 0:
                if any(y):
                    if acc2 < best:
                        best = acc2
                        minimizers = {_normalize_sign(original(y))}
                    else:
                        minimizers.add(_normalize_sign(original(y)))
            else:
                descend(level - 1, acc2)
        y[level] = 0

    descend(n - 1, zero)
    value = best / s
    witness = min(minimizers, key=lambda w: tuple(reversed(w)))
    # defensive exact re-check of the reported witness in original coordinates
    wm = RationalMatrix([witness])
    assert (wm @ matrix @ wm.transpose())[0, 0] == value
    return LatticeMinimum(value=value, witness=witness, num_minimizers=len(minimizers))


def _nonpositive_direction(sym: RationalMatrix):
    """Integer vector with x W x^t <= 0 for symmetric non-PD W, else None.

    Walks the LDL decomposition; at the first pivot d_i <= 0 the row vector
    solving x L = e_i takes the form value d_i, and clearing denominators
    scales it to an integer witness with value m^2 d_i <= 0.
    """
    n = sym.rows
    d: list[Fraction] = []
    lo = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        di = sym[i, i] - sum(lo[i][k] * lo[i][k] * d[k] for k in range(i))
        if di <= 0:
            x = [Fraction(0)] * n
            x[i] = Fraction(1)
            for j in range(i - 1, -1, -1):
                x[j] = -sum(x[t] * lo[t][j] for t in range(j + 1, i + 1))
            m = lcm(*(v.denominator for v in x))
            vec = tuple(int(v * m) for v in x)
            return vec, m * m * di, i
        d.append(di)
        for j in range(i + 1, n):
            lo[j][i] = (
                sym[j, i] - sum(lo[j][k] * lo[i][k] * d[k] for k in range(i))
            ) / di
    return None


def certify_integral_positive_definite(
    w: RationalMatrix, max_dim: int = DEFAULT_DIM_CAP
) -> Certificate:
    """Check x W x^t >= 1 for all nonzero integer x.

    Asymmetric input is replaced by (W + W^t)/2, which defines the same
    quadratic form; the certificate records that this happened.
    """
    if not w.is_square():
        raise ShapeError("weight matrix must be square")
    symmetrized = not w.is_symmetric()
    sym = (w + w.transpose()).scale(Fraction(1, 2)) if symmetrized else w
    bad = _nonpositive_direction(sym)
    if bad is not None:
        vec, val, k = bad
        return Certificate(
            ok=False,
            minimum=None,
            symmetrized=symmetrized,
            reason=(
                f"not positive definite: integer vector {vec} has form value "
                f"{val} <= 0 (leading principal minor {k + 1} fails)"
            ),
        )
    m = form_minimum(sym, max_dim=max_dim)
    if m.value < 1:
        return Certificate(
            ok=False,
            minimum=m,
            symmetrized=symmetrized,
            reason=f"integer vector {m.witness} has form value {m.value} < 1",
        )
    return Certificate(ok=True, minimum=m, symmetrized=symmetrized)
