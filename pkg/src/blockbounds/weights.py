"""Construction and search of weight matrices.

A weight matrix W is a symmetric rational matrix whose quadratic form is at
least 1 on every nonzero integer vector.  Every constructor in this module
re-certifies its output through the lattice module, even where a lemma
guarantees the property; a failed certification here is a bug, not an input
problem.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactmat import CartanData, DomainError, RationalMatrix, inverse, kron
from .lattice import (
    DEFAULT_DIM_CAP,
    LatticeMinimum,
    certify_integral_positive_definite,
    form_minimum,
)


class CertificationError(ValueError):
    """A constructed weight matrix failed its integral-PD certificate."""


def perm_matrix(perm) -> RationalMatrix:
    """Permutation matrix P with P e_j = e_perm[j] (0-based images)."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise DomainError(f"{perm} is not a permutation of 0..{n - 1}")
    rows = [[0] * n for _ in range(n)]
    for j, i in enumerate(perm):
        rows[i][j] = 1
    return RationalMatrix(rows)


def compose(a, b) -> tuple[int, ...]:
    """(a o b)(i) = a[b[i]]."""
    return tuple(a[x] for x in b)


def _identity_perm(n: int) -> tuple[int, ...]:
    return tuple(range(n))


class PermutationAction:
    """A permutation group on {0..degree-1}, enumerated on construction."""

    __slots__ = ("degree", "generators", "elements")

    def __init__(self, degree: int, generators):
        gens = []
        for g in generators:
            g = tuple(g)
            if sorted(g) != list(range(degree)):
                raise DomainError(f"{g} is not a permutation of degree {degree}")
            gens.append(g)
        self.degree = degree
        self.generators = tuple(gens)
        elems = {_identity_perm(degree)}
        frontier = list(elems)
        while frontier:
            new = []
            for a in frontier:
                for g in gens:
                    c = compose(g, a)
                    if c not in elems:
                        elems.add(c)
                        new.append(c)
            frontier = new
        self.elements = tuple(sorted(elems))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def matrices(self) -> tuple[RationalMatrix, ...]:
        return tuple(perm_matrix(g) for g in self.elements)

    def __repr__(self) -> str:
        return f"PermutationAction(degree={self.degree}, order={self.order})"


@dataclass(frozen=True)
class WeightMatrix:
    matrix: RationalMatrix
    certificate: LatticeMinimum
    provenance: str


def certified_weight(
    matrix: RationalMatrix, provenance: str, max_dim: int = DEFAULT_DIM_CAP
) -> WeightMatrix:
    if not matrix.is_symmetric():
        raise CertificationError(f"{provenance}: constructed matrix is not symmetric")
    cert = certify_integral_positive_definite(matrix, max_dim=max_dim)
    if not cert.ok:
        raise CertificationError(f"{provenance}: {cert.reason}")
    return WeightMatrix(matrix=matrix, certificate=cert.minimum, provenance=provenance)


def wada_weight(n: int, max_dim: int = DEFAULT_DIM_CAP) -> WeightMatrix:
    """Half the path-graph Gram matrix: 1 on the diagonal, -1/2 off it.

    This is the weight matrix of the quadratic form
    sum x_i^2 - sum x_i x_{i+1}; its minimum over nonzero integer vectors is 1.
    """
    if n < 1:
        raise DomainError("size must be at least 1")
    half = Fraction(-1, 2)
    rows = [
        [1 if i == j else (half if abs(i - j) == 1 else 0) for j in range(n)]
        for i in range(n)
    ]
    return certified_weight(RationalMatrix(rows), "wada-path", max_dim=max_dim)


def commutes_with(matrix: RationalMatrix, perm) -> bool:
    p = perm_matrix(perm)
    return matrix @ p == p @ matrix


def _shift_matrix(m: int) -> RationalMatrix:
    rows = [[1 if j == i + 1 else 0 for j in range(m)] for i in range(m)]
    return RationalMatrix(rows)


def block_tridiagonal_weight(
    w: WeightMatrix | RationalMatrix,
    perm,
    m: int,
    max_dim: int = DEFAULT_DIM_CAP,
) -> WeightMatrix:
    """Block tridiagonal blow-up with W on the diagonal and -(1/2)PW, -(1/2)P^tW
    on the super/sub diagonals; requires W P = P W exactly."""
    wm = w.matrix if isinstance(w, WeightMatrix) else w
    if m < 1:
        raise DomainError("block count must be at least 1")
    perm = tuple(perm)
    p = perm_matrix(perm)
    if wm @ p != p @ wm:
        raise DomainError("weight matrix does not commute with the permutation")
    if m == 1:
        return certified_weight(wm, "block-tridiagonal(m=1)", max_dim=max_dim)
    half = Fraction(1, 2)
    shift = _shift_matrix(m)
    big = (
        kron(RationalMatrix.identity(m), wm)
        - kron(shift, (p @ wm).scale(half))
        - kron(shift.transpose(), (p.transpose() @ wm).scale(half))
    )
    return certified_weight(big, f"block-tridiagonal(m={m})", max_dim=max_dim)


def symmetrize(
    w: WeightMatrix | RationalMatrix,
    action: PermutationAction,
    max_dim: int = DEFAULT_DIM_CAP,
) -> WeightMatrix:
    """Group-average (1/2n) sum_g P_g (W + W^t) P_g^t over the action.

    The result commutes with every P_g and has the same trace pairing
    tr(W C) against any C that commutes with the action.
    """
    wm = w.matrix if isinstance(w, WeightMatrix) else w
    if isinstance(w, RationalMatrix):
        cert = certify_integral_positive_definite(wm, max_dim=max_dim)
        if not cert.ok:
            raise CertificationError(f"symmetrize input: {cert.reason}")
    if wm.rows != action.degree:
        raise DomainError("action degree does not match matrix size")
    n = action.order
    sym = wm + wm.transpose()
    acc = RationalMatrix.zeros(wm.rows, wm.cols)
    for pmat in action.matrices():
        acc = acc + (pmat @ sym @ pmat.transpose())
    avg = acc.scale(Fraction(1, 2 * n))
    for pmat in action.matrices():
        assert avg @ pmat == pmat @ avg
    return certified_weight(avg, "symmetrized", max_dim=max_dim)


def from_quadratic_form(
    coeffs, size: int | None = None, max_dim: int = DEFAULT_DIM_CAP
) -> WeightMatrix:
    """Weight matrix of an integral quadratic form sum_{i<=j} q_ij x_i x_j.

    ``coeffs`` maps 1-indexed pairs (i, j), i <= j, to integer coefficients,
    or is an iterable of (i, j, q_ij) triples.  W_ii = q_ii and
    W_ij = q_ij / 2 off the diagonal, so x W x^t reproduces the form.
    """
    if not isinstance(coeffs, dict):
        coeffs = {(i, j): v for i, j, v in coeffs}
    if not coeffs:
        raise DomainError("empty quadratic form")
    top = 0
    for (i, j), v in coeffs.items():
        if i < 1 or j < i:
            raise DomainError(f"coefficient index ({i},{j}) must satisfy 1 <= i <= j")
        if not isinstance(v, int):
            raise DomainError("form coefficients must be integers")
        top = max(top, j)
    size = top if size is None else max(size, top)
    rows = [[Fraction(0)] * size for _ in range(size)]
    for (i, j), v in coeffs.items():
        if i == j:
            rows[i - 1][i - 1] = Fraction(v)
        else:
            rows[i - 1][j - 1] = Fraction(v, 2)
            rows[j - 1][i - 1] = Fraction(v, 2)
    return certified_weight(RationalMatrix(rows), "quadratic-form", max_dim=max_dim)


def _heuristic_path_order(c: RationalMatrix) -> tuple[int, ...]:
    """Greedy + 2-opt heuristic for a heavy Hamiltonian path (deterministic)."""
    n = c.rows
    if n == 1:
        return (0,)
    start = max(
        ((i, j) for i in range(n) for j in range(i + 1, n)),
        key=lambda e: (c[e[0], e[1]], -e[0], -e[1]),
    )
    path = [start[0], start[1]]
    used = set(path)
    while len(path) < n:
        choices = []
        for v in range(n):
            if v in used:
                continue
            choices.append((c[path[-1], v], 1, -v, v))
            choices.append((c[path[0], v], 0, -v, v))
        weight, side, _, v = max(choices)
        if side == 1:
            path.append(v)
        else:
            path.insert(0, v)
        used.add(v)

    def edge(a, b):
        return c[path[a], path[b]]

    for _ in range(200):
        improved = False
        for a in range(n - 1):
            for b in range(a + 1, n):
                delta = Fraction(0)
                if a > 0:
                    delta += edge(a - 1, b) - edge(a - 1, a)
                if b < n - 1:
                    delta += edge(a, b + 1) - edge(b, b + 1)
                if delta > 0:
                    path[a : b + 1] = reversed(path[a : b + 1])
                    improved = True
        if not improved:
            break
    return tuple(path)


def _reorder_as(base: RationalMatrix, order) -> RationalMatrix:
    n = base.rows
    rows = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            rows[order[a]][order[b]] = base[a, b]
    return RationalMatrix(rows)


def weight_candidates(
    c: CartanData,
    action: PermutationAction | None = None,
    max_dim: int = DEFAULT_DIM_CAP,
) -> list[tuple[WeightMatrix, Fraction]]:
    """Certified weight matrices paired with tr(W C), sorted ascending.

    Emits the identity, the path weight under the input ordering, the path
    weight under a heuristic heavy-path reordering, the scaled inverse Cartan
    matrix C^{-1}/m (whose trace pairing is exactly l/m), and symmetrized
    variants under the action.  These are candidates, not proven optima.
    """
    l = c.l
    cm = c.matrix
    out: list[WeightMatrix] = []
    out.append(
        certified_weight(RationalMatrix.identity(l), "identity", max_dim=max_dim)
    )
    wada = wada_weight(l, max_dim=max_dim)
    out.append(wada)
    order = _heuristic_path_order(cm)
    if order != tuple(range(l)):
        out.append(
            certified_weight(
                _reorder_as(wada.matrix, order), "wada-path-reordered", max_dim=max_dim
            )
        )
    cinv = inverse(cm)
    mval = form_minimum(cinv, max_dim=max_dim).value
    out.append(
        certified_weight(cinv.scale(1 / mval), "inverse-cartan", max_dim=max_dim)
    )
    if action is not None and not action.is_trivial:
        for wm in list(out):
            if not all(commutes_with(wm.matrix, g) for g in action.generators):
                averaged = symmetrize(wm, action, max_dim=max_dim)
                out.append(
                    WeightMatrix(
                        matrix=averaged.matrix,
                        certificate=averaged.certificate,
                        provenance=f"symmetrized-{wm.provenance}",
                    )
                )
    scored = [(wm, (wm.matrix @ cm).trace()) for wm in out]
    scored.sort(key=lambda t: (t[1], t[0].provenance))
    return scored
