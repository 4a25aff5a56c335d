"""Cyclotomic integer arithmetic for prime-power conductor, and verification
of the structural identities of generalized decomposition matrices.

Elements of Z[zeta_q] are stored on the basis zeta^1 .. zeta^phi(q) (a unit
multiple of the power basis), which makes the coefficient matrices A_i of a
decomposition matrix Q = sum A_i zeta^i literal slices of the data.

Verifiers never raise on a mathematical failure: a failed identity is report
content, because these tools exist to locate inconsistent inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .bounds import PreconditionError, SubsectionSpec
from .exactmat import DomainError, RationalMatrix, inverse, elementary_divisors, rank
from .ntheory import euler_phi_prime_power, prime_power_decomposition, units_mod


class InconsistentDataError(ValueError):
    """Raw data does not describe an element of the cyclotomic ring."""


def _conductor_parts(q: int) -> tuple[int, int]:
    """(p, phi(q)) for prime power q; q = 1 uses the phi(1) = 1 convention."""
    if q == 1:
        return 0, 1
    try:
        p, _ = prime_power_decomposition(q)
    except ValueError as exc:
        raise DomainError(f"conductor {q} is not a prime power") from exc
    return p, q - q // p


class CyclotomicInteger:
    """Element of Z[zeta_q] on the basis zeta^1 .. zeta^phi(q)."""

    __slots__ = ("q", "p", "coeffs")

    def __init__(self, q: int, coeffs):
        p, phi = _conductor_parts(q)
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != phi:
            raise DomainError(f"conductor {q} needs {phi} coefficients")
        self.q = q
        self.p = p
        self.coeffs = coeffs

    @classmethod
    def zero(cls, q: int) -> "CyclotomicInteger":
        return cls(q, [0] * _conductor_parts(q)[1])

    @classmethod
    def from_int(cls, q: int, n: int) -> "CyclotomicInteger":
        return cyc_reduce({0: n}, q)

    @classmethod
    def zeta_power(cls, q: int, e: int, coeff: int = 1) -> "CyclotomicInteger":
        return cyc_reduce({e % q: coeff}, q)

    def _check_same(self, other: "CyclotomicInteger"):
        if self.q != other.q:
            raise DomainError("conductors differ")

    def __add__(self, other: "CyclotomicInteger") -> "CyclotomicInteger":
        self._check_same(other)
        return CyclotomicInteger(
            self.q, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __sub__(self, other: "CyclotomicInteger") -> "CyclotomicInteger":
        self._check_same(other)
        return CyclotomicInteger(
            self.q, [a - b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __neg__(self) -> "CyclotomicInteger":
        return CyclotomicInteger(self.q, [-a for a in self.coeffs])

    def __mul__(self, other) -> "CyclotomicInteger":
        if isinstance(other, int):
            return CyclotomicInteger(self.q, [other * a for a in self.coeffs])
        self._check_same(other)
        q = self.q
        if q == 1:
            return CyclotomicInteger(1, [self.coeffs[0] * other.coeffs[0]])
        raw = [0] * q
        for i, a in enumerate(self.coeffs, start=1):
            if a:
                for j, b in enumerate(other.coeffs, start=1):
                    if b:
                        raw[(i + j) % q] += a * b
        return cyc_reduce(raw, q)

    __rmul__ = __mul__

    def galois(self, gamma: int) -> "CyclotomicInteger":
        """Apply zeta -> zeta^gamma; gamma must be a unit modulo q."""
        q = self.q
        if q == 1:
            return self
        gamma %= q
        if gcd(gamma, q) != 1:
            raise DomainError(f"{gamma} is not a unit modulo {q}")
        raw = [0] * q
        for i, a in enumerate(self.coeffs, start=1):
            if a:
                raw[i * gamma % q] += a
        return cyc_reduce(raw, q)

    def conjugate(self) -> "CyclotomicInteger":
        return self.galois(self.q - 1) if self.q > 1 else self

    def residue_at_one(self) -> int:
        """Image under zeta -> 1 (reduction modulo the prime above p)."""
        return sum(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CyclotomicInteger)
            and self.q == other.q
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.q, self.coeffs))

    def __repr__(self) -> str:
        if self.q == 1:
            return f"Cyc(q=1, {self.coeffs[0]})"
        body = " + ".join(
            f"{c}*z^{i}" for i, c in enumerate(self.coeffs, start=1) if c
        )
        return f"Cyc(q={self.q}, {body or '0'})"


def cyc_reduce(raw, q: int) -> CyclotomicInteger:
    """Reduce coefficients on zeta^0..zeta^{q-1} to the canonical basis.

    Uses the prime-power relation 1 + zeta^{q/p} + ... + zeta^{(p-1)q/p} = 0:
    exponents above phi(q) fold down, then zeta^0 is rewritten as
    -(zeta^{q/p} + ... + zeta^{(p-1)q/p}).
    """
    if q == 1:
        if isinstance(raw, dict):
            return CyclotomicInteger(1, [sum(raw.values())])
        return CyclotomicInteger(1, [sum(raw)])
    p, phi = _conductor_parts(q)
    arr = [0] * q
    if isinstance(raw, dict):
        for e, c in raw.items():
            arr[int(e) % q] += int(c)
    else:
        seq = list(raw)
        if len(seq) > q:
            raise DomainError(f"need at most {q} raw coefficients")
        for e, c in enumerate(seq):
            arr[e] += int(c)
    qp = q // p
    for e in range(phi + 1, q):
        c = arr[e]
        if c:
            arr[e] = 0
            r = e - phi
            for j in range(p - 1):
                arr[r + j * qp] -= c
    c0 = arr[0]
    if c0:
        arr[0] = 0
        for j in range(1, p):
            arr[j * qp] -= c0
    return CyclotomicInteger(q, arr[1 : phi + 1])


def galois_apply(gamma: int, x: CyclotomicInteger) -> CyclotomicInteger:
    return x.galois(gamma)


def field_trace(x: CyclotomicInteger) -> int:
    """Absolute trace of Q(zeta_q)/Q, by the standard case formula:
    phi(q) on exponent 0, -q/p on nonzero multiples of q/p, else 0."""
    if x.q == 1:
        return x.coeffs[0]
    qp = x.q // x.p
    total = 0
    for i, c in enumerate(x.coeffs, start=1):
        if c and i % qp == 0:
            total -= c * qp
    return total


def neg_residue_index(i: int, q: int, p: int) -> int:
    """The unique i' with 0 <= i' < q/p and i' = -i (mod q/p)."""
    if q == 1:
        return 0
    phi = q - q // p
    if not 1 <= i <= phi:
        raise DomainError(f"index {i} outside 1..{phi}")
    qp = q // p
    ip = (-i) % qp
    assert qp <= i + ip <= phi
    return ip


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)


class GenDecData:
    """Coefficient stack A_1..A_phi(q) of a generalized decomposition matrix."""

    __slots__ = ("stack", "spec")

    def __init__(self, stack, spec: SubsectionSpec):
        stack = tuple(
            m if isinstance(m, RationalMatrix) else RationalMatrix(m) for m in stack
        )
        phi = euler_phi_prime_power(spec.q)
        if len(stack) != phi:
            raise DomainError(f"need {phi} coefficient matrices, got {len(stack)}")
        k, l = stack[0].rows, stack[0].cols
        for m in stack:
            if m.rows != k or m.cols != l:
                raise DomainError("coefficient matrices must share one shape")
            if not m.is_integral():
                raise DomainError("coefficient matrices must be integral")
        self.stack = stack
        self.spec = spec

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def k(self) -> int:
        return self.stack[0].rows

    @property
    def l(self) -> int:
        return self.stack[0].cols

    def entry(self, r: int, c: int) -> CyclotomicInteger:
        return CyclotomicInteger(self.q, [int(m[r, c]) for m in self.stack])

    def row(self, r: int) -> tuple[CyclotomicInteger, ...]:
        return tuple(self.entry(r, c) for c in range(self.l))

    def q_matrix(self) -> list[list[CyclotomicInteger]]:
        return [[self.entry(r, c) for c in range(self.l)] for r in range(self.k)]

    def assembled(self) -> RationalMatrix:
        rows = []
        for r in range(self.k):
            row = []
            for m in self.stack:
                row.extend(m.row(r))
            rows.append(row)
        return RationalMatrix(rows)

    def __repr__(self) -> str:
        return f"GenDecData(k={self.k}, l={self.l}, q={self.q})"


def fourier_split(entries, spec: SubsectionSpec | None = None) -> GenDecData:
    """Split a matrix over Z[zeta_q] into its integer coefficient stack.

    Each A_i is computed through the trace identity
    A_i = T(Q (zeta^{-i} - zeta^{i'})) / q and then checked against direct
    coefficient extraction (reassembly); any disagreement or non-divisibility
    signals malformed input.
    """
    rows = [list(r) for r in entries]
    if not rows or not rows[0]:
        raise DomainError("matrix must be at least 1x1")
    q = rows[0][0].q
    for r in rows:
        for x in r:
            if x.q != q:
                raise DomainError("entries must share one conductor")
    p, phi = _conductor_parts(q)
    if spec is None:
        spec = SubsectionSpec(p if q > 1 else 2, q)
    if spec.q != q:
        raise DomainError(f"spec has q = {spec.q} but entries have conductor {q}")
    k, l = len(rows), len(rows[0])
    stack = []
    for i in range(1, phi + 1):
        if q == 1:
            a = [[rows[r][c].coeffs[0] for c in range(l)] for r in range(k)]
        else:
            ip = neg_residue_index(i, q, p)
            factor = CyclotomicInteger.zeta_power(q, q - i) - CyclotomicInteger.zeta_power(q, ip)
            a = []
            for r in range(k):
                arow = []
                for c in range(l):
                    t = field_trace(rows[r][c] * factor)
                    quot, rem = divmod(t, q)
                    if rem:
                        raise InconsistentDataError(
                            f"trace at entry ({r},{c}), index {i} is {t}, "
                            f"not divisible by q = {q}"
                        )
                    arow.append(quot)
                a.append(arow)
        stack.append(RationalMatrix(a))
    # reassembly: the stack must reproduce the basis coefficients exactly
    for r in range(k):
        for c in range(l):
            got = tuple(int(stack[i][r, c]) for i in range(phi))
            if got != rows[r][c].coeffs:
                raise InconsistentDataError(
                    f"reassembly failed at entry ({r},{c}): {got} != {rows[r][c].coeffs}"
                )
    return GenDecData(stack, spec)


def _cyc_product_t_conj(a, b, q: int):
    """(A^t . conj(B)) for equal-height cyclotomic matrices A, B."""
    k = len(a)
    la, lb = len(a[0]), len(b[0])
    out = []
    for i in range(la):
        row = []
        for j in range(lb):
            acc = CyclotomicInteger.zero(q)
            for r in range(k):
                acc = acc + a[r][i] * b[r][j].conjugate()
            row.append(acc)
        out.append(row)
    return out


def _first_mismatch(product, expected: RationalMatrix, q: int):
    for i in range(len(product)):
        for j in range(len(product[0])):
            want = CyclotomicInteger.from_int(q, int(expected[i, j]))
            if product[i][j] != want:
                return i, j, product[i][j], want
    return None


def verify_orthogonality(data: GenDecData, c_bar) -> VerificationReport:
    """Check Q^t conj(Q) = q C_bar, the Galois-twisted products against
    C_b P_gamma (0 across distinct cosets), and that C_b commutes with every
    fusion permutation matrix."""
    spec = data.spec
    q, l = data.q, data.l
    if c_bar.l != l:
        raise DomainError("Cartan size does not match the column count")
    cb = c_bar.matrix.scale(q)  # Cartan matrix of b itself
    qmat = data.q_matrix()
    checks = []

    prod = _cyc_product_t_conj(qmat, qmat, q)
    bad = _first_mismatch(prod, cb, q)
    checks.append(
        CheckResult(
            "orthogonality",
            bad is None,
            "Q^t conj(Q) = q*C holds"
            if bad is None
            else f"entry {bad[0], bad[1]}: {bad[2]!r} != {bad[3]!r}",
        )
    )

    units = units_mod(q)
    images = {g: [[x.galois(g) for x in row] for row in qmat] for g in units}
    nset = set(spec.elements)
    all_ok = True
    detail = f"all {len(units)**2} Galois pairs match"
    for g in units:
        for d in units:
            ratio = g * pow(d, -1, q) % q if q > 1 else 1
            prod = _cyc_product_t_conj(images[g], images[d], q)
            if ratio in nset:
                pm = spec.perm_matrix_of(ratio, l)
                expected = cb @ pm
                bad = _first_mismatch(prod, expected, q)
            else:
                bad = _first_mismatch(prod, RationalMatrix.zeros(l, l), q)
            if bad is not None and all_ok:
                all_ok = False
                detail = (
                    f"pair (gamma={g}, delta={d}) entry {bad[0], bad[1]}: "
                    f"{bad[2]!r} != {bad[3]!r}"
                )
    checks.append(CheckResult("galois-orthogonality", all_ok, detail))

    comm_ok = True
    comm_detail = "C commutes with every fusion permutation"
    for unit in spec.elements:
        pm = spec.perm_matrix_of(unit, l)
        if cb @ pm != pm @ cb:
            comm_ok = False
            comm_detail = f"C P_{unit} != P_{unit} C"
            break
    checks.append(CheckResult("cartan-permutation-commutation", comm_ok, comm_detail))
    return VerificationReport(tuple(checks))


def _indicator_weight(i, j, ip, jp, delta, q) -> int:
    return (
        (1 if (j * delta - i) % q == 0 else 0)
        - (1 if (j * delta + ip) % q == 0 else 0)
        + (1 if (jp * delta - ip) % q == 0 else 0)
        - (1 if (jp * delta + i) % q == 0 else 0)
    )


def verify_gram_identity(data: GenDecData, c_bar) -> VerificationReport:
    """Check every product A_i^t A_j against the fusion indicator formula,
    plus the block-vanishing consequences for p | i and for the Sylow part."""
    spec = data.spec
    q, p, l = data.q, data.p, data.l
    if c_bar.l != l:
        raise DomainError("Cartan size does not match the column count")
    cm = c_bar.matrix
    checks = []
    if q == 1:
        lhs = data.stack[0].transpose() @ data.stack[0]
        checks.append(
            CheckResult(
                "gram(1,1)",
                lhs == cm,
                "A_1^t A_1 = C" if lhs == cm else f"A_1^t A_1 = {lhs!r} != C",
            )
        )
        return VerificationReport(tuple(checks))

    phi = len(data.stack)
    zero = RationalMatrix.zeros(l, l)
    for i in range(1, phi + 1):
        ip = neg_residue_index(i, q, p)
        for j in range(1, phi + 1):
            jp = neg_residue_index(j, q, p)
            lhs = data.stack[i - 1].transpose() @ data.stack[j - 1]
            acc = zero
            for delta in spec.elements:
                w = _indicator_weight(i, j, ip, jp, delta, q)
                if w:
                    acc = acc + spec.perm_matrix_of(delta, l).scale(w)
            rhs = cm @ acc
            checks.append(
                CheckResult(
                    f"gram({i},{j})",
                    lhs == rhs,
                    "" if lhs == rhs else f"{lhs!r} != {rhs!r}",
                )
            )

    if q > p:
        offenders = []
        for i in range(1, phi + 1):
            for j in range(1, phi + 1):
                if (i % p == 0) != (j % p == 0):
                    if data.stack[i - 1].transpose() @ data.stack[j - 1] != zero:
                        offenders.append((i, j))
        checks.append(
            CheckResult(
                "p-index block vanishing",
                not offenders,
                "A_i^t A_j = 0 whenever exactly one index is divisible by p"
                if not offenders
                else f"nonzero cross blocks at {offenders}",
            )
        )

    n_p = spec.n_p
    if n_p > 1:
        offenders = []
        for i in range(1, phi + 1):
            for j in range(1, phi + 1):
                if (i % n_p == 0) != (j % n_p == 0):
                    if data.stack[i - 1].transpose() @ data.stack[j - 1] != zero:
                        offenders.append((i, j))
        checks.append(
            CheckResult(
                "sylow block vanishing",
                not offenders,
                "A_i^t A_j = 0 across the n_p-divisibility split"
                if not offenders
                else f"nonzero cross blocks at {offenders}",
            )
        )
    return VerificationReport(tuple(checks))


def rank_check(data: GenDecData) -> VerificationReport:
    """The assembled coefficient matrix must have rank l*phi(q)/n."""
    spec = data.spec
    phi = len(data.stack)
    num = data.l * phi
    if num % spec.n:
        return VerificationReport(
            (
                CheckResult(
                    "rank",
                    False,
                    f"n = {spec.n} does not divide l*phi(q) = {num}; "
                    "the subsection data is inconsistent",
                ),
            )
        )
    expected = num // spec.n
    r = rank(data.assembled())
    return VerificationReport(
        (
            CheckResult(
                "rank",
                r == expected,
                f"rank {r}, expected l*phi(q)/n = {expected}",
            ),
        )
    )


def height_zero_valuation_check(
    row, c_tilde: RationalMatrix, p: int, q: int
) -> bool:
    """True iff d C~ conj(d)^t has p-adic valuation zero.

    Valuation zero is equivalent to a nonzero image under zeta -> 1 modulo p,
    since (1 - zeta) generates the unique prime over p for prime-power
    conductor.  ``c_tilde`` must be the integral matrix p^d C^{-1}.
    """
    if not c_tilde.is_integral():
        raise PreconditionError("p^d C^{-1} must have integer entries")
    row = list(row)
    l = len(row)
    if c_tilde.rows != l or c_tilde.cols != l:
        raise DomainError("row length does not match the matrix")
    acc = CyclotomicInteger.zero(q)
    for a in range(l):
        if row[a].is_zero():
            continue
        for b in range(l):
            cab = int(c_tilde[a, b])
            if cab:
                acc = acc + row[a] * row[b].conjugate() * cab
    return acc.residue_at_one() % p != 0


def c_tilde_of(c_bar) -> RationalMatrix:
    """p^d C^{-1} for the dominated block, d read off the elementary divisors."""
    top = elementary_divisors(c_bar.matrix)[-1]
    return inverse(c_bar.matrix).scale(top)


def verify_all(data: GenDecData, c_bar, heights=None) -> VerificationReport:
    """Run all verifiers; height-dependent checks only when heights are given."""
    checks = list(verify_orthogonality(data, c_bar).checks)
    checks.extend(verify_gram_identity(data, c_bar).checks)
    checks.extend(rank_check(data).checks)

    assembled = data.assembled()
    nonzero = sum(1 for r in range(data.k) if any(assembled.row(r)))
    checks.append(
        CheckResult(
            "nonzero-rows",
            True,
            f"{nonzero} of {data.k} rows of the coefficient matrix are nonzero",
        )
    )
    if heights is not None:
        heights = list(heights)
        if len(heights) != data.k:
            raise DomainError("need one height per row")
        ct = c_tilde_of(c_bar)
        offenders = []
        for r, h in enumerate(heights):
            if h == 0 and not height_zero_valuation_check(
                data.row(r), ct, data.p, data.q
            ):
                offenders.append(r)
        checks.append(
            CheckResult(
                "height-zero valuations",
                not offenders,
                "every height-zero row has valuation zero"
                if not offenders
                else f"rows {offenders} fail the valuation-zero test",
            )
        )
    return VerificationReport(tuple(checks))
