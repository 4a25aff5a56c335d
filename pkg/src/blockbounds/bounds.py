"""Upper bounds on block character counts from local invariants.

Every bound evaluates to an exact rational.  Flooring to an integer is left
to the caller (``BoundReport.integer_bound``), and strictness information is
reported but never used to tighten a value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gcd

from . import ntheory
from .exactmat import (
    CartanData,
    DomainError,
    RationalMatrix,
    determinant,
    elementary_divisors,
    inverse,
)
from .lattice import DEFAULT_DIM_CAP, form_minimum
from .weights import (
    PermutationAction,
    WeightMatrix,
    certified_weight,
    commutes_with,
    compose,
    from_quadratic_form,
    perm_matrix,
    symmetrize,
    wada_weight,
    weight_candidates,
)


class PreconditionError(ValueError):
    """A bound was invoked outside its hypotheses."""


class SubsectionSpec:
    """Local data of a subsection: p, q = |<u>|, and the fusion quotient.

    The fusion quotient N is given by generating units modulo q, optionally
    paired (index by index) with generating permutations of its action on the
    Brauer characters of b.
    """

    __slots__ = ("p", "q", "n_generators", "ibr_action", "elements", "_rep")

    def __init__(
        self,
        p: int,
        q: int,
        n_generators=(),
        ibr_action: PermutationAction | None = None,
    ):
        if not ntheory.is_prime(p):
            raise DomainError(f"{p} is not a prime")
        if not ntheory.is_power_of(q, p):
            raise DomainError(f"q = {q} is not a power of p = {p}")
        gens = tuple(g % q if q > 1 else 1 for g in n_generators)
        if q > 1:
            for g in gens:
                if gcd(g, q) != 1:
                    raise DomainError(f"generator {g} is not a unit modulo {q}")
        if ibr_action is not None and len(ibr_action.generators) != len(gens):
            raise DomainError(
                "need exactly one action generator per unit generator "
                f"({len(gens)} units, {len(ibr_action.generators)} permutations)"
            )
        self.p = p
        self.q = q
        self.n_generators = gens
        self.ibr_action = ibr_action
        self.elements = ntheory.unit_group_closure(q, gens)
        self._rep = self._build_rep()

    def _build_rep(self) -> dict[int, tuple[int, ...]]:
        """Homomorphism N -> S_l as a unit -> permutation table."""
        if self.ibr_action is None:
            return {}
        degree = self.ibr_action.degree
        ident = tuple(range(degree))
        rep = {1: ident}
        pairs = list(zip(self.n_generators, self.ibr_action.generators))
        frontier = [(1, ident)]
        while frontier:
            new = []
            for unit, perm in frontier:
                for g, sigma in pairs:
                    u2 = unit * g % self.q if self.q > 1 else 1
                    p2 = compose(sigma, perm)
                    if u2 in rep:
                        if rep[u2] != p2:
                            raise DomainError(
                                "permutations do not define an action of the "
                                "fusion quotient (inconsistent images)"
                            )
                    else:
                        rep[u2] = p2
                        new.append((u2, p2))
            frontier = new
        return rep

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def n_p(self) -> int:
        return ntheory.part_of(self.n, self.p)[0]

    @property
    def n_pprime(self) -> int:
        return ntheory.part_of(self.n, self.p)[1]

    @property
    def acts_nontrivially(self) -> bool:
        return any(
            perm != tuple(range(len(perm))) for perm in self._rep.values()
        )

    def perm_of(self, unit: int, degree: int) -> tuple[int, ...]:
        if self._rep:
            if self.ibr_action.degree != degree:
                raise DomainError(
                    f"action degree {self.ibr_action.degree} does not match l = {degree}"
                )
            return self._rep[unit % self.q if self.q > 1 else 1]
        return tuple(range(degree))

    def perm_matrix_of(self, unit: int, degree: int) -> RationalMatrix:
        return perm_matrix(self.perm_of(unit, degree))

    def __repr__(self) -> str:
        return (
            f"SubsectionSpec(p={self.p}, q={self.q}, n={self.n}, "
            f"acts_nontrivially={self.acts_nontrivially})"
        )


@dataclass(frozen=True)
class BoundReport:
    name: str
    target: str  # "k(B)" or "k0(B)"
    value: Fraction
    citation: str = ""
    weak_value: Fraction | None = None
    inputs: tuple[tuple[str, str], ...] = ()
    strict: tuple[tuple[str, bool], ...] = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.value < 1:
            raise AssertionError(
                f"bound {self.name} evaluated to {self.value} < 1; "
                "character counts are at least 1, so the inputs are inconsistent"
            )

    @property
    def integer_bound(self) -> int:
        return floor(self.value)


def _echo(**kwargs) -> tuple[tuple[str, str], ...]:
    return tuple(sorted((k, str(v)) for k, v in kwargs.items() if v is not None))


def _renamed(rep: BoundReport, name: str) -> BoundReport:
    return BoundReport(
        name=name,
        target=rep.target,
        value=rep.value,
        citation=rep.citation,
        weak_value=rep.weak_value,
        inputs=rep.inputs,
        strict=rep.strict,
        notes=rep.notes,
    )


def k0_semidirect(spec: SubsectionSpec) -> int:
    """Number of height-zero characters of the semidirect product <u> x| N.

    For odd p this is n + (q - n_p)/n_p'.  For p = 2 the product is a
    2-group, so the count is its abelianization order n*d with
    d = gcd(q, gamma - 1 over gamma in N).  Degenerate cases return q.
    """
    q, p, n = spec.q, spec.p, spec.n
    if q <= 2 or n == 1:
        return q
    if p > 2:
        n_p, n_pp = spec.n_p, spec.n_pprime
        num = q - n_p
        if num % n_pp:
            raise AssertionError("p'-part does not divide q - n_p")
        return n + num // n_pp
    d = q
    for gamma in spec.elements:
        d = gcd(d, gamma - 1)
    return n * d


def _normalized_cartan(
    c: CartanData, spec: SubsectionSpec, cartan_is_b: bool
) -> CartanData:
    """Return the Cartan matrix of the dominated block (b's divided by q)."""
    if not cartan_is_b or spec.q == 1:
        return c
    q = spec.q
    scaled = c.matrix.scale(Fraction(1, q))
    if not scaled.is_integral():
        raise DomainError(
            f"Cartan matrix of b must be divisible by q = {q}; "
            "it does not match the subsection"
        )
    _, k = ntheory.prime_power_decomposition(q)
    defect = None if c.defect is None else c.defect - k
    if defect is not None and defect < 0:
        raise DomainError("defect smaller than the order of u")
    return CartanData(scaled, c.p, defect)


def _aligned_weight(
    weight: WeightMatrix, spec: SubsectionSpec, degree: int, max_dim: int
) -> tuple[WeightMatrix, tuple[str, ...]]:
    """Symmetrize the weight over the action when it does not commute."""
    if spec.ibr_action is None or spec.ibr_action.is_trivial:
        return weight, ()
    if spec.ibr_action.degree != degree:
        raise DomainError(
            f"action degree {spec.ibr_action.degree} does not match l = {degree}"
        )
    if all(commutes_with(weight.matrix, g) for g in spec.ibr_action.generators):
        return weight, ()
    averaged = symmetrize(weight, spec.ibr_action, max_dim=max_dim)
    return averaged, ("weight symmetrized over the fusion action",)


def subsection_k_bound(
    c_bar: CartanData,
    spec: SubsectionSpec,
    weight: WeightMatrix,
    cartan_is_b: bool = False,
    max_dim: int = DEFAULT_DIM_CAP,
) -> BoundReport:
    """k(B) <= (n + (q-1)/n) tr(W C) <= q tr(W C) for a major subsection.

    ``c_bar`` is the Cartan matrix of the dominated block; pass
    ``cartan_is_b=True`` to supply b's Cartan matrix instead (it is divided
    by q, and non-divisibility is rejected rather than silently misused).
    """
    if spec.n % spec.p == 0:
        raise PreconditionError(
            "the k(B) bound needs the fusion quotient to be a p'-group "
            "(its order divides p - 1)"
        )
    c = _normalized_cartan(c_bar, spec, cartan_is_b)
    weight, notes = _aligned_weight(weight, spec, c.l, max_dim)
    tr = (weight.matrix @ c.matrix).trace()
    n, q = spec.n, spec.q
    value = (Fraction(n) + Fraction(q - 1, n)) * tr
    return BoundReport(
        name="subsection k(B) bound",
        target="k(B)",
        value=value,
        citation="weighted Cartan trace over a major subsection",
        weak_value=q * tr,
        inputs=_echo(q=q, n=n, trace=tr, weight=weight.provenance),
        strict=(
            ("first_strict", spec.acts_nontrivially),
            ("second_strict", 1 < n < q - 1),
        ),
        notes=notes,
    )


def subsection_k0_bound(
    c_bar: CartanData,
    spec: SubsectionSpec,
    weight: WeightMatrix,
    cartan_is_b: bool = False,
    max_dim: int = DEFAULT_DIM_CAP,
) -> BoundReport:
    """k0(B) <= k0(<u> x| N) tr(W C) <= q tr(W C), any subsection."""
    c = _normalized_cartan(c_bar, spec, cartan_is_b)
    weight, notes = _aligned_weight(weight, spec, c.l, max_dim)
    tr = (weight.matrix @ c.matrix).trace()
    k0 = k0_semidirect(spec)
    return BoundReport(
        name="subsection k0(B) bound",
        target="k0(B)",
        value=k0 * tr,
        citation="weighted Cartan trace over a subsection",
        weak_value=spec.q * tr,
        inputs=_echo(q=spec.q, n=spec.n, k0_semidirect=k0, trace=tr,
                     weight=weight.provenance),
        strict=(("first_strict", spec.acts_nontrivially),),
        notes=notes,
    )


def classical_bounds(
    c: CartanData, ordering=None, partition=None
) -> list[BoundReport]:
    """Trace, Brandt, Wada, partition-determinant and Brauer-Feit bounds."""
    l = c.l
    cm = c.matrix
    tr = cm.trace()
    reports = [
        BoundReport(
            name="trace bound",
            target="k(B)",
            value=tr,
            citation="diagonal decomposition-number counting",
            inputs=_echo(l=l),
        ),
        BoundReport(
            name="Brandt bound",
            target="k(B)",
            value=tr - l + 1,
            citation="Brandt",
            inputs=_echo(l=l),
        ),
    ]
    order = tuple(ordering) if ordering is not None else tuple(range(l))
    if sorted(order) != list(range(l)):
        raise DomainError(f"{order} is not an ordering of 0..{l - 1}")
    off = sum(cm[order[i], order[i + 1]] for i in range(l - 1))
    reports.append(
        BoundReport(
            name="Wada bound",
            target="k(B)",
            value=tr - off,
            citation="Wada",
            inputs=_echo(ordering=order),
        )
    )
    if partition is not None:
        blocks = [tuple(sorted(b)) for b in partition]
        seen = [i for b in blocks for i in b]
        if sorted(seen) != list(range(l)):
            raise DomainError("partition must cover each index exactly once")
        total = Fraction(0)
        for b in blocks:
            sub = RationalMatrix([[cm[i, j] for j in b] for i in b])
            total += determinant(sub)
        reports.append(
            BoundReport(
                name="partition determinant bound",
                target="k(B)",
                value=total - len(blocks) + 1,
                citation="partitioned Cartan determinants",
                inputs=_echo(partition=blocks),
            )
        )
    if c.defect is not None:
        reports.append(
            BoundReport(
                name="Brauer-Feit bound",
                target="k(B)",
                value=Fraction(c.p ** (2 * c.defect)),
                citation="Brauer-Feit",
                inputs=_echo(p=c.p, defect=c.defect),
            )
        )
    return reports


def kw_bound(c: CartanData, form_coeffs, max_dim: int = DEFAULT_DIM_CAP) -> BoundReport:
    """k(B) <= sum_{i<=j} q_ij c_ij for a positive definite integral form."""
    if not isinstance(form_coeffs, dict):
        form_coeffs = {(i, j): v for i, j, v in form_coeffs}
    l = c.l
    for i, j in form_coeffs:
        if j > l:
            raise DomainError(f"form index ({i},{j}) exceeds matrix size {l}")
    w = from_quadratic_form(form_coeffs, size=l, max_dim=max_dim)
    value = sum(
        Fraction(v) * c.matrix[i - 1, j - 1] for (i, j), v in form_coeffs.items()
    )
    assert value == (w.matrix @ c.matrix).trace()
    return BoundReport(
        name="quadratic form bound",
        target="k(B)",
        value=value,
        citation="Kuelshammer-Wada",
        inputs=_echo(form=tuple(sorted(form_coeffs.items())),
                     minimum=w.certificate.value),
    )


def inverse_cartan_bound(c: CartanData, max_dim: int = DEFAULT_DIM_CAP) -> BoundReport:
    """k(B) <= l/m <= l p^d with m the integer minimum of the C^{-1} form."""
    cinv = inverse(c.matrix)
    mres = form_minimum(cinv, max_dim=max_dim)
    l = c.l
    value = l / mres.value
    top = elementary_divisors(c.matrix)[-1]
    weak = Fraction(l * top)
    if mres.value * top < 1:
        raise AssertionError(
            "inverse Cartan minimum is below 1/p^d; inputs are not a Cartan matrix"
        )
    assert value <= weak
    return BoundReport(
        name="inverse Cartan bound",
        target="k(B)",
        value=value,
        citation="Brauer (5D)",
        weak_value=weak,
        inputs=_echo(l=l, minimum=mres.value, witness=mres.witness,
                     largest_elementary_divisor=top),
    )


def hks_bound(p: int, q: int, s: int, r: int, defect: int) -> BoundReport:
    """k0(B) <= (q + p^s (r^2 - 1)) / (q r) * p^d, for p > 2 and l(b) = 1.

    The l(b) = 1 hypothesis is the caller's responsibility.
    """
    if p == 2:
        raise DomainError("this height-zero bound requires p > 2")
    if not ntheory.is_prime(p):
        raise DomainError(f"{p} is not a prime")
    if not ntheory.is_power_of(q, p):
        raise DomainError(f"q = {q} is not a power of p = {p}")
    if s < 0 or r < 1 or r % p == 0:
        raise DomainError("need s >= 0 and r >= 1 coprime to p")
    if defect < 0 or p**defect % q:
        raise DomainError(
            "the subsection order q must divide p^defect (u lies in a defect group)"
        )
    value = Fraction(q + p**s * (r * r - 1), q * r) * p**defect
    return BoundReport(
        name="normalizer-quotient height-zero bound",
        target="k0(B)",
        value=value,
        citation="normalizer-quotient refinement for a single Brauer character",
        inputs=_echo(p=p, q=q, s=s, r=r, defect=defect),
    )


def dade_cyclic_bound(
    d_order: int, u_order: int, ne_cu: int, ce_u: int
) -> BoundReport:
    """Product bound for abelian defect groups with cyclic quotient D/<u>.

    Equals (a + (|<u>|-1)/a)(b + (|D:<u>|-1)/b) with a = |N_E(<u>)/C_E(u)| and
    b = |C_E(u)| = l(b); Dade's Cartan shape (m + delta_ij) makes this the
    weighted subsection bound with the path weight, which is cross-checked.
    """
    if u_order < 1 or d_order % u_order:
        raise DomainError("|<u>| must divide |D|")
    if ne_cu < 1 or ce_u < 1:
        raise DomainError("group orders must be positive")
    if d_order > 1:
        try:
            p, _ = ntheory.prime_power_decomposition(d_order)
        except ValueError as exc:
            raise DomainError(str(exc)) from exc
        if not ntheory.is_power_of(u_order, p):
            raise DomainError("|D| and |<u>| must be powers of the same prime")
    else:
        p = None
    a, b = ne_cu, ce_u
    quotient = d_order // u_order
    m = Fraction(quotient - 1, b)
    first = a + Fraction(u_order - 1, a)
    second = b + m
    value = first * second
    if value > d_order:
        raise AssertionError("cyclic-defect product bound exceeded |D|")
    # cross-check the trace route: tr(U_b (m + delta)) = b + m
    w = wada_weight(b)
    cmat = RationalMatrix.filled(b, b, m) + RationalMatrix.identity(b)
    assert (w.matrix @ cmat).trace() == second
    notes = []
    if p is not None and m.denominator == 1 and a % p and u_order > 1:
        try:
            gen = ntheory.unit_of_order(u_order, a)
        except ValueError:
            gen = None
        if gen is not None:
            spec = SubsectionSpec(p, u_order, (gen,))
            cartan = CartanData(cmat, p)
            cross = subsection_k_bound(cartan, spec, w)
            assert cross.value == value
            notes.append("verified against the weighted subsection bound")
    return BoundReport(
        name="cyclic quotient product bound",
        target="k(B)",
        value=value,
        citation="Dade cyclic-defect Cartan shape",
        weak_value=Fraction(d_order),
        inputs=_echo(d_order=d_order, u_order=u_order, ne_cu=a, ce_u=b),
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple[BoundReport, ...]
    best_k: BoundReport | None
    best_k0: BoundReport | None
    notes: tuple[str, ...] = field(default_factory=tuple)


def compare_all(
    cartan_b: CartanData,
    spec: SubsectionSpec,
    *,
    forms=(),
    ordering=None,
    partition=None,
    known_kb: int | None = None,
    include_candidates: bool = True,
    max_dim: int = DEFAULT_DIM_CAP,
) -> ComparisonReport:
    """Evaluate every applicable bound; deterministic row order.

    ``cartan_b`` is the Cartan matrix of b itself (q times the dominated
    block's matrix).  k(B)-targeted and k0(B)-targeted rows are ranked
    separately.  The defect-group conjecture comparison is informational
    output, never an assertion.
    """
    q = spec.q
    c_bar = _normalized_cartan(cartan_b, spec, cartan_is_b=True)
    l = cartan_b.l
    if spec.ibr_action is not None and spec.ibr_action.degree != l:
        raise DomainError(
            f"action degree {spec.ibr_action.degree} does not match l = {l}"
        )
    rows: list[BoundReport] = []
    notes: list[str] = []

    classical = classical_bounds(cartan_b, ordering=ordering, partition=partition)
    for rep in classical:
        if q > 1 and rep.name in ("Brandt bound", "partition determinant bound"):
            notes.append(f"{rep.name} skipped: established only for the block's own "
                         "Cartan matrix (q = 1)")
            continue
        rows.append(rep)

    for idx, form in enumerate(forms, start=1):
        rep = kw_bound(cartan_b, form, max_dim=max_dim)
        rows.append(_renamed(rep, f"quadratic form bound (form #{idx})"))

    rows.append(inverse_cartan_bound(cartan_b, max_dim=max_dim))

    candidates = []
    if include_candidates:
        candidates = weight_candidates(c_bar, spec.ibr_action, max_dim=max_dim)

    if spec.n % spec.p:
        for idx, form in enumerate(forms, start=1):
            w = from_quadratic_form(form, size=l, max_dim=max_dim)
            rep = subsection_k_bound(c_bar, spec, w, max_dim=max_dim)
            rows.append(_renamed(rep, f"subsection k(B) bound (form #{idx})"))
        for wm, _tr in candidates:
            rep = subsection_k_bound(c_bar, spec, wm, max_dim=max_dim)
            rows.append(_renamed(rep, f"subsection k(B) bound ({wm.provenance})"))
    else:
        notes.append(
            "k(B) subsection bounds skipped: fusion quotient order is divisible by p"
        )

    best_weight = candidates[0][0] if candidates else wada_weight(l, max_dim=max_dim)
    rows.append(subsection_k0_bound(c_bar, spec, best_weight, max_dim=max_dim))

    if (
        spec.ibr_action is not None
        and spec.p > 2
        and spec.n_p == 1
        and q > 1
    ):
        w_aligned, _ = _aligned_weight(best_weight, spec, l, max_dim)
        p_n = RationalMatrix.zeros(l, l)
        for unit in spec.elements:
            p_n = p_n + spec.perm_matrix_of(unit, l)
        refined = (w_aligned.matrix @ c_bar.matrix @ p_n).trace() + Fraction(
            q - 1, spec.n
        ) * (w_aligned.matrix @ c_bar.matrix).trace()
        rows.append(
            BoundReport(
                name="refined k0(B) bound",
                target="k0(B)",
                value=refined,
                citation="trace against the summed fusion permutations",
                inputs=_echo(q=q, n=spec.n, weight=w_aligned.provenance),
            )
        )

    if l == 1 and spec.p > 2:
        top = int(cartan_b.matrix[0, 0])
        if ntheory.is_power_of(top, spec.p):
            d = 0
            t = top
            while t > 1:
                t //= spec.p
                d += 1
            s_exp = 0
            t = spec.n_p
            while t > 1:
                t //= spec.p
                s_exp += 1
            rows.append(hks_bound(spec.p, q, s_exp, spec.n_pprime, d))

    k_rows = [r for r in rows if r.target == "k(B)"]
    k0_rows = [r for r in rows if r.target == "k0(B)"]
    best_k = min(k_rows, key=lambda r: r.value) if k_rows else None
    best_k0 = min(k0_rows, key=lambda r: r.value) if k0_rows else None

    if cartan_b.defect is not None and best_k is not None:
        pd = Fraction(cartan_b.p**cartan_b.defect)
        verdict = "consistent with" if best_k.value <= pd else "above"
        notes.append(
            f"defect-group conjecture check (informational): best k(B) bound "
            f"{best_k.value} is {verdict} p^d = {pd}"
        )
    if known_kb is not None:
        for r in k_rows:
            if r.value < known_kb:
                notes.append(
                    f"WARNING: {r.name} = {r.value} lies below the known "
                    f"k(B) = {known_kb}; the inputs are inconsistent"
                )
        if best_k is not None and best_k.value == known_kb:
            notes.append(f"best k(B) bound attains the known value {known_kb}")

    return ComparisonReport(
        rows=tuple(rows), best_k=best_k, best_k0=best_k0, notes=tuple(notes)
    )
