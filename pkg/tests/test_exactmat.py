import random
from fractions import Fraction

import pytest

from blockbounds import (
    CartanData,
    DomainError,
    RationalMatrix,
    ShapeError,
    SingularMatrixError,
    determinant,
    direct_sum,
    elementary_divisors,
    inverse,
    is_positive_definite,
    kron,
    matrix_from_record,
    matrix_to_record,
    trace,
    transpose,
)
from blockbounds.fixtures import a4xa4_cartan, agl18_cartan

from conftest import cofactor_determinant, minor_gcd_divisors, random_unimodular


def ones_plus_identity(n):
    return RationalMatrix([[2 if i == j else 1 for j in range(n)] for i in range(n)])


def test_trace_of_kron_is_product():
    a = RationalMatrix([[2, 1], [1, 2]])
    b = RationalMatrix([[3]])
    assert trace(kron(a, b)) == trace(a) * trace(b) == 12


def test_direct_sum_definition():
    d = direct_sum(RationalMatrix([[1]]), RationalMatrix([[2]]))
    assert d == RationalMatrix([[1, 0], [0, 2]])
    assert trace(d) == 3


def test_kron_gives_the_nine_by_nine_cartan():
    c = kron(ones_plus_identity(3), ones_plus_identity(3))
    assert c == a4xa4_cartan()
    # entry formula (1 + delta_ac)(1 + delta_bd) under row-major indexing
    for a in range(3):
        for b in range(3):
            for cc in range(3):
                for d in range(3):
                    expected = (2 if a == cc else 1) * (2 if b == d else 1)
                    assert c[a * 3 + b, cc * 3 + d] == expected


def test_functional_op_aliases():
    from blockbounds.exactmat import mat_add, mat_mul

    a = RationalMatrix([[1, 2], [3, 4]])
    assert mat_add(a, a) == a.scale(2)
    assert mat_mul(a, RationalMatrix.identity(2)) == a
    assert transpose(transpose(a)) == a


def test_shape_errors():
    with pytest.raises(ShapeError):
        RationalMatrix([[1, 2], [3]])
    with pytest.raises(ShapeError):
        RationalMatrix([[1]]) + RationalMatrix([[1, 2]])
    with pytest.raises(ShapeError):
        RationalMatrix([[1, 2]]) @ RationalMatrix([[1, 2]])


def test_inverse_identity():
    i3 = RationalMatrix.identity(3)
    assert inverse(i3) == i3


def test_inverse_of_ones_plus_identity():
    c = ones_plus_identity(3)
    inv = inverse(c)
    expected = RationalMatrix(
        [
            [Fraction(3, 4), Fraction(-1, 4), Fraction(-1, 4)],
            [Fraction(-1, 4), Fraction(3, 4), Fraction(-1, 4)],
            [Fraction(-1, 4), Fraction(-1, 4), Fraction(3, 4)],
        ]
    )
    assert inv == expected
    assert c @ inv == RationalMatrix.identity(3)


def test_inverse_singular():
    with pytest.raises(SingularMatrixError):
        inverse(RationalMatrix([[1, 1], [1, 1]]))


def test_determinant_examples():
    assert determinant(RationalMatrix.identity(4)) == 1
    assert determinant(RationalMatrix([[2, 1], [1, 2]])) == 3
    c = ones_plus_identity(3)
    assert determinant(c) == cofactor_determinant(c) == 4


def test_elementary_divisors_examples():
    assert elementary_divisors(RationalMatrix.identity(4)) == [1, 1, 1, 1]
    assert elementary_divisors(RationalMatrix([[3]])) == [3]
    c = ones_plus_identity(3)
    assert elementary_divisors(c) == minor_gcd_divisors(c) == [1, 1, 4]


def test_elementary_divisors_rejects_non_integer():
    with pytest.raises(DomainError):
        elementary_divisors(RationalMatrix([["1/2"]]))
    with pytest.raises(SingularMatrixError):
        elementary_divisors(RationalMatrix([[1, 1], [1, 1]]))


def test_positive_definite_examples():
    assert is_positive_definite(RationalMatrix.identity(2))
    assert not is_positive_definite(RationalMatrix([[1, 2], [2, 1]]))
    n = 5
    u5 = RationalMatrix(
        [
            [
                Fraction(1) if i == j else (Fraction(-1, 2) if abs(i - j) == 1 else 0)
                for j in range(n)
            ]
            for i in range(n)
        ]
    )
    assert is_positive_definite(u5)


def test_positive_definite_needs_symmetry():
    assert not is_positive_definite(RationalMatrix([[1, 1], [0, 1]]))


def test_cartan_data_validation():
    CartanData(agl18_cartan(), 2, 3)  # defect 3: largest divisor 8
    with pytest.raises(DomainError):
        CartanData(agl18_cartan(), 2, 2)
    with pytest.raises(DomainError):
        CartanData(RationalMatrix([[1, 2], [2, 1]]), 2)  # not PD
    with pytest.raises(DomainError):
        CartanData(RationalMatrix([[1, -1], [-1, 2]]), 2)  # negative entry
    with pytest.raises(DomainError):
        CartanData(RationalMatrix([[1, 1], [0, 1]]), 2)  # asymmetric
    with pytest.raises(DomainError):
        CartanData(RationalMatrix([[1]]), 4)  # p not prime


def test_record_round_trip_is_bit_exact():
    m = RationalMatrix([[Fraction(1, 2), 3], [Fraction(-7, 3), 0]])
    rec = matrix_to_record(m)
    assert rec["entries"] == [["1/2", "3"], ["-7/3", "0"]]
    assert matrix_from_record(rec) == m
    assert matrix_to_record(matrix_from_record(rec)) == rec


def test_record_round_trip_randomized():
    rng = random.Random(19)
    for _ in range(200):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        m = RationalMatrix(
            [
                [
                    Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**4))
                    for _ in range(c)
                ]
                for _ in range(r)
            ]
        )
        rec = matrix_to_record(m)
        assert matrix_from_record(rec) == m
        assert matrix_to_record(matrix_from_record(rec)) == rec


def test_inverse_is_involution_on_random_matrices():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(1, 4)
        while True:
            m = RationalMatrix(
                [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
            )
            if determinant(m) != 0:
                break
        assert inverse(inverse(m)) == m
        assert m @ inverse(m) == RationalMatrix.identity(n)


def test_determinant_is_multiplicative():
    rng = random.Random(12)
    for _ in range(120):
        n = rng.randint(1, 4)
        a = RationalMatrix([[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)])
        b = RationalMatrix([[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)])
        assert determinant(a @ b) == determinant(a) * determinant(b)


def test_elementary_divisor_product_is_abs_det():
    rng = random.Random(13)
    count = 0
    while count < 80:
        n = rng.randint(1, 4)
        m = RationalMatrix([[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)])
        d = determinant(m)
        if d == 0:
            continue
        count += 1
        divisors = elementary_divisors(m)
        prod = 1
        for x in divisors:
            prod *= x
        assert prod == abs(d)
        for a, b in zip(divisors, divisors[1:]):
            assert b % a == 0


def test_elementary_divisors_match_minor_gcds():
    rng = random.Random(14)
    count = 0
    while count < 40:
        n = rng.randint(1, 3)
        m = RationalMatrix([[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)])
        if determinant(m) == 0:
            continue
        count += 1
        assert elementary_divisors(m) == minor_gcd_divisors(m)


def test_trace_identities_on_random_matrices():
    rng = random.Random(15)
    for _ in range(60):
        n, m = rng.randint(1, 3), rng.randint(1, 3)
        a = RationalMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
        b = RationalMatrix([[rng.randint(-3, 3) for _ in range(m)] for _ in range(m)])
        assert trace(kron(a, b)) == trace(a) * trace(b)
        assert trace(direct_sum(a, b)) == trace(a) + trace(b)


def test_elementary_divisors_larger_entries():
    rng = random.Random(17)
    count = 0
    while count < 200:
        n = rng.randint(1, 4)
        m = RationalMatrix(
            [[rng.randint(-30, 30) for _ in range(n)] for _ in range(n)]
        )
        d = determinant(m)
        if d == 0:
            continue
        count += 1
        divisors = elementary_divisors(m)
        prod = 1
        for x in divisors:
            prod *= x
        assert prod == abs(d)
        for a, b in zip(divisors, divisors[1:]):
            assert b % a == 0
        if n <= 3:
            assert divisors == minor_gcd_divisors(m)


def test_leading_minors_match_cofactor_oracle():
    from blockbounds.exactmat import leading_principal_pivots

    rng = random.Random(18)
    for _ in range(40):
        n = rng.randint(1, 4)
        a = RationalMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
        sym = a @ a.transpose() + RationalMatrix.identity(n)
        pivots = leading_principal_pivots(sym)
        assert len(pivots) == n
        for k, piv in enumerate(pivots, start=1):
            sub = RationalMatrix([[sym[i, j] for j in range(k)] for i in range(k)])
            assert piv == cofactor_determinant(sub)


def test_transpose_and_conjugation_by_unimodular():
    rng = random.Random(16)
    c = ones_plus_identity(3)
    for _ in range(20):
        s = random_unimodular(rng, 3)
        assert abs(determinant(s)) == 1
        conj = transpose(s) @ c @ s
        assert determinant(conj) == determinant(c)
        assert sorted(elementary_divisors(conj)) == [1, 1, 4]
