"""Built-in data sets used by the demos, the test suite and the CLI.

Each builder returns a JSON-ready dict in the same record formats the CLI
consumes, so every fixture can be written to disk, re-read and re-validated.
"""

from __future__ import annotations

from .exactmat import RationalMatrix, kron, matrix_to_record


def _ones_plus_identity(n: int) -> RationalMatrix:
    return RationalMatrix(
        [[2 if i == j else 1 for j in range(n)] for i in range(n)]
    )


def agl18_cartan() -> RationalMatrix:
    """Cartan matrix of the principal 2-block of the affine semilinear group
    of order 168 acting on 8 points (5 simple modules, defect 3)."""
    return RationalMatrix(
        [
            [2, 0, 0, 1, 1],
            [0, 2, 0, 1, 1],
            [0, 0, 2, 1, 1],
            [1, 1, 1, 4, 3],
            [1, 1, 1, 3, 4],
        ]
    )


def agl18_form_triples() -> list[list[int]]:
    """x1^2+..+x5^2 + x1x2 - x1x5 - x2x5 - x3x5 - x4x5, which is positive
    definite and pairs with the Cartan matrix to the sharp value 8."""
    return [
        [1, 1, 1],
        [2, 2, 1],
        [3, 3, 1],
        [4, 4, 1],
        [5, 5, 1],
        [1, 2, 1],
        [1, 5, -1],
        [2, 5, -1],
        [3, 5, -1],
        [4, 5, -1],
    ]


def a4xa4_cartan() -> RationalMatrix:
    """Cartan matrix of the principal 2-block of the direct square of the
    alternating group of degree 4: (1 + delta) tensor (1 + delta), 9x9."""
    c3 = _ones_plus_identity(3)
    return kron(c3, c3)


def agl18_bundle() -> dict:
    return {
        "label": "agl18",
        "p": 2,
        "q": 1,
        "n_generators": [],
        "ibr_action": None,
        "cartan": {"normalization": "b", "matrix": matrix_to_record(agl18_cartan())},
        "defect": 3,
        "forms": [agl18_form_triples()],
        "ordering": None,
        "partition": None,
        "known_kb": 8,
    }


def a4xa4_bundle() -> dict:
    return {
        "label": "a4xa4",
        "p": 2,
        "q": 1,
        "n_generators": [],
        "ibr_action": None,
        "cartan": {"normalization": "b", "matrix": matrix_to_record(a4xa4_cartan())},
        "defect": 4,
        "forms": [],
        "ordering": None,
        "partition": None,
        "known_kb": 16,
    }


def s3_subsection() -> dict:
    """Subsection data for the principal 3-block of the symmetric group on 3
    letters: u a 3-cycle, l(b) = 1, fusion quotient of order 2, and the
    generalized decomposition column (1, 1, -1)."""
    return {
        "label": "s3-subsection",
        "q": 3,
        "p": 3,
        "k": 3,
        "l": 1,
        "spec": {
            "p": 3,
            "q": 3,
            "n_generators": [2],
            "ibr_action": [[1]],
            "cartan": {
                "normalization": "b_bar",
                "matrix": {"rows": 1, "cols": 1, "entries": [["1"]]},
            },
        },
        "q_matrix": {"powers": [[{"0": 1}], [{"0": 1}], [{"0": -1}]]},
        "heights": [0, 0, 0],
        "known_kb": 3,
    }


def dade_cyclic() -> dict:
    """Abelian defect group of order 27 with cyclic quotient of order 9,
    inertial data a = b = 2; the product bound evaluates to 18 < 27."""
    return {
        "label": "dade-cyclic",
        "d_order": 27,
        "u_order": 3,
        "ne_cu": 2,
        "ce_u": 2,
        "expected_bound": "18",
    }


FIXTURES = {
    "agl18": (agl18_bundle, "bounds bundle: 5x5 Cartan matrix, sharp value 8"),
    "a4xa4": (a4xa4_bundle, "bounds bundle: 9x9 Kronecker Cartan matrix, sharp value 16"),
    "s3-subsection": (s3_subsection, "gendec data: q = 3 subsection with full verification"),
    "dade-cyclic": (dade_cyclic, "cyclic-quotient product bound parameters"),
}
