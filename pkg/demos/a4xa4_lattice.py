"""Exact shortest-vector computation on a 9-dimensional inverse Cartan form.

The Cartan matrix here is a Kronecker square, and the minimum of the inverse
form is 9/16 = (3/4)^2, attained at a standard basis vector.  Dividing the
number of simple modules by that minimum gives the bound k(B) <= 16, which is
attained by the block.  No quadratic-form bound can reach 16 for this matrix,
which is why the lattice route matters.

Run:  python demos/a4xa4_lattice.py
"""

from blockbounds import (
    CartanData,
    form_minimum,
    inverse,
    inverse_cartan_bound,
    lll_reduce,
)
from blockbounds.fixtures import a4xa4_cartan

c = a4xa4_cartan()
print(f"Cartan matrix: {c.rows}x{c.cols}, Kronecker square of (1 + delta)")

cinv = inverse(c)
transform, reduced = lll_reduce(cinv)
print("LLL-reduced diagonal:", [str(reduced[i, i]) for i in range(reduced.rows)])

minimum = form_minimum(cinv)
print(f"\nexact minimum of x C^-1 x^t over nonzero integer vectors: {minimum.value}")
print(f"witness: {list(minimum.witness)}")
print(f"minimizers up to sign: {minimum.num_minimizers}")
assert str(minimum.value) == "9/16"

report = inverse_cartan_bound(CartanData(c, p=2, defect=4))
print(f"\nk(B) <= l/m = 9 / (9/16) = {report.value}")
print(f"weak form l * p^d = {report.weak_value}")
assert report.value == 16
