"""Walk through every bound for a 5x5 Cartan matrix with known k(B) = 8.

The block behind this matrix has 8 irreducible characters.  The demo shows
how the classical trace-style bounds, the inverse-Cartan method and a hand
picked quadratic form rank against each other, and that the best bound is
attained.

Run:  python demos/agl18_bounds.py
"""

from blockbounds import CartanData, SubsectionSpec, compare_all
from blockbounds.fixtures import agl18_cartan, agl18_form_triples

c = CartanData(agl18_cartan(), p=2, defect=3)
print("Cartan matrix (5 simple modules, defect 3):")
for row in c.matrix:
    print("   ", [int(x) for x in row])

# u = 1 is the degenerate subsection: q = 1 and a trivial fusion quotient,
# so the subsection machinery reduces to plain weighted-trace bounds.
spec = SubsectionSpec(p=2, q=1)

report = compare_all(c, spec, forms=[agl18_form_triples()], known_kb=8)

print("\nALL BOUNDS")
for row in report.rows:
    mark = "  <-- best" if row in (report.best_k, report.best_k0) else ""
    print(f"  {row.name:<45} {row.target:<6} {str(row.value):>6}{mark}")

print()
for note in report.notes:
    print("note:", note)

print(f"\nbest k(B) bound: {report.best_k.value} via {report.best_k.name}")
assert report.best_k.value == 8
