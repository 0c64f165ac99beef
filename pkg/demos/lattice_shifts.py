"""
Binary lattice subshifts
========================

Which binary SFTs are closed under cellwise min and max, and what do
they look like?  We walk through the extremal points, the two equivalent
tests and the four-way classification.
"""

import itertools

from algsh import catalog
from algsh.lattice import classify_binary, closure_test, compute_extremal, extremal_shift
from algsh.subshift import Subshift, contains

two = catalog.two()

# no 1 directly after a 0, so every 1 has only ones to its left
X = Subshift.from_forbidden(2, [(0, 1)], name="no ascent")
fam = compute_extremal(X, two)
for a in (0, 1):
    print(f"m[{a}] around the origin:", [fam.m[a][i] for i in range(-4, 5)])

# the shift generated by the m-family contains X exactly when X is a lattice shift
Z = extremal_shift(fam)
print("closure test:", closure_test(X, two).cellwise, " m-family test:", bool(contains(X, Z)))

# every cellwise binary SFT on 3-blocks, grouped by class
seen = {}
for bits in itertools.product((0, 1), repeat=8):
    forbidden = [w for w, b in zip(itertools.product((0, 1), repeat=3), bits) if not b]
    Y = Subshift.from_forbidden(2, forbidden)
    if Y.symbols() != {0, 1} or not closure_test(Y, two).cellwise:
        continue
    seen.setdefault(str(classify_binary(Y)), forbidden)
for cls, forbidden in sorted(seen.items()):
    print(f"{cls:<28} e.g. forbidding {forbidden}")

# the golden mean shift is not closed under max: classification refuses it
golden = Subshift.from_forbidden(2, [(1, 1)])
print("golden mean cellwise?", closure_test(golden, two).cellwise)
