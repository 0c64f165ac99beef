"""
Limit sets of lattice-linear cellular automata
==============================================

A lattice-linear CA on a product of chains factors into maps between
components.  The factor graph gives the period p, the stabilization time
q and the shift by which G^p moves each component of a limit point.
"""

import random

from algsh import catalog
from algsh.linear_ca import (limit_alphabet, limit_structure, limit_symbols, product_rule,
                             random_chain_ca)

two = catalog.two()

# swap the two components, reading one from the right and one from the left
swap = product_rule([two, two], 1, [(1, 2, (0, 1)), (0, 0, (0, 1))], "swap")
ls = limit_structure(swap)
print("swap: p =", ls.p, " q =", ls.q, " shifts", [ls.shift_exponent(v) for v in range(2)])

# a component that copies another one: the limit is reached after one step
copy = product_rule([two, two], 1, [(0, 2, (0, 1)), (0, 1, (0, 1))], "copy")
ls = limit_structure(copy)
print("copy: p =", ls.p, " q =", ls.q, " limit", ls.limit)

# the symbol fixpoint can be larger than the symbols of the limit set
chainy = product_rule([two] * 3, 1, [(0, 1, (0, 1)), (2, 1, (0, 1)), (0, 0, (0, 1))])
print("fixpoint", limit_alphabet(chainy), " limit symbols", limit_symbols(chainy))

for seed in range(5):
    ca = random_chain_ca(random.Random(seed), max_alphabet=8)
    ls = limit_structure(ca)
    print(f"seed {seed}: {ca.alg.size} symbols, radius {ca.radius}, p = {ls.p}, q = {ls.q}, "
          f"G^p checked up to period {ls.dynamics_checked}")
