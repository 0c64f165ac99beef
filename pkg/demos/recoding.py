"""
Recoding to cellwise operations
===============================

When affine block maps stop growing, a subshift algebra can be recoded
so that its operations act one cell at a time.  When they keep growing
no recoding exists, and the closure hands back a witness.
"""

from algsh import catalog
from algsh.recoding import (SubshiftAlgebra, affine_block_closure, four_symbol_family,
                            four_symbol_lattice, member_radius_witness, quasigroup_shift, recode)
from algsh.subshift import Subshift

# C3 acting cellwise on an SFT: the radii stabilize, recoding succeeds at radius 0
C3 = catalog.three_chain()
A = SubshiftAlgebra.cellwise(Subshift.from_forbidden(3, [(2, 0)]), C3)
rec = recode(A, variety="lattice")
print("C3 on 'no 2 before 0': recoded at radius", rec.radius)

# the quasigroup shift: affine maps need ever larger windows
Q = quasigroup_shift()
cl = affine_block_closure(Q, 6)
print("quasigroup shift:", cl.status)
w = member_radius_witness(Q, cl.witness)
print("  a map of radius more than", w.exceeds, "verified:", w.verify(Q))

# the four-symbol lattice: t_k pushes a block of 0+ outward, one cell per k
F = four_symbol_lattice()
for k in range(4):
    fw = four_symbol_family(k)
    print(f"  t_{k} verified:", fw.verify(F))
