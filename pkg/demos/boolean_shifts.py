"""
Boolean subshifts and their normal form
=======================================

Build a Boolean subshift from a random recipe, certify that it is
simple, and conjugate it to a product of full shifts and periodic parts.
"""

import random

from algsh.boolean import (boolean_normal_form, build_from_recipe, expected_certificate,
                           random_recipe, simplicity_check)

recipe = random_recipe(random.Random(7), 3)
X, alg = build_from_recipe(recipe)
print("alphabet", alg.size, "symbols; recipe", recipe)

cert = simplicity_check(X, alg)
print("simple:", cert.ok)
for t, (root, offset) in sorted(cert.links.items()):
    print(f"  atom {t} follows atom {root} shifted by {offset}")
print("matches the recipe:", {t: v for t, v in expected_certificate(recipe).items()})

nf = boolean_normal_form(cert, X)
print("full part on", nf.full_alphabet_size, "symbols,", len(nf.periodic_atoms), "periodic atoms")
print("conjugacy verified:", nf.verified)
