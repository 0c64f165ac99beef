import random

import pytest
from hypothesis import given, strategies as st

from algsh import catalog
from algsh.algebra import SignatureError
from algsh.boolean import (BooleanRecipe, atom_projection, boolean_normal_form, build_from_recipe,
                           expected_certificate, power_set_view, random_recipe, shift_links,
                           simplicity_check, tuple_projection)
from algsh.errors import PreconditionError
from algsh.subshift import Subshift, image, language, periodic_words

from conftest import brute_language

recipes = st.builds(lambda seed, k: random_recipe(random.Random(seed), k),
                    st.integers(0, 10**6), st.integers(1, 3))


def links_oracle(forbidden, k):
    """``high(y_i) = low(y_{i+k})`` on every word of length ``|k| + 1``."""
    for w in brute_language(4, forbidden, abs(k) + 1):
        first, last = (w[0], w[-1]) if k >= 0 else (w[-1], w[0])
        if first >> 1 != last & 1:
            return False
    return True


def test_power_set_view():
    view = power_set_view(catalog.boolean_algebra(3))
    assert view.k == 3 and sorted(view.code) == list(range(8))
    with pytest.raises(SignatureError):
        power_set_view(catalog.m3())


def test_shift_links_examples():
    assert shift_links(Subshift.full(4)) == []
    # atom 1 reads one cell ahead of atom 0, so high at i is low at i + 1
    X, alg = build_from_recipe(BooleanRecipe((None,), ((0, 0), (0, 1))))
    assert shift_links(image(tuple_projection(X, alg, [1, 0]))) == [1]
    assert shift_links(image(tuple_projection(X, alg, [0, 1]))) == [-1]


@given(st.lists(st.lists(st.integers(0, 3), min_size=1, max_size=2).map(tuple), max_size=6))
def test_shift_links_match_words(forbidden):
    Y = Subshift.from_forbidden(4, forbidden)
    if Y.is_empty():
        return
    got = shift_links(Y)
    K = min(max((abs(k) for k in got), default=3), 3)
    assert set(got) & set(range(-K, K + 1)) == {
        k for k in range(-K, K + 1) if links_oracle(forbidden, k)}
    assert got == sorted(got, key=lambda k: (abs(k), -k))


@given(recipes)
def test_random_recipes_are_certified(recipe):
    X, alg = build_from_recipe(recipe)
    cert = simplicity_check(X, alg)
    assert cert.ok
    expect = expected_certificate(recipe)
    for t, (r, k) in cert.links.items():
        assert (r, str(cert.classes[r])) == expect[t]
        # the offset agrees with the construction on its component
        c, off = recipe.atoms[t]
        n = recipe.components[c]
        diff = off - recipe.atoms[r][1]
        assert k == diff if n is None else (k - diff) % n == 0
    nf = boolean_normal_form(cert, X)
    assert nf.verified
    assert nf.full_alphabet_size == 1 << sum(n is None for n in recipe.components)


@given(recipes)
def test_atom_projections_separate_periodic_points(recipe):
    X, alg = build_from_recipe(recipe)
    view = power_set_view(alg)
    for p in range(1, 4):
        pts = periodic_words(X, p)
        codes = {tuple(tuple(view.code[a] >> t & 1 for a in w) for t in range(view.k))
                 for w in pts}
        assert len(codes) == len(pts)
        for t in range(view.k):
            shadow = {tuple(view.code[a] >> t & 1 for a in w) for w in pts}
            assert shadow <= set(periodic_words(image(atom_projection(X, alg, t, view)), p))


def test_dependent_atoms_fail_independence():
    # two atoms glued by a constraint that is not a shift: forbid both on at once
    alg = catalog.boolean_algebra(2)
    view = power_set_view(alg)
    top = view.element(3)
    X = Subshift.from_forbidden(4, [(top,)])
    with pytest.raises(PreconditionError):
        simplicity_check(X, alg)


def test_non_closed_subshift_is_rejected():
    alg = catalog.boolean_algebra(1)
    with pytest.raises(PreconditionError) as err:
        simplicity_check(Subshift.from_forbidden(2, [(1, 1)]), alg)
    assert err.value.witness is not None


def test_words_of_built_shift():
    X, alg = build_from_recipe(BooleanRecipe((2,), ((0, 0), (0, 1))))
    view = power_set_view(alg)
    words = {tuple(view.code[a] for a in w) for w in language(X, 2)}
    # x_i = b_i + 2 b_{i+1} with b of period 2
    assert words == {(0, 0), (1, 2), (2, 1), (3, 3)}
