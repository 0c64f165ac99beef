import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from algsh import catalog
from algsh.algebra import direct_decomposition, product
from algsh.boolean import power_set_view
from algsh.linear_ca import (CongruenceProductFailure, LinearCA, boolean_ca_corollary_check,
                             check_linear, factorize_rule, limit_alphabet, limit_structure,
                             limit_symbols, monotone_maps, periodic_limit_alphabet, periodic_point_count,
                             product_rule, random_chain_ca)
from algsh.subshift import Subshift, equal, periodic_words

TWO = catalog.two()
seeds = st.integers(0, 10**6)


def two_by_two(links):
    return product_rule([TWO, TWO], 1, links)


# linearity


def test_exactly_five_linear_elementary_rules():
    # lattice homomorphisms {0,1}^3 -> {0,1}: three projections and two constants
    linear = []
    for bits in itertools.product((0, 1), repeat=8):
        ca = LinearCA.from_function(TWO, 1, lambda a, b, c: bits[4 * a + 2 * b + c])
        if check_linear(ca):
            linear.append(bits)
    assert len(linear) == 5


def test_meet_of_outer_cells_fails_on_join():
    v = check_linear(LinearCA.from_function(TWO, 1, lambda x, y, z: min(x, z)))
    assert not v and v.operation == "join"
    u, w = v.arguments
    rule = lambda x: min(x[0], x[2])
    assert rule(tuple(map(max, u, w))) != max(rule(u), rule(w))


def test_rule_shape_is_checked():
    with pytest.raises(ValueError):
        LinearCA(TWO, 1, np.zeros((2, 2), dtype=int))


# limit alphabet


@pytest.mark.parametrize("links", [[(1, 2, (0, 1)), (0, 0, (0, 1))],
                                   [(0, 2, (0, 1)), (0, 1, (0, 1))],
                                   [(0, 1, (0, 1)), (1, 1, (0, 1))]])
def test_limit_alphabet_on_two_by_two_rules(links):
    ca = two_by_two(links)
    assert limit_alphabet(ca) == limit_symbols(ca) == periodic_limit_alphabet(ca, 6) == [0, 1, 2, 3]


@settings(max_examples=12)
@given(seeds)
def test_limit_symbols_match_periodic_oracle(seed):
    ca = random_chain_ca(random.Random(seed), max_alphabet=8)
    assert limit_symbols(ca) == periodic_limit_alphabet(ca, 6)
    assert set(limit_symbols(ca)) <= set(limit_alphabet(ca))


def test_symbol_fixpoint_can_exceed_the_limit_symbols():
    # c0 stays, c2 copies c0 from the left, c1 copies c2: after two steps
    # c1 = c2 everywhere, yet g maps windows over {c1 = c2} onto all of S
    ca = product_rule([TWO] * 3, 1, [(0, 1, (0, 1)), (2, 1, (0, 1)), (0, 0, (0, 1))])
    assert limit_alphabet(ca) == list(range(8))
    assert limit_symbols(ca) == periodic_limit_alphabet(ca, 6) == [0, 3, 4, 7]


# factorization


def test_swap_with_shift():
    ls = limit_structure(two_by_two([(1, 2, (0, 1)), (0, 0, (0, 1))]))
    links = ls.factorization.links
    assert [(ln.source, ln.position, ln.offset(1)) for ln in links] == [(1, 2, 1), (0, 0, -1)]
    assert (ls.p, ls.q) == (2, 0)
    assert [ls.shift_exponent(v) for v in range(2)] == [0, 0]


def test_copy_component():
    ls = limit_structure(two_by_two([(0, 2, (0, 1)), (0, 1, (0, 1))]))
    assert (ls.p, ls.q) == (1, 1)
    assert ls.cycle_vertices == [0]
    # the second factor copies the first, so the fixed points are the diagonal
    assert len(periodic_words(ls.limit, 1)) == 2


def test_constant_bottom():
    ca = LinearCA.from_function(product([TWO, TWO]), 1, lambda *w: 0)
    ls = limit_structure(ca)
    assert (ls.p, ls.q) == (1, 1) and limit_alphabet(ca) == [0]


def test_z2_pair_reports_cpp_failure():
    G = catalog.z2_group_pair()
    iso = direct_decomposition(G).iso
    inv = {c: a for a, c in enumerate(iso)}
    ca = LinearCA.from_function(G, 0, lambda a: inv[((iso[a][0] + iso[a][1]) % 2, iso[a][1])])
    assert check_linear(ca)
    with pytest.raises(CongruenceProductFailure):
        factorize_rule(ca)


@settings(max_examples=25)
@given(seeds)
def test_factorization_identity_on_periodic_configurations(seed):
    ca = random_chain_ca(random.Random(seed), max_alphabet=8)
    fac = factorize_rule(ca)
    rng = np.random.default_rng(seed)
    X = rng.choice(fac.alphabet, size=(20, 7))
    Y = ca.step_cyclic(X)
    r = ca.radius
    for x, y in zip(X, Y):
        for i in range(7):
            for v, ln in enumerate(fac.links):
                src = fac.coords(int(x[(i + ln.offset(r)) % 7]))[ln.source]
                assert fac.coords(int(y[i]))[v] == ln.h[src]


# limit structure


@settings(max_examples=25)
@given(seeds)
def test_limit_structure_of_random_chain_rules(seed):
    ca = random_chain_ca(random.Random(seed), max_alphabet=8)
    ls = limit_structure(ca)
    m = len(ls.factorization.links)
    # every factor has exactly one incoming arrow
    assert sorted(v for _, v in ls.edges) == list(range(m))
    # stabilization is exactly at q
    imgs = ls.images
    assert equal(imgs[ls.q], imgs[ls.q + 1])
    if ls.q:
        assert not equal(imgs[ls.q - 1], imgs[ls.q])
    # images of periodic configurations land in the iterated images
    n = ca.alg.size
    for P in (1, 2, 3):
        X = np.array(list(itertools.product(range(n), repeat=P)), dtype=np.int64)
        for t in range(min(len(imgs), 4)):
            got = {tuple(map(int, row)) for row in ca.step_cyclic(X, t)}
            assert got <= set(periodic_words(imgs[t], P))
    assert ls.dynamics_checked >= 1


def test_periodic_point_count():
    assert periodic_point_count(Subshift.full(3), 4) == 81
    golden = Subshift.from_forbidden(2, [(1, 1)])
    # Lucas numbers
    assert [periodic_point_count(golden, p) for p in range(1, 7)] == [1, 3, 4, 7, 11, 18]


def test_monotone_maps():
    assert sorted(monotone_maps(2, 2)) == [(0, 0), (0, 1), (1, 1)]
    assert len(monotone_maps(3, 3)) == 10


# Boolean rules


def test_boolean_shift_and_atom_swap():
    B = catalog.boolean_algebra(2)
    view = power_set_view(B)
    code = list(view.code)
    el = {c: i for i, c in enumerate(code)}
    shift = LinearCA.from_function(B, 1, lambda a, b, c: c)
    swap = LinearCA.from_function(B, 1, lambda a, b, c: el[((code[b] & 1) << 1) | (code[b] >> 1)])
    assert [(r.source, r.shift) for r in boolean_ca_corollary_check(shift)] == [(0, 1), (1, 1)]
    assert [(r.source, r.shift) for r in boolean_ca_corollary_check(swap)] == [(1, 0), (0, 0)]
