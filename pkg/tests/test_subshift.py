import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from algsh.evp import EventuallyPeriodicPoint as EVP, evp_blockmap, evp_table
from algsh.subshift import (BlockMap, Subshift, blockmap_equal_on, contains, equal, identity_map,
                            image, language, minimize, periodic_words, product_shift, shift_map)

from conftest import brute_language, occurs

forbidden_sets = st.lists(
    st.lists(st.integers(0, 1), min_size=1, max_size=3).map(tuple), max_size=4)


def periodic_in(word, forbidden):
    """Oracle: ``word^∞`` avoids every forbidden word."""
    reps = -(-max((len(f) for f in forbidden), default=1) // len(word)) + 1
    return not occurs(word * reps, forbidden)


# languages


def test_small_languages():
    assert len(language(Subshift.full(2), 3)) == 8
    golden = Subshift.from_forbidden(2, [(1, 1)])
    assert set(language(golden, 3)) == {(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 0, 1)}
    assert language(golden, 0) == [()]


@given(forbidden_sets, st.integers(0, 5))
def test_language_matches_extension_oracle(forbidden, n):
    X = Subshift.from_forbidden(2, forbidden)
    assert set(language(X, n)) == brute_language(2, forbidden, n)


@given(forbidden_sets, st.integers(1, 5))
def test_periodic_words_match_oracle(forbidden, p):
    X = Subshift.from_forbidden(2, forbidden)
    expect = {w for w in itertools.product((0, 1), repeat=p) if periodic_in(w, forbidden)}
    assert set(periodic_words(X, p)) == expect


@given(forbidden_sets)
def test_minimize_preserves_language(forbidden):
    X = Subshift.from_forbidden(2, forbidden)
    Y = minimize(X)
    assert Y.graph.nvertices <= max(X.graph.nvertices, 1)
    for n in range(6):
        assert language(X, n) == language(Y, n)


# containment


def test_containment_examples():
    golden = Subshift.from_forbidden(2, [(1, 1)])
    assert contains(Subshift.full(2), golden)
    res = contains(golden, Subshift.full(2))
    assert not res and res.witness == (1, 1)


def even_shift():
    # runs of 1s between 0s have even length
    return Subshift.from_graph(2, 2, [(0, 0, 0), (0, 1, 1), (1, 0, 1)])


def test_golden_versus_even():
    golden, even = Subshift.from_forbidden(2, [(1, 1)]), even_shift()
    res = contains(even, golden)
    assert not res and res.witness == (0, 1, 0)
    assert not contains(golden, even)
    for n in range(1, 11):
        missing = set(language(golden, n)) - set(language(even, n))
        assert bool(missing) == (n >= 3)


@given(forbidden_sets, forbidden_sets)
def test_containment_agrees_with_words(fa, fb):
    A, B = Subshift.from_forbidden(2, fa), Subshift.from_forbidden(2, fb)
    res = contains(A, B)
    if res:
        for n in range(8):
            assert set(language(B, n)) <= set(language(A, n))
    else:
        w = res.witness
        assert w in set(language(B, len(w))) and w not in set(language(A, len(w)))
        # least among the shortest
        for n in range(len(w)):
            assert set(language(B, n)) <= set(language(A, n))
        assert w == min(set(language(B, len(w))) - set(language(A, len(w))))


# block maps and images


def and_map():
    return BlockMap.from_function(Subshift.full(2), 1, lambda w: w[0] & w[2], 2)


def test_identity_and_shift_images():
    for X in (Subshift.full(2), Subshift.from_forbidden(2, [(1, 1)]), even_shift()):
        assert equal(image(identity_map(X)), X)
        assert equal(image(shift_map(X)), X)


def test_and_image_matches_periodic_oracle():
    f = and_map()
    Y = image(f)
    rule = [(w >> 2) & w & 1 for w in range(8)]
    for p in range(1, 7):
        expect = {y for y in itertools.product((0, 1), repeat=p)
                  if in_image_by_transfer(rule, [], y)}
        assert set(periodic_words(Y, p)) == expect
    # 1s at 0 and 4 force x_1 = x_3 = 1, hence a 1 at 2
    assert contains(Y, Subshift.full(2)).witness == (1, 0, 0, 0, 1)


def in_image_by_transfer(rule, forbidden, y):
    """Oracle for radius-1 maps on a binary SFT with forbidden words of length <= 3:
    ``y^∞`` has a preimage iff the boolean transfer matrix around one period of
    ``y`` (states are pairs of cells) lies on a cycle."""
    pairs = list(itertools.product((0, 1), repeat=2))
    idx = {q: i for i, q in enumerate(pairs)}
    A = {b: np.zeros((4, 4), dtype=bool) for b in (0, 1)}
    for w in itertools.product((0, 1), repeat=3):
        if not occurs(w, forbidden):
            A[rule[4 * w[0] + 2 * w[1] + w[2]]][idx[w[:2]], idx[w[1:]]] = True
    M = np.eye(4, dtype=bool)
    for b in y:
        M = (M.astype(int) @ A[b].astype(int)) > 0
    P = M.copy()
    for _ in range(4):
        if P.diagonal().any():
            return True
        P = (P.astype(int) @ M.astype(int)) > 0
    return False


@given(forbidden_sets, st.lists(st.integers(0, 1), min_size=8, max_size=8))
def test_image_periodic_points_match_oracle(forbidden, rule):
    X = Subshift.from_forbidden(2, forbidden)
    f = BlockMap.from_function(X, 1, lambda w: rule[4 * w[0] + 2 * w[1] + w[2]], 2)
    Y = image(f)
    for p in range(1, 6):
        expect = {y for y in itertools.product((0, 1), repeat=p)
                  if in_image_by_transfer(rule, forbidden, y)}
        assert set(periodic_words(Y, p)) == expect


def test_blockmap_equality():
    X = Subshift.full(2)
    assert blockmap_equal_on(and_map(), and_map())
    cmp = blockmap_equal_on(shift_map(X), identity_map(X))
    assert not cmp and cmp.witness == (0, 0, 1)
    assert blockmap_equal_on(identity_map(X).padded(1), identity_map(X))


def test_product_shift_projects_back():
    A, B = Subshift.from_forbidden(2, [(1, 1)]), even_shift()
    P = product_shift([A, B])
    first = BlockMap.from_function(P, 0, lambda w: w[0] // 2, 2)
    second = BlockMap.from_function(P, 0, lambda w: w[0] % 2, 2)
    assert equal(image(first), A) and equal(image(second), B)


# eventually periodic points

points = st.builds(
    EVP.make,
    st.lists(st.integers(0, 2), min_size=1, max_size=3),
    st.lists(st.integers(0, 2), max_size=4),
    st.lists(st.integers(0, 2), min_size=1, max_size=3),
    st.integers(-3, 3))


def test_point_examples():
    meet = np.minimum.outer(np.arange(2), np.arange(2))
    join = np.maximum.outer(np.arange(2), np.arange(2))
    x = EVP.from_parts((0,), (), (1,), (1,))
    y = EVP.from_parts((1,), (), (0,), (0,))
    assert evp_table(meet, [x, y]) == EVP.constant(0)
    assert evp_table(join, [EVP.periodic((0, 1)), EVP.periodic((1, 0))]) == EVP.constant(1)
    assert x.shift(1)[-1] == x[0]


@given(points, points)
def test_cellwise_ops_match_coordinates(x, y):
    t = np.array([[0, 1, 2], [1, 1, 0], [2, 0, 2]])
    z = evp_table(t, [x, y])
    for i in range(-20, 20):
        assert z[i] == t[x[i], y[i]]


@given(points)
def test_canonical_form_is_stable(x):
    for i in range(-15, 15):
        assert x.canonical()[i] == x[i]
    assert x.canonical() == x.canonical().canonical()
    assert x.shift(3).shift(-3) == x


@given(points, st.integers(0, 1))
def test_blockmap_on_points(x, r):
    local = lambda w: (sum(w) * 7 + w[0]) % 3
    z = evp_blockmap(local, r, [x])
    for i in range(-15, 15):
        assert z[i] == local(tuple(x[j] for j in range(i - r, i + r + 1)))
