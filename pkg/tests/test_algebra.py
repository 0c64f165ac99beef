import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from algsh import catalog
from algsh.algebra import (Congruence, FiniteAlgebra, SignatureError, affine_closure,
                           check_identities, congruence_product_check, congruences,
                           congruences_bruteforce, congruences_principal, direct_decomposition,
                           find_isomorphism, product, quotient, shallowness)


def compatible(alg, labels):
    """Oracle: every operation respects the partition, checked pair by pair."""
    n = alg.size
    for name, k, t in alg.ops:
        for xs in itertools.product(range(n), repeat=k):
            for ys in itertools.product(range(n), repeat=k):
                if all(labels[x] == labels[y] for x, y in zip(xs, ys)):
                    if labels[t[xs]] != labels[t[ys]]:
                        return False
    return True


def partitions(n):
    def rec(i, labels, m):
        if i == n:
            yield tuple(labels)
            return
        for b in range(m + 1):
            yield from rec(i + 1, labels + [b], max(m, b + 1))
    yield from rec(0, [], 0)


def two_element_semigroups():
    return [catalog.semigroup(m) for m in catalog.all_semigroups(2)]


# identities


def test_chain_two_is_distributive():
    assert check_identities(catalog.two(), "lattice")
    assert check_identities(catalog.two(), "distributive lattice")


def test_n5_fails_modularity_with_ordered_triple():
    N5 = catalog.n5()
    v = check_identities(N5, "modular")
    assert [name for name, _ in v.violations] == ["modularity"]
    a, b, c = v.violations[0][1]
    assert N5.apply("meet", a, b) == a
    assert N5.apply("join", a, N5.apply("meet", b, c)) != N5.apply("meet", b, N5.apply("join", a, c))


def test_m3_modular_not_distributive():
    M3 = catalog.m3()
    assert check_identities(M3, "modular")
    assert not check_identities(M3, "distributive")


def test_boolean_two():
    assert check_identities(catalog.boolean_algebra(1), "boolean algebra")


def test_signature_mismatch_is_a_type_error():
    with pytest.raises(SignatureError):
        check_identities(catalog.cyclic_group(3), "lattice")


@pytest.mark.parametrize("G", catalog.small_groups(), ids=lambda g: g.name)
def test_groups_satisfy_group_laws(G):
    assert check_identities(G, "group")


# congruences


@pytest.mark.parametrize("alg,count", [
    (catalog.two(), 2), (catalog.three_chain(), 4), (catalog.m3(), 2), (catalog.n5(), 5),
])
def test_congruence_counts(alg, count):
    assert len(congruences(alg)) == count


def test_three_chain_congruences_are_the_expected_ones():
    got = {tuple(map(tuple, c.blocks)) for c in congruences(catalog.three_chain())}
    assert got == {((0,), (1,), (2,)), ((0, 1, 2),), ((0, 1), (2,)), ((0,), (1, 2))}


@pytest.mark.parametrize("alg", [catalog.two(), catalog.three_chain(), catalog.m3(), catalog.n5(),
                                 catalog.boolean_algebra(2), catalog.cyclic_group(4),
                                 catalog.dihedral_group(3)] + two_element_semigroups(),
                         ids=repr)
def test_congruences_match_partition_oracle(alg):
    expect = {Congruence.from_labels(p) for p in partitions(alg.size) if compatible(alg, p)}
    assert set(congruences_bruteforce(alg)) == expect
    assert set(congruences_principal(alg)) == expect


@given(st.integers(0, 11), st.integers(0, 11))
def test_principal_route_on_products(i, j):
    lats = catalog.distributive_lattices(3)
    A = product([lats[i % len(lats)], lats[j % len(lats)]])
    assert set(congruences_bruteforce(A)) == set(congruences_principal(A))


# decomposition


def test_two_by_two_decomposes():
    d = direct_decomposition(product([catalog.two(), catalog.two()]))
    assert [f.size for f in d.factors] == [2, 2]
    assert all(find_isomorphism(f, catalog.two()) is not None for f in d.factors)
    assert d.reassemble() == d.algebra


@pytest.mark.parametrize("alg", [catalog.three_chain(), catalog.m3(), catalog.n5()], ids=repr)
def test_indecomposable(alg):
    assert len(direct_decomposition(alg).factors) == 1


@given(st.lists(st.sampled_from([2, 3]), min_size=1, max_size=3))
def test_chain_products_decompose_into_chains(sizes):
    A = product([catalog.chain(s) for s in sizes])
    d = direct_decomposition(A)
    assert sorted(f.size for f in d.factors) == sorted(sizes)
    assert d.reassemble() == A
    assert len(set(d.iso)) == A.size


def test_quotient_by_kernel_is_a_factor():
    A = product([catalog.two(), catalog.three_chain()])
    c = Congruence.from_labels([a // 3 for a in range(6)])
    assert find_isomorphism(quotient(A, c), catalog.two()) is not None


# congruence-product property


def test_cpp_lattices_and_groups():
    v = congruence_product_check([catalog.two(), catalog.two()])
    assert v.holds and v.product_congruences == 4
    assert congruence_product_check([catalog.n5()]).holds
    g = congruence_product_check([catalog.cyclic_group(2), catalog.cyclic_group(2)])
    assert not g.holds and g.product_congruences == 5
    # the witness is the diagonal subgroup's coset partition
    blocks = sorted(map(sorted, g.counterexample.blocks))
    assert blocks == [[0, 3], [1, 2]]


# affine maps and shallowness


def test_affine_closure_small_cases():
    two = affine_closure(catalog.two())
    assert two.functions == {(0, 1), (0, 0), (1, 1)} and two.stabilized_at == 0
    boole = affine_closure(catalog.boolean_algebra(1))
    assert len(boole.functions) == 4
    one = FiniteAlgebra(1, [("f", 2)], {"f": np.zeros((1, 1), dtype=int)})
    assert affine_closure(one).stabilized_at == 0 and shallowness(one) == 0


def affine_oracle(alg):
    """Unary polynomial maps with one occurrence of the variable, by saturation."""
    n = alg.size
    maps = {tuple(range(n))} | {(a,) * n for a in range(n)}
    while True:
        new = set(maps)
        for name, k, t in alg.ops:
            for slot in range(k):
                for consts in itertools.product(range(n), repeat=k - 1):
                    for g in maps:
                        def at(x):
                            args = list(consts)
                            args.insert(slot, g[x])
                            return int(t[tuple(args)])
                        new.add(tuple(at(x) for x in range(n)))
        if new == maps:
            return maps
        maps = new


@pytest.mark.parametrize("alg", [catalog.n5(), catalog.m3(), catalog.boolean_algebra(2),
                                 catalog.cyclic_group(3), catalog.quasigroup_z2()], ids=repr)
def test_affine_closure_matches_oracle(alg):
    assert affine_closure(alg).functions == affine_oracle(alg)


@pytest.mark.parametrize("alg", catalog.distributive_lattices(6), ids=repr)
def test_distributive_lattices_are_two_shallow(alg):
    assert shallowness(alg) <= 2


def test_boolean_and_group_shallowness():
    assert max(shallowness(catalog.boolean_algebra(k)) for k in (1, 2, 3)) <= 3
    assert max(shallowness(G) for G in catalog.small_groups()) <= 3
