"""Constructors for the small algebras used throughout the package and tests."""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from .algebra import BOOLEAN_ROLES, LATTICE_ROLES, FiniteAlgebra, product


def lattice_from_leq(leq: np.ndarray, labels: Sequence[str] | None = None,
                     name: str = "") -> FiniteAlgebra:
    """Build meet/join tables from an order relation; raises if not a lattice."""
    leq = np.asarray(leq, dtype=bool)
    n = leq.shape[0]
    meet = np.empty((n, n), dtype=np.int64)
    join = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            lower = [c for c in range(n) if leq[c, a] and leq[c, b]]
            upper = [c for c in range(n) if leq[a, c] and leq[b, c]]
            glb = [c for c in lower if all(leq[d, c] for d in lower)]
            lub = [c for c in upper if all(leq[c, d] for d in upper)]
            if len(glb) != 1 or len(lub) != 1:
                raise ValueError(f"{a} and {b} lack a meet or join")
            meet[a, b], join[a, b] = glb[0], lub[0]
    return FiniteAlgebra(n, LATTICE_ROLES, {"meet": meet, "join": join}, labels, name)


def lattice_from_covers(n: int, covers: Sequence[tuple[int, int]],
                        labels: Sequence[str] | None = None, name: str = "") -> FiniteAlgebra:
    leq = np.eye(n, dtype=bool)
    for a, b in covers:
        leq[a, b] = True
    for k in range(n):  # transitive closure
        leq |= leq[:, [k]] & leq[[k], :]
    return lattice_from_leq(leq, labels, name)


def chain(n: int) -> FiniteAlgebra:
    return lattice_from_covers(n, [(i, i + 1) for i in range(n - 1)], name=f"C{n}")


def two() -> FiniteAlgebra:
    return chain(2).relabel(["0", "1"], "2")


def three_chain() -> FiniteAlgebra:
    return chain(3).relabel(["0", "a", "1"], "C3")


def n5() -> FiniteAlgebra:
    # 0 < a < b < 1, 0 < c < 1
    return lattice_from_covers(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)],
                               ["0", "a", "b", "c", "1"], "N5")


def m3() -> FiniteAlgebra:
    return lattice_from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
                               ["0", "a", "b", "c", "1"], "M3")


def powerset_lattice(k: int) -> FiniteAlgebra:
    """Subsets of ``{0..k-1}`` encoded as bitmasks, as a lattice."""
    n = 1 << k
    a = np.arange(n)
    return FiniteAlgebra(n, LATTICE_ROLES, {"meet": a[:, None] & a[None, :],
                                            "join": a[:, None] | a[None, :]},
                         [_mask_label(m, k) for m in range(n)], f"2^{k}")


def boolean_algebra(k: int) -> FiniteAlgebra:
    """The power-set Boolean algebra on ``k`` atoms; element ``m`` is a bitmask."""
    n = 1 << k
    a = np.arange(n)
    tables = {"meet": a[:, None] & a[None, :], "join": a[:, None] | a[None, :],
              "complement": (n - 1) ^ a, "one": np.array(n - 1), "zero": np.array(0)}
    return FiniteAlgebra(n, BOOLEAN_ROLES, tables,
                         [_mask_label(m, k) for m in range(n)], f"B{k}")


def _mask_label(m: int, k: int) -> str:
    if k == 1:
        return str(m)
    return "{" + ",".join(f"t{i + 1}" for i in range(k) if m >> i & 1) + "}"


def cyclic_group(n: int) -> FiniteAlgebra:
    a = np.arange(n)
    return FiniteAlgebra(n, (("mul", 2), ("inv", 1), ("e", 0)),
                         {"mul": (a[:, None] + a[None, :]) % n, "inv": (-a) % n,
                          "e": np.array(0)}, name=f"Z{n}")


def group_from_mul(mul: np.ndarray, name: str = "") -> FiniteAlgebra:
    mul = np.asarray(mul, dtype=np.int64)
    n = mul.shape[0]
    e = next(x for x in range(n) if np.array_equal(mul[x], np.arange(n)))
    inv = np.array([int(np.argmax(mul[x] == e)) for x in range(n)])
    return FiniteAlgebra(n, (("mul", 2), ("inv", 1), ("e", 0)),
                         {"mul": mul, "inv": inv, "e": np.array(e)}, name=name)


def permutation_group(gens: Sequence[Sequence[int]], name: str = "") -> FiniteAlgebra:
    """Group generated by permutations, composed as ``(p*q)(i) = p(q(i))``."""
    ident = tuple(range(len(gens[0])))
    elems = [ident]
    seen = {ident}
    for p in elems:
        for g in gens:
            q = tuple(p[i] for i in g)
            if q not in seen:
                seen.add(q)
                elems.append(q)
    elems.sort()
    index = {p: i for i, p in enumerate(elems)}
    mul = np.array([[index[tuple(p[i] for i in q)] for q in elems] for p in elems])
    return group_from_mul(mul, name)


def dihedral_group(n: int) -> FiniteAlgebra:
    rot = [(i + 1) % n for i in range(n)]
    ref = [(-i) % n for i in range(n)]
    return permutation_group([rot, ref], f"D{n}")


def quaternion_group() -> FiniteAlgebra:
    # elements ±1, ±i, ±j, ±k as (sign, unit) with unit in 1,i,j,k
    units = ["1", "i", "j", "k"]
    table = {("1", u): (1, u) for u in units}
    table.update({(u, "1"): (1, u) for u in units})
    table.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                  ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                  ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    elems = [(s, u) for s in (1, -1) for u in units]
    index = {e: i for i, e in enumerate(elems)}
    mul = np.empty((8, 8), dtype=np.int64)
    for (s1, u1), (s2, u2) in itertools.product(elems, repeat=2):
        s, u = table[(u1, u2)]
        mul[index[(s1, u1)], index[(s2, u2)]] = index[(s * s1 * s2, u)]
    return group_from_mul(mul, "Q8")


def small_groups() -> list[FiniteAlgebra]:
    """One group of each isomorphism type of order at most 8."""
    z = cyclic_group
    out = [z(n) for n in range(1, 9)]
    out.append(product([z(2), z(2)]))
    out.append(dihedral_group(3))
    out.append(product([z(2), z(4)]))
    out.append(product([z(2), z(2), z(2)]))
    out.append(dihedral_group(4))
    out.append(quaternion_group())
    return out


def z2_group_pair() -> FiniteAlgebra:
    return product([cyclic_group(2), cyclic_group(2)])


def semigroup(mul: np.ndarray, name: str = "") -> FiniteAlgebra:
    mul = np.asarray(mul, dtype=np.int64)
    return FiniteAlgebra(mul.shape[0], (("mul", 2),), {"mul": mul}, name=name)


def is_associative(mul: np.ndarray) -> bool:
    return bool(np.array_equal(mul[mul, :], mul[:, mul]))


def all_semigroups(n: int) -> list[np.ndarray]:
    """Every associative table on ``n`` elements (labelled, so with repeats up to iso)."""
    out = []
    for flat in itertools.product(range(n), repeat=n * n):
        m = np.array(flat, dtype=np.int64).reshape(n, n)
        if is_associative(m):
            out.append(m)
    return out


def adjoin_identity(mul: np.ndarray) -> np.ndarray:
    n = mul.shape[0]
    out = np.empty((n + 1, n + 1), dtype=np.int64)
    out[:n, :n] = mul
    out[n, :] = np.arange(n + 1)
    out[:, n] = np.arange(n + 1)
    return out


def adjoin_zero(mul: np.ndarray) -> np.ndarray:
    n = mul.shape[0]
    out = np.full((n + 1, n + 1), n, dtype=np.int64)
    out[:n, :n] = mul
    return out


def distributive_lattices(max_size: int) -> list[FiniteAlgebra]:
    """Down-set lattices of posets on up to ``max_size - 1`` points, deduplicated by table."""
    found: dict[bytes, FiniteAlgebra] = {}
    found[b"1"] = chain(1)
    for p in range(0, max_size):
        pairs = [(i, j) for i in range(p) for j in range(i + 1, p)]
        for bits in range(1 << len(pairs)):
            rel = {pairs[i] for i in range(len(pairs)) if bits >> i & 1}
            if any((a, b) in rel and (b, c) in rel and (a, c) not in rel
                   for a, b in rel for c in range(p)):
                continue
            downsets = [m for m in range(1 << p)
                        if all(not (m >> j & 1) or (m >> i & 1) for i, j in rel)]
            if len(downsets) > max_size:
                continue
            idx = {m: i for i, m in enumerate(downsets)}
            d = np.array(downsets)
            meet = np.vectorize(idx.get)(d[:, None] & d[None, :])
            join = np.vectorize(idx.get)(d[:, None] | d[None, :])
            alg = FiniteAlgebra(len(d), LATTICE_ROLES, {"meet": meet, "join": join},
                                name=f"D({p},{bits})")
            key = alg.tables["meet"].tobytes() + alg.tables["join"].tobytes()
            found.setdefault(key, alg)
    return list(found.values())


def quasigroup_z2() -> FiniteAlgebra:
    a = np.arange(2)
    add = (a[:, None] + a[None, :]) % 2
    return FiniteAlgebra(2, (("mul", 2), ("rdiv", 2), ("ldiv", 2)),
                         {"mul": add, "rdiv": add, "ldiv": add}, name="Q2")
