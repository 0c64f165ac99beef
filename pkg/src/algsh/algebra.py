"""Finite universal algebras.

Carrier elements are the integers ``0..n-1``; an operation of arity ``k`` is a
numpy array of shape ``(n,) * k`` (a 0-d array for constants).  Everything
here is exhaustive and meant for carriers of a few dozen elements at most.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np


class SignatureError(TypeError):
    """The algebra does not have the operation types a variety asks for."""


class ResourceLimitError(RuntimeError):
    """A construction would exceed a configured size limit."""


# --------------------------------------------------------------------------
# signatures and algebras


@dataclass(frozen=True)
class Signature:
    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.symbols]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate operation names in {names}")
        for name, arity in self.symbols:
            if arity < 0:
                raise ValueError(f"negative arity for {name!r}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)

    def arity(self, name: str) -> int:
        return dict(self.symbols)[name]

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)


class FiniteAlgebra:
    """An algebra on ``{0, ..., size-1}`` with named operation tables.

    ``tables`` maps each operation name to an integer array of shape
    ``(size,) * arity``.  Labels are optional display names for elements.
    """

    def __init__(self, size: int, signature: Signature | Sequence[tuple[str, int]],
                 tables: dict[str, np.ndarray], labels: Sequence[str] | None = None,
                 name: str = ""):
        if size < 1:
            raise ValueError("carrier must be nonempty")
        if not isinstance(signature, Signature):
            signature = Signature(tuple((str(n), int(k)) for n, k in signature))
        self.size = int(size)
        self.signature = signature
        self.name = name
        self.tables: dict[str, np.ndarray] = {}
        for op, arity in signature:
            if op not in tables:
                raise ValueError(f"missing table for operation {op!r}")
            t = np.asarray(tables[op], dtype=np.int64).reshape((size,) * arity)
            if t.size and (t.min() < 0 or t.max() >= size):
                raise ValueError(f"table of {op!r} leaves the carrier")
            t.setflags(write=False)
            self.tables[op] = t
        if labels is None:
            labels = [str(i) for i in range(size)]
        if len(labels) != size:
            raise ValueError("need one label per element")
        self.labels = tuple(labels)

    def __repr__(self):
        ops = ", ".join(f"{n}/{k}" for n, k in self.signature)
        return f"FiniteAlgebra({self.name or '?'}, size={self.size}, ops=[{ops}])"

    def __eq__(self, other):
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return (self.size == other.size and self.signature == other.signature
                and all(np.array_equal(self.tables[o], other.tables[o])
                        for o in self.signature.names))

    def __hash__(self):
        return hash((self.size, self.signature,
                     tuple(self.tables[o].tobytes() for o in self.signature.names)))

    def op(self, name: str) -> np.ndarray:
        return self.tables[name]

    def apply(self, name: str, *args: int) -> int:
        return int(self.tables[name][tuple(args)])

    @property
    def ops(self) -> list[tuple[str, int, np.ndarray]]:
        return [(n, k, self.tables[n]) for n, k in self.signature]

    def relabel(self, labels: Sequence[str], name: str | None = None) -> "FiniteAlgebra":
        return FiniteAlgebra(self.size, self.signature, self.tables, labels,
                             self.name if name is None else name)

    def is_closed(self, subset: Iterable[int]) -> bool:
        s = sorted(set(subset))
        mask = np.zeros(self.size, dtype=bool)
        mask[s] = True
        for _, k, t in self.ops:
            if k == 0:
                if not mask[int(t)]:
                    return False
                continue
            vals = t[np.ix_(*([s] * k))]
            if not mask[vals].all():
                return False
        return True

    def subalgebra(self, subset: Iterable[int]) -> tuple["FiniteAlgebra", list[int]]:
        """Restrict to a closed subset; returns the subalgebra and the embedding."""
        s = sorted(set(subset))
        if not self.is_closed(s):
            raise ValueError("subset is not closed under the operations")
        index = {a: i for i, a in enumerate(s)}
        relabel = np.full(self.size, -1, dtype=np.int64)
        for a, i in index.items():
            relabel[a] = i
        tables = {}
        for name, k, t in self.ops:
            tables[name] = relabel[t] if k == 0 else relabel[t[np.ix_(*([s] * k))]]
        sub = FiniteAlgebra(len(s), self.signature, tables,
                            [self.labels[a] for a in s], self.name + "|sub")
        return sub, s

    def is_homomorphism(self, other: "FiniteAlgebra", mapping: Sequence[int]) -> bool:
        m = np.asarray(mapping, dtype=np.int64)
        for name, k, t in self.ops:
            u = other.tables[name]
            if k == 0:
                if m[int(t)] != int(u):
                    return False
                continue
            args = np.indices((self.size,) * k)
            if not np.array_equal(m[t], u[tuple(m[a] for a in args)]):
                return False
        return True


def generated_subalgebra(alg: FiniteAlgebra, gens: Iterable[int]) -> list[int]:
    current = set(gens)
    for _, k, t in alg.ops:
        if k == 0:
            current.add(int(t))
    while True:
        s = sorted(current)
        new = set(current)
        for _, k, t in alg.ops:
            if k:
                new.update(np.unique(t[np.ix_(*([s] * k))]).tolist())
        if new == current:
            return s
        current = new


def product(algebras: Sequence[FiniteAlgebra], max_size: int | None = None) -> FiniteAlgebra:
    """Direct product; element tuples are numbered in lexicographic order."""
    if not algebras:
        raise ValueError("empty product")
    sig = algebras[0].signature
    for a in algebras[1:]:
        if a.signature != sig:
            raise SignatureError("factors have different signatures")
    sizes = [a.size for a in algebras]
    n = int(np.prod(sizes))
    if max_size is not None and n > max_size:
        raise ResourceLimitError(f"product carrier {n} exceeds limit {max_size}")
    coords = np.array(list(itertools.product(*[range(s) for s in sizes])),
                      dtype=np.int64).reshape(n, len(sizes))
    tables = {}
    for name, k in sig:
        if k == 0:
            idx = tuple(int(a.tables[name]) for a in algebras)
            tables[name] = np.array(np.ravel_multi_index(idx, sizes))
            continue
        args = np.indices((n,) * k).reshape(k, -1)
        comps = []
        for f, a in enumerate(algebras):
            comps.append(a.tables[name][tuple(coords[args[j], f] for j in range(k))])
        tables[name] = np.ravel_multi_index(tuple(comps), sizes).reshape((n,) * k)
    labels = ["(" + ",".join(a.labels[c] for a, c in zip(algebras, row)) + ")"
              for row in coords]
    return FiniteAlgebra(n, sig, tables, labels,
                         "×".join(a.name or "?" for a in algebras))


def find_isomorphism(a: FiniteAlgebra, b: FiniteAlgebra) -> list[int] | None:
    """Backtracking search for an isomorphism ``a -> b``."""
    if a.size != b.size or a.signature != b.signature:
        return None
    n = a.size
    ops = a.ops
    mapping = [-1] * n
    used = [False] * n

    def consistent(upto: int) -> bool:
        # only check tuples whose arguments are all already mapped
        assigned = [x for x in range(n) if mapping[x] >= 0]
        for name, k, t in ops:
            u = b.tables[name]
            if k == 0:
                v = int(t)
                if mapping[v] >= 0 and mapping[v] != int(u):
                    return False
                continue
            for args in itertools.product(assigned, repeat=k):
                if upto not in args:
                    continue
                v = int(t[args])
                w = int(u[tuple(mapping[x] for x in args)])
                if mapping[v] >= 0 and mapping[v] != w:
                    return False
        return True

    def extend(i: int) -> bool:
        if i == n:
            return True
        for y in range(n):
            if used[y]:
                continue
            mapping[i], used[y] = y, True
            if consistent(i) and extend(i + 1):
                return True
            mapping[i], used[y] = -1, False
        return False

    if extend(0) and a.is_homomorphism(b, mapping):
        return list(mapping)
    return None


# --------------------------------------------------------------------------
# varieties and identities


@dataclass(frozen=True)
class Identity:
    name: str
    nvars: int
    sides: Callable  # (ops, *vars) -> (lhs, rhs) or (lhs, rhs, guard)


@dataclass(frozen=True)
class Variety:
    name: str
    roles: tuple[tuple[str, int], ...]
    identities: tuple[Identity, ...]


@dataclass
class IdentityVerdict:
    variety: str
    violations: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.passed


def _lattice_ids(m: str = "meet", j: str = "join") -> list[Identity]:
    out = []
    for a, b, tag in ((m, j, ""), (j, m, " (dual)")):
        out += [
            Identity(f"idempotence{tag}", 1, lambda o, x, a=a: (o[a][x, x], x)),
            Identity(f"commutativity{tag}", 2,
                     lambda o, x, y, a=a: (o[a][x, y], o[a][y, x])),
            Identity(f"associativity{tag}", 3,
                     lambda o, x, y, z, a=a: (o[a][o[a][x, y], z], o[a][x, o[a][y, z]])),
            Identity(f"absorption{tag}", 2,
                     lambda o, x, y, a=a, b=b: (o[a][x, o[b][x, y]], x)),
        ]
    return out


def _distributive_ids() -> list[Identity]:
    return [
        Identity("distributivity", 3, lambda o, x, y, z: (
            o["join"][x, o["meet"][y, z]], o["meet"][o["join"][x, y], o["join"][x, z]])),
        Identity("distributivity (dual)", 3, lambda o, x, y, z: (
            o["meet"][x, o["join"][y, z]], o["join"][o["meet"][x, y], o["meet"][x, z]])),
    ]


def _modular_ids() -> list[Identity]:
    # quasi-identity: only assignments with a <= b count
    return [Identity("modularity", 3, lambda o, a, b, c: (
        o["join"][a, o["meet"][b, c]], o["meet"][b, o["join"][a, c]],
        o["meet"][a, b] == a))]


def _assoc(mul="mul") -> Identity:
    return Identity("associativity", 3,
                    lambda o, x, y, z: (o[mul][o[mul][x, y], z], o[mul][x, o[mul][y, z]]))


def _boolean_ids() -> list[Identity]:
    return [
        Identity("x meet 0 = 0", 1, lambda o, x: (o["meet"][x, o["zero"]], np.broadcast_to(o["zero"], x.shape))),
        Identity("x join 1 = 1", 1, lambda o, x: (o["join"][x, o["one"]], np.broadcast_to(o["one"], x.shape))),
        Identity("x meet x' = 0", 1, lambda o, x: (o["meet"][x, o["complement"][x]], np.broadcast_to(o["zero"], x.shape))),
        Identity("x join x' = 1", 1, lambda o, x: (o["join"][x, o["complement"][x]], np.broadcast_to(o["one"], x.shape))),
    ]


def _quasigroup_ids() -> list[Identity]:
    return [
        Identity("x(x\\y) = y", 2, lambda o, x, y: (o["mul"][x, o["ldiv"][x, y]], y)),
        Identity("x\\(xy) = y", 2, lambda o, x, y: (o["ldiv"][x, o["mul"][x, y]], y)),
        Identity("(x/y)y = x", 2, lambda o, x, y: (o["mul"][o["rdiv"][x, y], y], x)),
        Identity("(xy)/y = x", 2, lambda o, x, y: (o["rdiv"][o["mul"][x, y], y], x)),
    ]


def _group_ids() -> list[Identity]:
    def e(o, x):
        return np.broadcast_to(o["e"], x.shape)
    return [
        _assoc(),
        Identity("ex = x", 1, lambda o, x: (o["mul"][o["e"], x], x)),
        Identity("xe = x", 1, lambda o, x: (o["mul"][x, o["e"]], x)),
        Identity("x x^-1 = e", 1, lambda o, x: (o["mul"][x, o["inv"][x]], e(o, x))),
        Identity("x^-1 x = e", 1, lambda o, x: (o["mul"][o["inv"][x], x], e(o, x))),
    ]


LATTICE_ROLES = (("meet", 2), ("join", 2))
BOOLEAN_ROLES = LATTICE_ROLES + (("complement", 1), ("one", 0), ("zero", 0))

VARIETIES: dict[str, Variety] = {
    "lattice": Variety("lattice", LATTICE_ROLES, tuple(_lattice_ids())),
    "modular lattice": Variety("modular lattice", LATTICE_ROLES,
                               tuple(_lattice_ids() + _modular_ids())),
    "distributive lattice": Variety("distributive lattice", LATTICE_ROLES,
                                    tuple(_lattice_ids() + _distributive_ids())),
    "boolean algebra": Variety("boolean algebra", BOOLEAN_ROLES,
                               tuple(_lattice_ids() + _distributive_ids() + _boolean_ids())),
    "groupoid": Variety("groupoid", (("mul", 2),), ()),
    "semigroup": Variety("semigroup", (("mul", 2),), (_assoc(),)),
    "monoid": Variety("monoid", (("mul", 2), ("e", 0)), (
        _assoc(),
        Identity("ex = x", 1, lambda o, x: (o["mul"][o["e"], x], x)),
        Identity("xe = x", 1, lambda o, x: (o["mul"][x, o["e"]], x)))),
    "group": Variety("group", (("mul", 2), ("inv", 1), ("e", 0)), tuple(_group_ids())),
    "quasigroup": Variety("quasigroup", (("mul", 2), ("rdiv", 2), ("ldiv", 2)),
                          tuple(_quasigroup_ids())),
}
VARIETIES["modular"] = VARIETIES["modular lattice"]
VARIETIES["distributive"] = VARIETIES["distributive lattice"]
VARIETIES["boolean"] = VARIETIES["boolean algebra"]


def role_tables(alg: FiniteAlgebra, variety: str | Variety) -> dict[str, np.ndarray]:
    """Match the algebra's operations to the variety's roles by position."""
    var = VARIETIES[variety.lower()] if isinstance(variety, str) else variety
    sig = list(alg.signature)
    if len(sig) < len(var.roles):
        raise SignatureError(
            f"{var.name} needs {len(var.roles)} operations, algebra has {len(sig)}")
    out = {}
    for (role, arity), (name, k) in zip(var.roles, sig):
        if arity != k:
            raise SignatureError(
                f"{var.name}: role {role!r} needs arity {arity}, {name!r} has {k}")
        out[role] = alg.tables[name]
    return out


def check_identities(alg: FiniteAlgebra, variety: str | Variety) -> IdentityVerdict:
    """Evaluate every identity of the variety on all assignments.

    Returns the lexicographically first witness of each violated identity.
    """
    var = VARIETIES[variety.lower()] if isinstance(variety, str) else variety
    ops = role_tables(alg, var)
    verdict = IdentityVerdict(var.name)
    n = alg.size
    for ident in var.identities:
        grid = np.indices((n,) * ident.nvars).reshape(ident.nvars, -1)
        res = ident.sides(ops, *grid)
        lhs, rhs = np.broadcast_arrays(res[0], res[1])
        bad = lhs != rhs
        if len(res) == 3:
            bad &= res[2]
        if bad.any():
            i = int(np.argmax(bad))
            verdict.violations.append((ident.name, tuple(int(v) for v in grid[:, i])))
    return verdict


def lattice_leq(alg: FiniteAlgebra) -> np.ndarray:
    """``leq[a, b]`` iff ``a <= b`` in the order induced by the first (meet) operation."""
    meet = role_tables(alg, "lattice")["meet"]
    return meet == np.arange(alg.size)[:, None]


# --------------------------------------------------------------------------
# congruences


def _canonical(labels: Sequence[int]) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


@dataclass(frozen=True, order=True)
class Congruence:
    """A partition of the carrier, stored as a restricted growth string."""

    labels: tuple[int, ...]

    @classmethod
    def from_labels(cls, labels: Iterable[int]) -> "Congruence":
        return cls(_canonical(list(labels)))

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Congruence":
        labels = [-1] * n
        for b, block in enumerate(blocks):
            for x in block:
                if labels[x] != -1:
                    raise ValueError("blocks overlap")
                labels[x] = b
        if -1 in labels:
            raise ValueError("blocks do not cover the carrier")
        return cls.from_labels(labels)

    @classmethod
    def identity(cls, n: int) -> "Congruence":
        return cls(tuple(range(n)))

    @classmethod
    def total(cls, n: int) -> "Congruence":
        return cls((0,) * n)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def nblocks(self) -> int:
        return max(self.labels) + 1

    @property
    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.nblocks)]
        for x, b in enumerate(self.labels):
            out[b].append(x)
        return out

    def is_identity(self) -> bool:
        return self.nblocks == self.n

    def is_total(self) -> bool:
        return self.nblocks == 1

    def related(self, a: int, b: int) -> bool:
        return self.labels[a] == self.labels[b]

    def meet(self, other: "Congruence") -> "Congruence":
        return Congruence.from_labels(list(zip(self.labels, other.labels)))

    def join(self, other: "Congruence") -> "Congruence":
        uf = _UnionFind(self.n)
        for lab in (self.labels, other.labels):
            first: dict[int, int] = {}
            for x, b in enumerate(lab):
                uf.union(first.setdefault(b, x), x)
        return Congruence.from_labels(uf.find(x) for x in range(self.n))

    def refines(self, other: "Congruence") -> bool:
        return self.meet(other) == self

    def __str__(self):
        return "|".join(",".join(map(str, b)) for b in self.blocks)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """All restricted growth strings of length ``n``."""
    if n == 0:
        yield ()
        return
    labels = [0] * n

    def rec(i: int, mx: int):
        if i == n:
            yield tuple(labels)
            return
        for b in range(mx + 2):
            labels[i] = b
            yield from rec(i + 1, max(mx, b))

    labels[0] = 0
    yield from rec(1, 0)


def _moved(alg: FiniteAlgebra) -> list[np.ndarray]:
    """Each operation with one argument position moved to axis 0, flattened."""
    out = []
    for _, k, t in alg.ops:
        for j in range(k):
            out.append(np.moveaxis(t, j, 0).reshape(alg.size, -1))
    return out


def is_congruence(alg: FiniteAlgebra, labels: Sequence[int], _moved_ops=None) -> bool:
    lab = np.asarray(labels, dtype=np.int64)
    rep = np.array([list(labels).index(b) for b in labels], dtype=np.int64)
    for m in (_moved_ops if _moved_ops is not None else _moved(alg)):
        lm = lab[m]
        if not np.array_equal(lm, lm[rep]):
            return False
    return True


BRUTE_FORCE_LIMIT = 8


def _stacked(alg: FiniteAlgebra, moved=None) -> np.ndarray:
    moved = moved if moved is not None else _moved(alg)
    if not moved:
        return np.zeros((alg.size, 0), dtype=np.int64)
    return np.concatenate(moved, axis=1)


def _principal_labels(M: np.ndarray, a: int, b: int) -> np.ndarray:
    """Labels (least element of each block) of the congruence generated by ``a ~ b``,
    for the stacked basic translations ``M`` of shape ``(n, columns)``.

    Worklist in batches.  A pair may be replaced by the least elements of
    its two blocks, since those elements were identified by pairs whose
    translates are queued too; so each batch is a set of distinct pairs of
    block minima, and only pairs that join two blocks are translated."""
    n = M.shape[0]
    lab = np.arange(n)
    pu, pv = np.array([a]), np.array([b])
    while len(pu):
        ru, rv = lab[pu], lab[pv]
        live = ru != rv
        if not live.any():
            break
        key = np.unique(np.minimum(ru, rv)[live] * n + np.maximum(ru, rv)[live])
        pu, pv = key // n, key % n
        while True:
            ru, rv = lab[pu], lab[pv]
            if np.array_equal(ru, rv):
                break
            lo = np.minimum(ru, rv)
            np.minimum.at(lab, ru, lo)
            np.minimum.at(lab, rv, lo)
            while True:  # pointers only decrease, so this settles on block minima
                nxt = lab[lab]
                if np.array_equal(nxt, lab):
                    break
                lab = nxt
        pu, pv = M[pu].ravel(), M[pv].ravel()
    return lab


def principal_congruence(alg: FiniteAlgebra, a: int, b: int, _moved_ops=None) -> Congruence:
    """Least congruence identifying ``a`` and ``b``."""
    return Congruence.from_labels(_principal_labels(_stacked(alg, _moved_ops), a, b).tolist())


def congruences_principal(alg: FiniteAlgebra) -> list[Congruence]:
    M = _stacked(alg)
    n = alg.size
    principals = {Congruence.from_labels(_principal_labels(M, a, b).tolist())
                  for a in range(n) for b in range(a + 1, n)}
    found = {Congruence.identity(n)}
    for p in sorted(principals):
        found |= {c.join(p) for c in found}
    return sorted(found, key=lambda c: (-c.nblocks, c.labels))


def congruences(alg: FiniteAlgebra, threshold: int = BRUTE_FORCE_LIMIT) -> list[Congruence]:
    """All congruences, finest first."""
    if alg.size <= threshold:
        return congruences_bruteforce(alg)
    return congruences_principal(alg)



def congruences_bruteforce(alg: FiniteAlgebra) -> list[Congruence]:
    moved = _moved(alg)
    found = [Congruence(p) for p in set_partitions(alg.size)
             if is_congruence(alg, p, moved)]
    return sorted(found, key=lambda c: (-c.nblocks, c.labels))


def quotient(alg: FiniteAlgebra, con: Congruence) -> FiniteAlgebra:
    lab = np.asarray(con.labels, dtype=np.int64)
    reps = [block[0] for block in con.blocks]
    tables = {}
    for name, k, t in alg.ops:
        tables[name] = lab[t] if k == 0 else lab[t[np.ix_(*([reps] * k))]]
    labels = ["{" + ",".join(alg.labels[x] for x in b) + "}" for b in con.blocks]
    return FiniteAlgebra(con.nblocks, alg.signature, tables, labels, alg.name + "/~")


def kernel(mapping: Sequence[int]) -> Congruence:
    return Congruence.from_labels(mapping)


# --------------------------------------------------------------------------
# direct decomposition


@dataclass
class Decomposition:
    """``iso[a]`` gives the factor coordinates of carrier element ``a``."""

    algebra: FiniteAlgebra
    factors: list[FiniteAlgebra]
    iso: list[tuple[int, ...]]

    @property
    def inverse(self) -> dict[tuple[int, ...], int]:
        return {c: a for a, c in enumerate(self.iso)}

    def projection(self, i: int) -> list[int]:
        return [c[i] for c in self.iso]

    def reassemble(self) -> FiniteAlgebra:
        """Pull the product of the factors back through the isomorphism."""
        prod = product(self.factors)
        sizes = [f.size for f in self.factors]
        to_prod = [int(np.ravel_multi_index(c, sizes)) for c in self.iso]
        back = np.empty(prod.size, dtype=np.int64)
        back[to_prod] = np.arange(self.algebra.size)
        idx = np.asarray(to_prod)
        tables = {}
        for name, k, t in prod.ops:
            tables[name] = back[t] if k == 0 else back[t[np.ix_(*([idx] * k))]]
        return FiniteAlgebra(self.algebra.size, self.algebra.signature, tables)


def factor_pair(alg: FiniteAlgebra, cons: list[Congruence] | None = None
                ) -> tuple[Congruence, Congruence] | None:
    """First pair of complementary factor congruences, if any."""
    n = alg.size
    cons = congruences(alg) if cons is None else cons
    proper = [c for c in cons if not c.is_identity() and not c.is_total()]
    delta = Congruence.identity(n)
    for i, c1 in enumerate(proper):
        for c2 in proper[i + 1:]:
            if c1.nblocks * c2.nblocks == n and c1.meet(c2) == delta:
                return c1, c2
    return None


def direct_decomposition(alg: FiniteAlgebra) -> Decomposition:
    pair = factor_pair(alg) if alg.size > 3 else None
    if pair is None:
        return Decomposition(alg, [alg], [(a,) for a in range(alg.size)])
    c1, c2 = pair
    d1 = direct_decomposition(quotient(alg, c1))
    d2 = direct_decomposition(quotient(alg, c2))
    iso = [d1.iso[c1.labels[a]] + d2.iso[c2.labels[a]] for a in range(alg.size)]
    return Decomposition(alg, d1.factors + d2.factors, iso)


def is_directly_indecomposable(alg: FiniteAlgebra) -> bool:
    return alg.size == 1 or factor_pair(alg) is None


# --------------------------------------------------------------------------
# congruence-product property


@dataclass
class CPPVerdict:
    holds: bool
    product_congruences: int | None  # unknown when the principal route stops early
    factor_products: int
    counterexample: Congruence | None = None

    def __bool__(self):
        return self.holds


def product_congruence(factor_cons: Sequence[Congruence], sizes: Sequence[int]) -> Congruence:
    coords = itertools.product(*[range(s) for s in sizes])
    return Congruence.from_labels(
        tuple(c.labels[x] for c, x in zip(factor_cons, row)) for row in coords)


def _factor_restriction(lab: np.ndarray, sizes: Sequence[int]) -> Congruence:
    """The product congruence that agrees with ``lab`` on each coordinate axis
    through the origin; equal to ``lab`` exactly when ``lab`` is a product."""
    coords = np.indices(sizes).reshape(len(sizes), -1)
    parts = []
    for i, s in enumerate(sizes):
        axis = [0] * len(sizes)
        idx = []
        for x in range(s):
            axis[i] = x
            idx.append(int(np.ravel_multi_index(axis, sizes)))
        parts.append(lab[idx][coords[i]])
    return Congruence.from_labels(zip(*(q.tolist() for q in parts)))


def _pair_orbits(factors: Sequence[FiniteAlgebra]) -> Iterator[tuple[int, int]]:
    """One unordered pair of distinct elements per orbit of the factor
    permutations that swap equal factors."""
    sizes = [f.size for f in factors]
    groups: list[list[int]] = []
    for i, f in enumerate(factors):
        for g in groups:
            if factors[g[0]] == f:
                g.append(i)
                break
        else:
            groups.append([i])
    coords = [tuple(c) for c in np.indices(sizes).reshape(len(sizes), -1).T.tolist()]

    def key(x, y):
        return tuple(tuple(sorted((x[i], y[i]) for i in g)) for g in groups)

    seen = set()
    n = len(coords)
    for a in range(n):
        for b in range(a + 1, n):
            k = min(key(coords[a], coords[b]), key(coords[b], coords[a]))
            if k not in seen:
                seen.add(k)
                yield a, b


def congruence_product_check(factors: Sequence[FiniteAlgebra], max_size: int = 256,
                             method: str = "auto") -> CPPVerdict:
    """Is every congruence of the product a product of factor congruences?

    ``enumerate`` lists all congruences of the product and compares counts.
    ``principal`` tests only principal congruences, which suffices because
    every congruence is a join of principal ones and joins of product
    congruences are again products.  ``auto`` enumerates up to 16 elements.
    """
    if not factors:
        raise ValueError("need at least one factor")
    prod = product(factors, max_size=max_size)
    sizes = [f.size for f in factors]
    factor_cons = [congruences(f) for f in factors]
    n_products = int(np.prod([len(c) for c in factor_cons]))
    if method == "auto":
        method = "enumerate" if prod.size <= 16 else "principal"
    if method == "enumerate":
        con_prod = congruences(prod)
        products = {product_congruence(cs, sizes) for cs in itertools.product(*factor_cons)}
        extra = [c for c in con_prod if c not in products]
        return CPPVerdict(not extra and len(products) == len(con_prod),
                          len(con_prod), len(products), extra[0] if extra else None)
    if method != "principal":
        raise ValueError(f"unknown method {method!r}")
    M = _stacked(prod)
    for a, b in _pair_orbits(factors):
        lab = _principal_labels(M, a, b)
        con = Congruence.from_labels(lab.tolist())
        if _factor_restriction(lab, sizes) != con:
            return CPPVerdict(False, None, n_products, con)
    return CPPVerdict(True, n_products, n_products, None)


# --------------------------------------------------------------------------
# affine maps


Expr = tuple  # ("xi",) | ("const", a) | (op, args...) with exactly one Expr argument


def format_expr(expr, labels: Sequence[str] | None = None) -> str:
    if expr[0] == "xi":
        return "ξ"
    if expr[0] == "const":
        return labels[expr[1]] if labels else str(expr[1])
    args = [format_expr(a, labels) if isinstance(a, tuple) else
            (labels[a] if labels else str(a)) for a in expr[1:]]
    return f"{expr[0]}({', '.join(args)})"


def expr_depth(expr) -> int:
    if expr[0] in ("xi", "const"):
        return 0
    return 1 + max(expr_depth(a) for a in expr[1:] if isinstance(a, tuple))


def eval_expr(alg: FiniteAlgebra, expr, x: int) -> int:
    if expr[0] == "xi":
        return x
    if expr[0] == "const":
        return expr[1]
    args = [eval_expr(alg, a, x) if isinstance(a, tuple) else a for a in expr[1:]]
    return alg.apply(expr[0], *args)


@dataclass
class AffineClosure:
    """Unary maps (as value tuples) reachable by affine maps of growing depth.

    ``levels[d]`` is the set at depth ``<= d``; ``witness`` keeps one
    expression per map, of minimal depth.
    """

    algebra: FiniteAlgebra
    levels: list[frozenset[tuple[int, ...]]]
    witness: dict[tuple[int, ...], Expr]
    stabilized_at: int | None

    @property
    def functions(self) -> frozenset[tuple[int, ...]]:
        return self.levels[-1]


def affine_closure(alg: FiniteAlgebra, max_depth: int | None = None) -> AffineClosure:
    n = alg.size
    ident = tuple(range(n))
    witness: dict[tuple[int, ...], Expr] = {ident: ("xi",)}
    for a in range(n):
        witness.setdefault((a,) * n, ("const", a))
    levels = [frozenset(witness)]
    frontier = list(levels[0])
    unary_ops = [(name, k, t) for name, k, t in alg.ops if k >= 1]
    depth = 0
    while max_depth is None or depth < max_depth:
        new: list[tuple[int, ...]] = []
        for name, k, t in unary_ops:
            for j in range(k):
                m = np.moveaxis(t, j, 0).reshape(n, -1)
                for g in frontier:
                    cols = m[list(g)]  # column c is the map x -> f(.., g(x), ..)
                    for c in range(cols.shape[1]):
                        h = tuple(cols[:, c].tolist())
                        if h in witness:
                            continue
                        consts = list(np.unravel_index(c, (n,) * (k - 1))) if k > 1 else []
                        args: list = [int(v) for v in consts]
                        args.insert(j, witness[g])
                        witness[h] = (name, *args)
                        new.append(h)
        depth += 1
        levels.append(levels[-1] | frozenset(new))
        if not new:
            return AffineClosure(alg, levels, witness, depth - 1)
        frontier = new
    return AffineClosure(alg, levels, witness, None)


def shallowness(alg: FiniteAlgebra) -> int:
    """Least ``k`` such that every affine map equals one of depth ``<= k``."""
    return affine_closure(alg).stabilized_at
