"""Cellwise lattice subshifts: extremal points, characterization, soficity,
and the classification of binary lattice subshifts."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Callable, Sequence

import numpy as np

from .algebra import FiniteAlgebra, role_tables
from .errors import InternalConsistencyError, PreconditionError
from .evp import EVP
from .subshift import (Containment, Subshift, cellwise_map, contains, decode, equal,
                       image, language, product_shift, trim)


def _order(alg: FiniteAlgebra):
    ops = role_tables(alg, "lattice")
    meet, join = ops["meet"], ops["join"]
    leq = meet == np.arange(alg.size)[:, None]
    return meet, join, leq


def _fold(table, values):
    return int(reduce(lambda a, b: table[a, b], sorted(values)))


@dataclass
class ExtremalFamily:
    """``m[a]`` is the cellwise meet of all points with ``x_0 >= a``;
    ``M[a]`` the cellwise join of all points with ``x_0 <= a``.

    ``horizon[('m', a)]`` is ``(right preperiod+period, left preperiod+period)``
    of the reachable-state sequences that produced the point.
    """

    algebra: FiniteAlgebra
    subshift: Subshift
    m: dict[int, EVP]
    M: dict[int, EVP]
    horizon: dict[tuple[str, int], tuple[int, int]] = field(default_factory=dict)


def _state_sequence(start: frozenset, step) -> tuple[list[frozenset], int, int]:
    """Iterate ``step`` from ``start`` until a repeat: returns the states,
    the preperiod and the period."""
    seen: dict[frozenset, int] = {}
    seq: list[frozenset] = []
    s = start
    while s not in seen:
        seen[s] = len(seq)
        seq.append(s)
        s = step(s)
    pre = seen[s]
    return seq, pre, len(seq) - pre


def _extremal(X: Subshift, alg: FiniteAlgebra, a: int, dual: bool):
    meet, join, leq = _order(alg)
    op = join if dual else meet
    sel = (lambda b: leq[b, a]) if dual else (lambda b: leq[a, b])
    g = X.graph
    out, inn = g.out(), g.inn()
    edges = [(u, v, b) for u, v, b in g.edges if sel(b)]
    if not edges:
        raise PreconditionError(f"no point has an admissible symbol at the origin for {a}")
    centre = _fold(op, {b for _, _, b in edges})

    def fwd(s):
        return frozenset(v for u in s for _, v in out[u])

    def bwd(s):
        return frozenset(u for v in s for _, u in inn[v])

    rseq, rpre, rper = _state_sequence(frozenset(v for _, v, _ in edges), fwd)
    lseq, lpre, lper = _state_sequence(frozenset(u for u, _, _ in edges), bwd)
    # value at +i (i>=1) comes from edges leaving rseq[i-1]
    rvals = [_fold(op, {b for u in s for b, _ in out[u]}) for s in rseq]
    lvals = [_fold(op, {b for v in s for b, _ in inn[v]}) for s in lseq]
    right_mid = [centre] + rvals[:rpre]
    right_per = rvals[rpre:]
    left_mid = lvals[:lpre][::-1]
    left_per = lvals[lpre:][::-1]
    pt = EVP.make(left_per, left_mid + right_mid, right_per, -len(left_mid))
    return pt, (rpre + rper, lpre + lper)


def check_full_alphabet(X: Subshift, alg: FiniteAlgebra) -> None:
    if X.alphabet_size != alg.size:
        raise PreconditionError("alphabet and carrier sizes differ")
    missing = sorted(set(range(alg.size)) - X.symbols())
    if missing:
        raise PreconditionError("some symbols never occur", [alg.labels[a] for a in missing])


def compute_extremal(X: Subshift, alg: FiniteAlgebra) -> ExtremalFamily:
    check_full_alphabet(X, alg)
    fam = ExtremalFamily(alg, X, {}, {})
    for a in range(alg.size):
        fam.m[a], fam.horizon[("m", a)] = _extremal(X, alg, a, dual=False)
        fam.M[a], fam.horizon[("M", a)] = _extremal(X, alg, a, dual=True)
    return fam


# --------------------------------------------------------------------------
# the shift cut out by an extremal family


def _mirror(p: EVP) -> EVP:
    lo, hi = p.span
    return EVP.make(p.right_period[::-1], p.middle[::-1], p.left_period[::-1], -(hi - 1))


def _obligation_graph(points: dict[int, EVP], ok: Callable[[int, int], bool], n: int,
                      limit: int = 20000):
    """Automaton reading left to right that remembers, for each symbol ``b``
    read ``j`` steps ago, the requirement ``ok(points[b][j], c)`` on the
    current symbol ``c``."""
    norm = {}
    for b, p in points.items():
        hi, pr = p.span[1], len(p.right_period)
        norm[b] = (hi, pr)
        trivial = all(ok(v, c) for v in p.right_period for c in range(n))
        norm[b] = (hi, pr, trivial)

    def advance(b, j):
        hi, pr, trivial = norm[b]
        if j >= hi:
            if trivial:
                return None
            j = hi + (j - hi) % pr
        return (b, j)

    start: frozenset = frozenset()
    index = {start: 0}
    order = [start]
    edges = []
    for s in order:
        for c in range(n):
            if not ok(points[c][0], c):
                continue
            if any(not ok(points[b][j], c) for b, j in s):
                continue
            nxt = {advance(b, j + 1) for b, j in s}
            nxt.add(advance(c, 1))
            nxt.discard(None)
            t = frozenset(nxt)
            if t not in index:
                index[t] = len(order)
                order.append(t)
                if len(order) > limit:
                    raise PreconditionError("obligation automaton too large")
            edges.append((index[s], index[t], c))
    return len(order), edges


def extremal_shift(fam: ExtremalFamily, dual: bool = False) -> Subshift:
    """``{x : x >= σ^{-i}(m^{x_i}) for all i}`` (or the ``<= M`` version)."""
    _, _, leq = _order(fam.algebra)
    n = fam.algebra.size
    points = fam.M if dual else fam.m
    if dual:
        def ok(req, c):
            return bool(leq[c, req])
    else:
        def ok(req, c):
            return bool(leq[req, c])
    nr, er = _obligation_graph(points, ok, n)
    nl, el = _obligation_graph({a: _mirror(p) for a, p in points.items()}, ok, n)
    # right-reading constraints times reversed left-reading constraints
    inn_l: list[list[tuple[int, int]]] = [[] for _ in range(nl)]
    for u, v, c in el:
        inn_l[v].append((c, u))
    edges = []
    for u, v, c in er:
        for v2 in range(nl):
            for c2, u2 in inn_l[v2]:
                if c2 == c:
                    edges.append((u * nl + v2, v * nl + u2, c))
    return Subshift.from_graph(n, nr * nl, edges, fam.algebra.labels)


# --------------------------------------------------------------------------
# cellwise lattice check


@dataclass
class LatticeVerdict:
    cellwise: bool
    operation: str | None = None
    failing_word: tuple[int, ...] | None = None
    witness_pair: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    family: ExtremalFamily | None = None

    def __bool__(self):
        return self.cellwise


def cellwise_image(X: Subshift, table: np.ndarray, arity: int = 2) -> Subshift:
    """Image of ``X^arity`` under a cellwise operation table."""
    n = X.alphabet_size
    P = product_shift([X] * arity)
    f = cellwise_map(P, lambda c: int(table[decode(c, [n] * arity)]), n, X.labels)
    return image(f)


def _preimage_pair(X: Subshift, table, word):
    words = language(X, len(word))
    for u in words:
        for v in words:
            if tuple(int(table[a, b]) for a, b in zip(u, v)) == tuple(word):
                return u, v
    return None


def closure_test(X: Subshift, alg: FiniteAlgebra) -> LatticeVerdict:
    meet, join, _ = _order(alg)
    for name, table in (("meet", meet), ("join", join)):
        res = contains(X, cellwise_image(X, table))
        if not res:
            return LatticeVerdict(False, name, res.witness,
                                  _preimage_pair(X, table, res.witness))
    return LatticeVerdict(True)


def cellwise_lattice_check(X: Subshift, alg: FiniteAlgebra) -> LatticeVerdict:
    """Decide whether ``X`` is closed under the cellwise lattice operations,
    once by direct closure and once through the extremal-point description;
    the two answers must agree."""
    check_full_alphabet(X, alg)
    direct = closure_test(X, alg)
    fam = compute_extremal(X, alg)
    Z = extremal_shift(fam)
    if not contains(Z, X):
        raise InternalConsistencyError("X is not contained in its extremal-point shift")
    via_extremal = bool(contains(X, Z))
    if via_extremal != direct.cellwise:
        raise InternalConsistencyError(
            f"closure test says {direct.cellwise}, extremal test says {via_extremal}")
    direct.family = fam
    return direct


# --------------------------------------------------------------------------
# soficity


@dataclass
class SoficVerdict:
    status: str  # sofic-certified | periodic-up-to-window | not-eventually-periodic-up-to-window
    window: int | None = None
    details: dict = field(default_factory=dict)


def _periodic_evidence(vals: Sequence[int]) -> tuple[int, int] | None:
    W = len(vals) - 1
    for p in range(1, W // 2 + 1):
        for s in range(0, W - 2 * p + 1):
            if all(vals[i] == vals[i + p] for i in range(s, W - p + 1)):
                return s, p
    return None


def soficity_check(family, window: int = 64, symbols: Sequence[int] | None = None) -> SoficVerdict:
    """Eventual periodicity of an extremal family.

    A computed :class:`ExtremalFamily` is certified at once.  A rule
    ``family(a, i) -> symbol`` is sampled on ``-window..window`` and
    searched for a preperiod and period; failure is a bounded refutation.
    """
    if isinstance(family, ExtremalFamily):
        return SoficVerdict("sofic-certified", None,
                            {k: v for k, v in family.horizon.items()})
    if symbols is None:
        raise ValueError("a rule-based family needs the list of symbols")
    details = {}
    status = "periodic-up-to-window"
    for a in symbols:
        right = [family(a, i) for i in range(0, window + 1)]
        left = [family(a, -i) for i in range(0, window + 1)]
        ev = (_periodic_evidence(right), _periodic_evidence(left))
        details[a] = ev
        if ev[0] is None or ev[1] is None:
            status = "not-eventually-periodic-up-to-window"
    return SoficVerdict(status, window, details)


def powers_of_two_family(alg: FiniteAlgebra, a: int, one: int, zero: int):
    """The extremal family of the rule "x_i = 1 implies x_{i±2^j} >= a"."""
    def m(b, i):
        if b != one:
            return b if i == 0 else zero
        if i == 0:
            return one
        k = abs(i)
        return a if k & (k - 1) == 0 else zero
    return m


# --------------------------------------------------------------------------
# binary classification


@dataclass(frozen=True)
class BinaryClass:
    tag: str  # full | periodic | right-cone | left-cone
    period: int | None = None
    generators: tuple[int, ...] = ()
    complement_closed: bool | None = None

    def to_subshift(self) -> Subshift:
        if self.tag == "full":
            return Subshift.full(2)
        if self.tag == "periodic":
            n = self.period
            words = [w for w in _binary_words(n + 1) if w[0] != w[-1]]
            return Subshift.from_forbidden(2, words)
        words = []
        for p in self.generators:
            for w in _binary_words(p + 1):
                head, tail = (w[0], w[-1]) if self.tag == "right-cone" else (w[-1], w[0])
                if head == 1 and tail == 0:
                    words.append(w)
        return Subshift.from_forbidden(2, words)

    def __str__(self):
        if self.tag == "periodic":
            return f"periodic({self.period})"
        if self.tag in ("right-cone", "left-cone"):
            return f"{self.tag}({sorted(self.generators)})"
        return self.tag


def _binary_words(n: int):
    import itertools
    return [tuple(w) for w in itertools.product((0, 1), repeat=n)]


def _semigroup_generators(elems: Sequence[int]) -> tuple[int, ...]:
    s = sorted(set(elems))
    present = set(s)
    gens = []
    for x in s:
        if not any(y <= x - y and (x - y) in present for y in s if y < x):
            gens.append(x)
    return tuple(gens)


def binary_two():
    from .catalog import two
    return two()


def classify_binary(X: Subshift, use: str = "m", verify: bool = True) -> BinaryClass:
    """Sort a cellwise lattice subshift of ``{0,1}^Z`` into one of the four
    families; ``use='M'`` runs the dual computation instead."""
    alg = binary_two()
    if X.alphabet_size != 2 or X.is_empty() or len(X.symbols()) < 2:
        raise PreconditionError("need a nontrivial binary subshift")
    verdict = cellwise_lattice_check(X, alg)
    if not verdict:
        raise PreconditionError("not a cellwise lattice subshift",
                                (verdict.operation, verdict.failing_word, verdict.witness_pair))
    fam = verdict.family
    if use == "m":
        pt = fam.m[1]
        sign = 1

        def hit(i):
            return pt[i] == 1
    else:
        pt = fam.M[0]
        sign = -1

        def hit(i):
            return pt[i] == 0
    lo, hi = pt.span
    pl, pr = len(pt.left_period), len(pt.right_period)
    reach_r = max(hi, 1) + 3 * pr + 2
    reach_l = max(-lo, 1) + 3 * pl + 2
    pos = [sign * i for i in range(1, reach_r) if hit(i)]
    neg = [sign * -i for i in range(1, reach_l) if hit(-i)]
    K = sorted(set(pos + neg))
    kpos = [k for k in K if k > 0]
    kneg = [k for k in K if k < 0]
    if not K:
        cls = BinaryClass("full")
    elif kpos and kneg:
        cls = BinaryClass("periodic", reduce(gcd, [abs(k) for k in K]))
    elif kpos:
        cls = BinaryClass("right-cone", generators=_semigroup_generators(kpos))
    else:
        cls = BinaryClass("left-cone", generators=_semigroup_generators([-k for k in kneg]))
    comp = bool(contains(X, cellwise_image(X, np.array([1, 0]), arity=1)))
    cls = BinaryClass(cls.tag, cls.period, cls.generators, comp)
    if verify:
        if not equal(X, cls.to_subshift()):
            raise InternalConsistencyError(f"class {cls} does not regenerate the subshift")
        if comp and cls.tag not in ("full", "periodic"):
            raise InternalConsistencyError("complement-closed subshift classified as a cone")
    return cls
