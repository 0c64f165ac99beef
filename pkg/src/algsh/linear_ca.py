"""Cellular automata whose local rule is a homomorphism: linearity, the
limit alphabet, factorization of the rule, and the limit set."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import lcm
from typing import Callable, Sequence

import numpy as np

from .algebra import (Decomposition, FiniteAlgebra, congruence_product_check,
                      direct_decomposition)
from .errors import InternalConsistencyError, PreconditionError
from .subshift import BlockMap, Subshift, decode, encode, equal, image, periodic_words


@dataclass
class LinearCA:
    """``rule`` has shape ``(n,) * (2r+1)``; axis 0 is the leftmost cell."""

    alg: FiniteAlgebra
    radius: int
    rule: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.rule = np.asarray(self.rule, dtype=np.int64)
        n, w = self.alg.size, 2 * self.radius + 1
        if self.rule.shape != (n,) * w:
            raise ValueError(f"rule must have shape {(n,) * w}")
        if self.rule.min() < 0 or self.rule.max() >= n:
            raise ValueError("rule leaves the alphabet")

    @classmethod
    def from_function(cls, alg: FiniteAlgebra, radius: int, fn: Callable[..., int],
                      name: str = "") -> "LinearCA":
        n, w = alg.size, 2 * radius + 1
        rule = np.empty((n,) * w, dtype=np.int64)
        for window in itertools.product(range(n), repeat=w):
            rule[window] = fn(*window)
        return cls(alg, radius, rule, name)

    @property
    def width(self) -> int:
        return 2 * self.radius + 1

    def blockmap(self, X: Subshift | None = None) -> BlockMap:
        X = X or Subshift.full(self.alg.size, self.alg.labels)
        return BlockMap.from_function(X, self.radius, lambda w: int(self.rule[w]),
                                      self.alg.size, self.alg.labels, self.name)

    def step_cyclic(self, config: np.ndarray, times: int = 1) -> np.ndarray:
        """Apply the CA to periodic configurations (rows of ``config``)."""
        x = np.asarray(config, dtype=np.int64)
        r = self.radius
        for _ in range(times):
            idx = tuple(np.roll(x, -d, axis=-1) for d in range(-r, r + 1))
            x = self.rule[idx]
        return x


@dataclass
class LinearityVerdict:
    linear: bool
    operation: str | None = None
    arguments: tuple | None = None

    def __bool__(self):
        return self.linear


def check_linear(ca: LinearCA, chunk: int = 1 << 22) -> LinearityVerdict:
    """Is the local rule a homomorphism from the power ``S^(2r+1)`` to ``S``?"""
    alg, g = ca.alg, ca.rule.reshape(-1)
    n, w = alg.size, ca.width
    windows = np.array(list(itertools.product(range(n), repeat=w)), dtype=np.int64)
    weights = n ** np.arange(w - 1, -1, -1)
    for name, k, t in alg.ops:
        if k == 0:
            c = int(t)
            if g[np.full(w, c) @ weights] != c:
                return LinearityVerdict(False, name, ())
            continue
        step = max(1, chunk // (w * len(windows)))
        for start in range(0, len(windows) ** (k - 1), step):
            heads = np.arange(start, min(start + step, len(windows) ** (k - 1)))
            args = [windows[heads // len(windows) ** (k - 2 - s) % len(windows)]
                    for s in range(k - 1)]
            # combine every head tuple with every last-argument window
            cols = [np.repeat(a, len(windows), axis=0) for a in args]
            cols.append(np.tile(windows, (len(heads), 1)))
            lhs = g[t[tuple(cols)] @ weights]
            rhs = t[tuple(g[c @ weights] for c in cols)]
            bad = np.nonzero(lhs != rhs)[0]
            if len(bad):
                i = bad[0]
                return LinearityVerdict(False, name,
                                        tuple(tuple(int(v) for v in c[i]) for c in cols))
    return LinearityVerdict(True)


def limit_alphabet(ca: LinearCA) -> list[int]:
    """Fixpoint of ``A -> g(A^(2r+1))`` starting from the whole alphabet."""
    A = list(range(ca.alg.size))
    while True:
        B = sorted(set(np.unique(ca.rule[np.ix_(*[A] * ca.width)]).tolist()))
        if B == A:
            break
        A = B
    if not ca.alg.is_closed(A):
        raise InternalConsistencyError("limit alphabet is not a subalgebra")
    return A


def limit_symbols(ca: LinearCA, ls: "LimitStructure | None" = None) -> list[int]:
    """Symbols that occur in points of the limit set.

    Can be smaller than :func:`limit_alphabet`: cells of a window are not
    independent once components copy one another, so ``g`` of a window
    over the limit symbols may leave them.
    """
    ls = ls or limit_structure(ca)
    return sorted(ls.limit.symbols())


# --------------------------------------------------------------------------
# factorization


class CongruenceProductFailure(PreconditionError):
    pass


@dataclass
class FactorLink:
    source: int  # j_i: factor read
    position: int  # k_i: window index, 0 = leftmost cell
    h: tuple[int, ...]  # h_i as a table on the source factor

    def offset(self, radius: int) -> int:
        return self.position - radius


@dataclass
class FactorizationReport:
    alphabet: list[int]
    subalgebra: FiniteAlgebra
    decomposition: Decomposition
    links: list[FactorLink]
    radius: int

    @property
    def sizes(self) -> list[int]:
        return [f.size for f in self.decomposition.factors]

    def element(self, coords: Sequence[int]) -> int:
        """Element of the original alphabet with the given factor coordinates."""
        return self.alphabet[self.decomposition.inverse[tuple(coords)]]

    def coords(self, a: int) -> tuple[int, ...]:
        return self.decomposition.iso[self.alphabet.index(a)]


def factorize_rule(ca: LinearCA, cpp_max_size: int = 64) -> FactorizationReport:
    R = limit_alphabet(ca)
    sub, emb = ca.alg.subalgebra(R)
    dec = direct_decomposition(sub)
    m = len(dec.factors)
    sizes = [f.size for f in dec.factors]
    if m > 1:
        prod_size = int(np.prod(sizes))
        if prod_size <= cpp_max_size:
            verdict = congruence_product_check(dec.factors, max_size=cpp_max_size)
            if not verdict.holds:
                raise CongruenceProductFailure(
                    "factors of the limit alphabet lack the congruence-product property",
                    verdict.counterexample)
    w = ca.width
    pos = {a: i for i, a in enumerate(R)}
    coords = np.array(dec.iso, dtype=np.int64).reshape(len(R), m)
    # restricted rule on R^(2r+1), in local indices
    local = np.vectorize(pos.get)(ca.rule[np.ix_(*[R] * w)])
    links = []
    for i in range(m):
        gi = coords[local, i]  # shape (|R|,)*w
        deps = []
        for k in range(w):
            for j in range(m):
                # does g_i change when only factor j of cell k changes?
                moved = _varies(gi, coords, k, j)
                if moved:
                    deps.append((k, j))
        if len(deps) > 1:
            raise CongruenceProductFailure(
                f"factor {i} of the rule reads several coordinates", deps)
        if not deps:
            if sizes[i] != 1:
                raise InternalConsistencyError(f"factor {i} is constant but nontrivial")
            links.append(FactorLink(i, ca.radius, (0,)))
            continue
        k, j = deps[0]
        h = [-1] * sizes[j]
        for b in range(len(R)):
            idx = [0] * w
            idx[k] = b
            h[coords[b, j]] = int(gi[tuple(idx)])
        # any other context must agree
        h = tuple(h)
        if set(h) != set(range(sizes[i])):
            raise InternalConsistencyError(f"h_{i} is not onto")
        if not dec.factors[j].is_homomorphism(dec.factors[i], h):
            raise InternalConsistencyError(f"h_{i} is not a homomorphism")
        links.append(FactorLink(j, k, h))
    rep = FactorizationReport(R, sub, dec, links, ca.radius)
    _verify_factorization(rep, local, coords)
    return rep


def _varies(gi: np.ndarray, coords: np.ndarray, k: int, j: int) -> bool:
    """Does ``gi`` depend on factor ``j`` of the ``k``-th cell?"""
    key = [tuple(np.delete(c, j)) for c in coords]
    groups: dict = {}
    for b, kb in enumerate(key):
        groups.setdefault(kb, []).append(b)
    moved = np.moveaxis(gi, k, 0)
    for members in groups.values():
        first = moved[members[0]]
        for b in members[1:]:
            if not np.array_equal(moved[b], first):
                return True
    return False


def _verify_factorization(rep: FactorizationReport, local: np.ndarray, coords: np.ndarray):
    grids = np.indices(local.shape)
    for i, link in enumerate(rep.links):
        lhs = coords[local, i]
        src = coords[grids[link.position], link.source]
        rhs = np.asarray(link.h)[src]
        if not np.array_equal(lhs, rhs):
            raise InternalConsistencyError(f"factorization identity fails for factor {i}")


# --------------------------------------------------------------------------
# limit structure


@dataclass
class LimitStructure:
    factorization: FactorizationReport
    edges: list[tuple[int, int]]
    cycle_vertices: list[int]
    cycle_periods: dict[int, int]
    cycle_shifts: dict[int, int]
    period: int
    structural_depth: int
    stabilization_time: int
    anchor: dict[int, tuple[int, int, tuple[int, ...]]]
    limit: Subshift
    images: list[Subshift] = field(default_factory=list)
    dynamics_checked: int = 0  # G^p verified on periodic points up to this period

    @property
    def p(self) -> int:
        return self.period

    @property
    def q(self) -> int:
        return self.stabilization_time

    def shift_exponent(self, v: int) -> int:
        """``G^p`` moves component ``v`` of limit points by this many cells."""
        c = self.anchor[v][0]
        return self.period // self.cycle_periods[c] * self.cycle_shifts[c]


def _order(perm: Sequence[int]) -> int:
    ident = tuple(range(len(perm)))
    f, k = tuple(perm), 1
    while f != ident:
        f = tuple(perm[a] for a in f)
        k += 1
    return k


def _inverse(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for a, b in enumerate(perm):
        inv[b] = a
    return tuple(inv)


def iterated_images(ca: LinearCA, max_steps: int = 64) -> list[Subshift]:
    """``S^Z, G(S^Z), ...`` (minimized) up to the first repetition."""
    G = ca.blockmap()
    out = [G.domain]
    for _ in range(max_steps):
        out.append(image(G, out[-1]))
        if equal(out[-1], out[-2]):
            return out
    raise InternalConsistencyError("images did not stabilize")


def limit_structure(ca: LinearCA, max_steps: int = 64, max_period: int = 6,
                    budget: int = 200_000) -> LimitStructure:
    fac = factorize_rule(ca)
    links = fac.links
    m = len(links)
    r = ca.radius
    pred = [ln.source for ln in links]
    edges = sorted((pred[i], i) for i in range(m))
    on_cycle = []
    for i in range(m):
        v = pred[i]
        for _ in range(m):
            if v == i:
                on_cycle.append(i)
                break
            v = pred[v]
    succ_on_cycle = {pred[i]: i for i in on_cycle}
    periods, shifts = {}, {}
    for i in on_cycle:
        f = tuple(range(fac.sizes[i]))
        total, v, length = 0, i, 0
        while True:
            f = tuple(links[v].h[a] for a in f)  # apply h_v after the earlier ones
            total += links[v].offset(r)
            length += 1
            v = pred[v]
            if v == i:
                break
        o = _order(f)
        periods[i] = length * o
        shifts[i] = o * total
    p = lcm(*periods.values()) if periods else 1

    # each vertex v: π_v(x)_t = φ_v(π_c(x)_{t+s}) on the limit set
    anchor: dict[int, tuple[int, int, tuple[int, ...]]] = {
        i: (i, 0, tuple(range(fac.sizes[i]))) for i in on_cycle}
    depth = {i: 0 for i in on_cycle}

    def resolve(v):
        if v in anchor:
            return anchor[v]
        c, s, phi = resolve(pred[v])
        nb = succ_on_cycle[c]
        inv = _inverse(links[nb].h)
        anchor[v] = (nb, links[v].offset(r) + s - links[nb].offset(r),
                     tuple(links[v].h[phi[inv[a]]] for a in range(fac.sizes[nb])))
        depth[v] = depth[pred[v]] + 1
        return anchor[v]

    for v in range(m):
        resolve(v)
    structural = max(depth.values(), default=0)

    images = iterated_images(ca, max_steps)
    q = len(images) - 2
    limit = images[q]
    struct = structural_limit(fac, anchor, on_cycle, ca.alg)
    if struct is not None and not equal(struct, limit):
        raise InternalConsistencyError("structural limit differs from the iterated image")
    ls = LimitStructure(fac, edges, sorted(on_cycle), periods, shifts, p, structural, q,
                        anchor, limit, images)
    bad, ls.dynamics_checked = check_shift_dynamics(ca, ls, max_period, budget)
    if bad is not None:
        raise InternalConsistencyError(f"G^p is not the claimed shift product on {bad}")
    return ls


def structural_limit(fac: FactorizationReport, anchor, cycles: list[int],
                     alg: FiniteAlgebra, max_states: int = 20000) -> Subshift | None:
    """The limit set as the image of the full shift over the cycle factors."""
    sizes = [fac.sizes[c] for c in cycles]
    rho = max((abs(s) for _, s, _ in anchor.values()), default=0)
    nI = int(np.prod(sizes)) if sizes else 1
    if nI ** (2 * rho) > max_states:
        return None
    F = Subshift.full(nI)
    slot = {c: i for i, c in enumerate(cycles)}
    m = len(fac.links)

    def local(w):
        coords = []
        for v in range(m):
            c, s, phi = anchor[v]
            coords.append(phi[decode(w[rho + s], sizes)[slot[c]]])
        return fac.element(coords)

    psi = BlockMap.from_function(F, rho, local, alg.size, alg.labels)
    return image(psi)


def periodic_point_count(X: Subshift, p: int) -> int:
    """Number of words ``w`` of length ``p`` with ``w^∞`` in ``X``, upper bound for
    presentations that are not right-resolving."""
    A = np.zeros((X.graph.nvertices,) * 2, dtype=object)
    for u, v, _ in X.graph.edges:
        A[u, v] += 1
    M = np.identity(len(A), dtype=object)
    for _ in range(p):
        M = M.dot(A)
    return int(np.trace(M))


def check_shift_dynamics(ca: LinearCA, ls: LimitStructure, max_period: int = 6,
                         budget: int = 200_000):
    """First periodic limit point on which ``G^p`` is not the claimed shift
    product (or ``None``), and the largest period checked.

    Periods are tried in increasing order while the number of points stays
    within ``budget``."""
    fac = ls.factorization
    m = len(fac.links)
    n = ca.alg.size
    coords = np.full((n, m), -1, dtype=np.int64)
    for a in fac.alphabet:
        coords[a] = fac.coords(a)
    index = np.zeros(fac.sizes, dtype=np.int64)
    for c, a in zip(fac.decomposition.iso, fac.alphabet):
        index[tuple(c)] = a
    exps = [ls.shift_exponent(v) for v in range(m)]
    checked = 0
    for P in range(1, max_period + 1):
        if periodic_point_count(ls.limit, P) > budget:
            break
        checked = P
        pts = periodic_words(ls.limit, P)
        if not pts:
            continue
        X = np.array(pts, dtype=np.int64)
        Y = ca.step_cyclic(X, ls.period)
        cx = coords[X]  # (points, P, m)
        shifted = [np.roll(cx[:, :, v], -exps[v], axis=1) for v in range(m)]
        expect = index[tuple(shifted)]
        bad = np.nonzero((expect != Y).any(axis=1))[0]
        if len(bad):
            return pts[bad[0]], checked
    return None, checked


def periodic_limit_alphabet(ca: LinearCA, max_period: int = 6) -> list[int]:
    """Symbols seen in ``G^|S|`` of every periodic configuration of small period."""
    n = ca.alg.size
    seen: set[int] = set()
    for P in range(1, max_period + 1):
        X = np.array(list(itertools.product(range(n), repeat=P)), dtype=np.int64)
        seen.update(np.unique(ca.step_cyclic(X, n)).tolist())
    return sorted(seen)


# --------------------------------------------------------------------------
# Boolean rules


@dataclass
class AtomReport:
    atom: int
    trivial: bool
    source: int | None = None
    shift: int | None = None
    constant: int | None = None


def boolean_ca_corollary_check(ca: LinearCA) -> list[AtomReport]:
    from .boolean import power_set_view
    view = power_set_view(ca.alg)
    code = np.asarray(view.code)
    bits = code[ca.rule]  # output masks
    grids = np.indices(ca.rule.shape)
    out = []
    for t in range(view.k):
        col = bits >> t & 1
        if np.all(col == col.flat[0]):
            out.append(AtomReport(t, True, constant=int(col.flat[0])))
            continue
        found = None
        for i in itertools.chain([0], *zip(range(1, ca.radius + 1), range(-1, -ca.radius - 1, -1))):
            for s in range(view.k):
                if np.array_equal(col, code[grids[ca.radius + i]] >> s & 1):
                    found = (s, i)
                    break
            if found:
                break
        if found is None:
            raise InternalConsistencyError(f"atom {view.atom_label(t)} matches no shifted atom")
        out.append(AtomReport(t, False, found[0], found[1]))
    return out


# --------------------------------------------------------------------------
# fixtures


def product_rule(factors: Sequence[FiniteAlgebra], radius: int,
                 links: Sequence[tuple[int, int, Sequence[int]]], name: str = "") -> LinearCA:
    """The CA on ``∏ factors`` whose ``i``-th component reads component
    ``j`` at window index ``k`` through the map ``h``: ``links[i] = (j, k, h)``."""
    from .algebra import product
    S = product(list(factors))
    sizes = [f.size for f in factors]

    def fn(*window):
        cells = [decode(a, sizes) for a in window]
        return encode([h[cells[k][j]] for j, k, h in links], sizes)

    return LinearCA.from_function(S, radius, fn, name)


def monotone_maps(a: int, b: int) -> list[tuple[int, ...]]:
    """Order-preserving maps from the ``a``-chain to the ``b``-chain."""
    return [m for m in itertools.combinations_with_replacement(range(b), a)]


def random_chain_ca(rng, max_factors: int = 3, max_radius: int = 2, name: str = "",
                    max_alphabet: int | None = None) -> LinearCA:
    """Lattice-linear CA on a product of small chains (order-preserving maps
    between chains are lattice homomorphisms)."""
    from .catalog import chain
    m = rng.randint(1, max_factors)
    sizes = [rng.choice((2, 2, 3)) for _ in range(m)]
    while max_alphabet and int(np.prod(sizes)) > max_alphabet:
        sizes[sizes.index(max(sizes))] -= 1
        sizes = [s for s in sizes if s > 1] or [2]
    m = len(sizes)
    total = int(np.prod(sizes))
    r = rng.randint(0, max_radius)
    while r and total ** (2 * (2 * r + 1)) > 1 << 22:  # keeps check_linear cheap
        r -= 1
    links = []
    for i in range(m):
        j = rng.randrange(m)
        k = rng.randrange(2 * r + 1)
        maps = monotone_maps(sizes[j], sizes[i])
        onto = [h for h in maps if len(set(h)) == sizes[i]]
        h = rng.choice(onto) if onto and rng.random() < 0.85 else rng.choice(maps)
        links.append((j, k, h))
    return product_rule([chain(s) for s in sizes], r, links, name)
