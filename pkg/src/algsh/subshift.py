"""One-dimensional subshifts given by forbidden words or labelled graphs.

Every presentation is held internally as a trimmed labelled graph: vertices
``0..V-1`` and edges ``(u, v, symbol)``.  A word occurs in the subshift iff it
labels a path, since trimming leaves only vertices on bi-infinite paths.
"""

from __future__ import annotations

import itertools
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

Word = tuple[int, ...]

MAX_STATES = int(os.environ.get("ALGSH_MAX_STATES", "10000"))


class StateLimitError(RuntimeError):
    """An automaton construction exceeded ``ALGSH_MAX_STATES``."""


# --------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class Graph:
    nvertices: int
    edges: tuple[tuple[int, int, int], ...]

    def out(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.nvertices)]
        for u, v, a in self.edges:
            adj[u].append((a, v))
        return adj

    def inn(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.nvertices)]
        for u, v, a in self.edges:
            adj[v].append((a, u))
        return adj


def trim(nvertices: int, edges: Iterable[tuple[int, int, int]]) -> Graph:
    """Drop vertices that do not lie on a bi-infinite path, then renumber."""
    edges = sorted(set(edges))
    alive = set(range(nvertices))
    while True:
        has_out = {u for u, v, _ in edges if v in alive}
        has_in = {v for u, v, _ in edges if u in alive}
        keep = alive & has_out & has_in
        edges = [e for e in edges if e[0] in keep and e[1] in keep]
        if keep == alive:
            break
        alive = keep
    index = {v: i for i, v in enumerate(sorted(alive))}
    return Graph(len(index), tuple(sorted((index[u], index[v], a) for u, v, a in edges)))


# --------------------------------------------------------------------------
# subshifts


class Subshift:
    """A sofic subshift over ``{0..alphabet_size-1}``.

    ``forbidden`` is kept when the shift was built from forbidden words so
    it can be written back out; the graph is authoritative either way.
    """

    def __init__(self, alphabet_size: int, graph: Graph,
                 forbidden: Sequence[Word] | None = None,
                 labels: Sequence[str] | None = None, name: str = ""):
        self.alphabet_size = alphabet_size
        self.graph = graph
        self.forbidden = None if forbidden is None else tuple(tuple(w) for w in forbidden)
        self.labels = tuple(labels) if labels is not None else tuple(
            str(i) for i in range(alphabet_size))
        self.name = name
        self._dfa: _Determinizer | None = None

    def __repr__(self):
        kind = "sft" if self.forbidden is not None else "sofic"
        return (f"Subshift({self.name or '?'}, {kind}, |A|={self.alphabet_size}, "
                f"V={self.graph.nvertices}, E={len(self.graph.edges)})")

    @property
    def kind(self) -> str:
        return "forbidden" if self.forbidden is not None else "graph"

    @classmethod
    def full(cls, n: int, labels=None, name="") -> "Subshift":
        return cls.from_forbidden(n, [], labels, name or f"full{n}")

    @classmethod
    def from_forbidden(cls, n: int, words: Iterable[Sequence[int]],
                       labels=None, name="") -> "Subshift":
        words = sorted({tuple(w) for w in words})
        if any(len(w) == 0 for w in words):
            raise ValueError("forbidden words must be nonempty")
        if any(a < 0 or a >= n for w in words for a in w):
            raise ValueError("forbidden word uses a symbol outside the alphabet")
        m = max((len(w) for w in words), default=1) - 1
        bad = set(words)

        def ok(u: Word) -> bool:
            return not any(u[i:j] in bad for i in range(len(u))
                           for j in range(i + 1, len(u) + 1))

        if m == 0:
            edges = [(0, 0, a) for a in range(n) if (a,) not in bad]
            g = trim(1, edges)
        else:
            states = [u for u in itertools.product(range(n), repeat=m) if ok(u)]
            if len(states) > MAX_STATES:
                raise StateLimitError(f"{len(states)} de Bruijn states")
            index = {u: i for i, u in enumerate(states)}
            edges = []
            for u in states:
                for a in range(n):
                    w = u + (a,)
                    v = w[1:]
                    if v in index and ok(w):
                        edges.append((index[u], index[v], a))
            g = trim(len(states), edges)
        return cls(n, g, words, labels, name)

    @classmethod
    def from_graph(cls, n: int, nvertices: int, edges: Iterable[tuple[int, int, int]],
                   labels=None, name="") -> "Subshift":
        edges = list(edges)
        if any(a < 0 or a >= n for _, _, a in edges):
            raise ValueError("edge label outside the alphabet")
        return cls(n, trim(nvertices, edges), None, labels, name)

    def with_labels(self, labels: Sequence[str], name: str | None = None) -> "Subshift":
        return Subshift(self.alphabet_size, self.graph, self.forbidden, labels,
                        self.name if name is None else name)

    def is_empty(self) -> bool:
        return self.graph.nvertices == 0

    def symbols(self) -> set[int]:
        return {a for _, _, a in self.graph.edges}

    # automaton view -------------------------------------------------------

    @property
    def dfa(self) -> "_Determinizer":
        if self._dfa is None:
            self._dfa = _Determinizer(self.graph, self.alphabet_size)
        return self._dfa

    def accepts(self, word: Sequence[int]) -> bool:
        return bool(self.dfa.run(word))

    def contains_periodic(self, word: Sequence[int]) -> bool:
        """Whether the periodic point ``word^∞`` lies in the shift."""
        out = self.graph.out()
        for start in range(self.graph.nvertices):
            cur = {start}
            for a in word:
                cur = {v for u in cur for b, v in out[u] if b == a}
                if not cur:
                    break
            if start in cur:
                return True
        return False


class _Determinizer:
    """Lazy subset construction; the start state is the set of all vertices."""

    def __init__(self, graph: Graph, n: int):
        self.n = n
        self.out = graph.out()
        self.start = frozenset(range(graph.nvertices))
        self.cache: dict[tuple[frozenset, int], frozenset] = {}

    def step(self, state: frozenset, a: int) -> frozenset:
        key = (state, a)
        nxt = self.cache.get(key)
        if nxt is None:
            nxt = frozenset(v for u in state for b, v in self.out[u] if b == a)
            self.cache[key] = nxt
            if len(self.cache) > MAX_STATES * max(self.n, 1):
                raise StateLimitError("subset construction exceeded the state cap")
        return nxt

    def run(self, word: Sequence[int], state: frozenset | None = None) -> frozenset:
        state = self.start if state is None else state
        for a in word:
            if not state:
                break
            state = self.step(state, a)
        return state

    def reachable(self) -> list[frozenset]:
        seen = {self.start}
        order = [self.start]
        for s in order:
            for a in range(self.n):
                t = self.step(s, a)
                if t and t not in seen:
                    seen.add(t)
                    order.append(t)
                    if len(order) > MAX_STATES:
                        raise StateLimitError("too many subset states")
        return order


# --------------------------------------------------------------------------
# languages and containment


def language(X: Subshift, n: int) -> list[Word]:
    """All words of length ``n`` occurring in ``X``, in lexicographic order."""
    if n < 0:
        raise ValueError("negative length")
    if X.is_empty():
        return []
    out: list[Word] = []
    dfa = X.dfa

    def rec(state, prefix):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for a in range(X.alphabet_size):
            t = dfa.step(state, a)
            if t:
                prefix.append(a)
                rec(t, prefix)
                prefix.pop()

    rec(dfa.start, [])
    return out


@dataclass
class Containment:
    holds: bool
    witness: Word | None = None

    def __bool__(self):
        return self.holds


def contains(A: Subshift, B: Subshift) -> Containment:
    """Decide ``B ⊆ A``; a failure carries the lexicographically least shortest
    word of ``B`` missing from ``A``."""
    if A.alphabet_size != B.alphabet_size:
        raise ValueError("alphabets differ")
    if B.is_empty():
        return Containment(True)
    if A.is_empty():
        return Containment(False, ())
    dfa = A.dfa
    bout = B.graph.out()
    start = [(b, dfa.start) for b in range(B.graph.nvertices)]
    index: dict = {}
    pairs: list = []
    for p in start:
        index[p] = len(pairs)
        pairs.append(p)
    succ: list[list[tuple[int, int]]] = []
    bad: list[list[int]] = []
    i = 0
    while i < len(pairs):
        b, s = pairs[i]
        nxt, bd = [], []
        for a, b2 in bout[b]:
            t = dfa.step(s, a)
            if not t:
                bd.append(a)
                continue
            q = (b2, t)
            j = index.get(q)
            if j is None:
                j = index[q] = len(pairs)
                pairs.append(q)
                if len(pairs) > MAX_STATES * 10:
                    raise StateLimitError("containment product too large")
            nxt.append((a, j))
        succ.append(nxt)
        bad.append(bd)
        i += 1
    # distance to a violation, by reverse BFS
    INF = float("inf")
    dist = [INF] * len(pairs)
    pred: list[list[int]] = [[] for _ in pairs]
    for j, nxt in enumerate(succ):
        for _, k in nxt:
            pred[k].append(j)
    queue = deque()
    for j in range(len(pairs)):
        if bad[j]:
            dist[j] = 1
            queue.append(j)
    while queue:
        k = queue.popleft()
        for j in pred[k]:
            if dist[j] == INF:
                dist[j] = dist[k] + 1
                queue.append(j)
    nstart = len(start)
    best = min(dist[:nstart])
    if best == INF:
        return Containment(True)
    L = int(best)
    current = {j for j in range(nstart) if dist[j] <= L}
    word: list[int] = []
    for r in range(L, 0, -1):
        if r == 1:
            word.append(min(a for j in current for a in bad[j]))
            break
        options: dict[int, set[int]] = {}
        for j in current:
            for a, k in succ[j]:
                if dist[k] <= r - 1:
                    options.setdefault(a, set()).add(k)
        a = min(options)
        word.append(a)
        current = options[a]
    return Containment(False, tuple(word))


def equal(A: Subshift, B: Subshift) -> bool:
    return bool(contains(A, B)) and bool(contains(B, A))


def intersection(A: Subshift, B: Subshift) -> Subshift:
    edges = []
    nb = B.graph.nvertices
    bout = B.graph.out()
    for u, v, a in A.graph.edges:
        for u2 in range(nb):
            for b, v2 in bout[u2]:
                if a == b:
                    edges.append((u * nb + u2, v * nb + v2, a))
    return Subshift.from_graph(A.alphabet_size, A.graph.nvertices * nb, edges, A.labels)


def product_shift(shifts: Sequence[Subshift]) -> Subshift:
    """Cartesian product; a tuple of symbols is encoded in mixed radix,
    first factor most significant."""
    sizes = [X.alphabet_size for X in shifts]
    nv = [X.graph.nvertices for X in shifts]
    total = 1
    for v in nv:
        total *= v
    if total > MAX_STATES:
        raise StateLimitError(f"product presentation with {total} vertices")
    edges = []
    for combo in itertools.product(*[X.graph.edges for X in shifts]):
        u = v = sym = 0
        for (eu, ev, a), n, s in zip(combo, nv, sizes):
            u = u * n + eu
            v = v * n + ev
            sym = sym * s + a
        edges.append((u, v, sym))
    n = 1
    for s in sizes:
        n *= s
    labels = ["(" + ",".join(X.labels[a] for X, a in zip(shifts, decode(c, sizes))) + ")"
              for c in range(n)]
    return Subshift.from_graph(n, total, edges, labels)


def encode(symbols: Sequence[int], sizes: Sequence[int]) -> int:
    c = 0
    for a, s in zip(symbols, sizes):
        c = c * s + a
    return c


def decode(code: int, sizes: Sequence[int]) -> tuple[int, ...]:
    out = []
    for s in reversed(sizes):
        out.append(code % s)
        code //= s
    return tuple(reversed(out))


def minimize(X: Subshift) -> Subshift:
    """Equivalent presentation from the minimal automaton of the language."""
    if X.is_empty():
        return X
    dfa = X.dfa
    states = dfa.reachable()
    index = {s: i for i, s in enumerate(states)}
    n = X.alphabet_size
    sink = len(states)
    trans = [[index.get(dfa.step(s, a), sink) if dfa.step(s, a) else sink
              for a in range(n)] for s in states]
    trans.append([sink] * n)
    block = [0] * len(states) + [1]
    while True:
        sig = [(block[i],) + tuple(block[t] for t in trans[i]) for i in range(len(trans))]
        ids: dict = {}
        new = [ids.setdefault(s, len(ids)) for s in sig]
        if len(ids) == len(set(block)):
            break
        block = new
    edges = {(block[i], block[trans[i][a]], a)
             for i in range(len(states)) for a in range(n) if trans[i][a] != sink}
    return Subshift(n, trim(max(block) + 1, edges), None, X.labels, X.name)


def periodic_words(X: Subshift, p: int) -> list[Word]:
    """Words ``w`` of length ``p`` with ``w^∞ ∈ X`` (each rotation listed)."""
    out = X.graph.out()
    found = set()
    for start in range(X.graph.nvertices):
        stack = [(start, ())]
        while stack:
            v, w = stack.pop()
            if len(w) == p:
                if v == start:
                    found.add(w)
                continue
            for a, u in out[v]:
                stack.append((u, w + (a,)))
    return sorted(found)


# --------------------------------------------------------------------------
# block maps


class BlockMap:
    """A sliding block code of radius ``radius`` given by its local table.

    ``table`` maps each window of ``2*radius+1`` symbols of the domain to a
    codomain symbol.
    """

    def __init__(self, domain: Subshift, radius: int, table: dict[Word, int],
                 codomain_size: int, codomain_labels: Sequence[str] | None = None,
                 name: str = ""):
        self.domain = domain
        self.radius = radius
        self.table = {tuple(k): int(v) for k, v in table.items()}
        self.codomain_size = codomain_size
        self.codomain_labels = tuple(codomain_labels) if codomain_labels is not None else tuple(
            str(i) for i in range(codomain_size))
        self.name = name
        for k, v in self.table.items():
            if len(k) != 2 * radius + 1:
                raise ValueError("window length does not match the radius")
            if not 0 <= v < codomain_size:
                raise ValueError("table value outside the codomain")

    def __repr__(self):
        return f"BlockMap({self.name or '?'}, r={self.radius}, |table|={len(self.table)})"

    @classmethod
    def from_function(cls, domain: Subshift, radius: int, fn: Callable[[Word], int],
                      codomain_size: int, codomain_labels=None, name="") -> "BlockMap":
        table = {w: fn(w) for w in language(domain, 2 * radius + 1)}
        return cls(domain, radius, table, codomain_size, codomain_labels, name)

    def __call__(self, window: Sequence[int]) -> int:
        return self.table[tuple(window)]

    def apply_word(self, word: Sequence[int]) -> Word:
        w = tuple(word)
        d = 2 * self.radius + 1
        return tuple(self.table[w[i:i + d]] for i in range(len(w) - d + 1))

    def apply_cyclic(self, word: Sequence[int]) -> Word:
        """Image of the periodic point ``word^∞`` (one period)."""
        w = tuple(word)
        p, r = len(w), self.radius
        ext = tuple(w[i % p] for i in range(-r, p + r))
        return self.apply_word(ext)

    def padded(self, radius: int) -> "BlockMap":
        if radius < self.radius:
            raise ValueError("cannot pad to a smaller radius")
        cut = radius - self.radius
        table = {w: self.table[w[cut:len(w) - cut]]
                 for w in language(self.domain, 2 * radius + 1)}
        return BlockMap(self.domain, radius, table, self.codomain_size,
                        self.codomain_labels, self.name)

    def reduced(self) -> "BlockMap":
        """The same map at the least radius its table actually needs."""
        r = self.radius
        while r > 0:
            cut = self.radius - (r - 1)
            inner: dict[Word, int] = {}
            if any(inner.setdefault(w[cut:len(w) - cut], v) != v for w, v in self.table.items()):
                break
            r -= 1
        if r == self.radius:
            return self
        cut = self.radius - r
        table = {w[cut:len(w) - cut]: v for w, v in self.table.items()}
        return BlockMap(self.domain, r, table, self.codomain_size, self.codomain_labels,
                        self.name)

    def compose(self, inner: "BlockMap") -> "BlockMap":
        """``self ∘ inner``, with ``self.domain`` expected to contain the image of inner."""
        r = self.radius + inner.radius
        table = {}
        for w in language(inner.domain, 2 * r + 1):
            table[w] = self.table[inner.apply_word(w)]
        return BlockMap(inner.domain, r, table, self.codomain_size, self.codomain_labels)


def identity_map(X: Subshift) -> BlockMap:
    return BlockMap(X, 0, {(a,): a for a in range(X.alphabet_size) if (a,) in
                           set(language(X, 1))}, X.alphabet_size, X.labels, "id")


def shift_map(X: Subshift, k: int = 1) -> BlockMap:
    """``σ^k``: the output at ``i`` is the input at ``i + k``."""
    r = abs(k)
    return BlockMap.from_function(X, r, lambda w: w[r + k], X.alphabet_size, X.labels,
                                  f"shift^{k}")


def image(f: BlockMap, X: Subshift | None = None, reduce: bool = True) -> Subshift:
    """Presentation of ``f(X)`` (``X`` defaults to the map's domain)."""
    X = f.domain if X is None else X
    r = f.radius
    out = X.graph.out()
    states = {(v, ()) for v in range(X.graph.nvertices)}
    for _ in range(2 * r):
        states = {(u, w + (a,)) for v, w in states for a, u in out[v]}
        if len(states) > MAX_STATES:
            raise StateLimitError("higher block presentation too large")
    index = {s: i for i, s in enumerate(sorted(states))}
    edges = []
    for (v, w), i in index.items():
        for a, u in out[v]:
            window = w + (a,)
            j = index[(u, window[1:])]
            edges.append((i, j, f.table[window]))
    Y = Subshift.from_graph(f.codomain_size, len(index), edges, f.codomain_labels)
    return minimize(Y) if reduce else Y


@dataclass
class MapComparison:
    equal: bool
    witness: Word | None = None

    def __bool__(self):
        return self.equal


def blockmap_equal_on(f: BlockMap, g: BlockMap, X: Subshift | None = None) -> MapComparison:
    """Compare two block maps on every window of ``X`` of the larger radius."""
    if f.codomain_size != g.codomain_size:
        raise ValueError("codomains differ")
    X = f.domain if X is None else X
    r = max(f.radius, g.radius)
    cf, cg = r - f.radius, r - g.radius
    for w in language(X, 2 * r + 1):
        if f.table[w[cf:len(w) - cf]] != g.table[w[cg:len(w) - cg]]:
            return MapComparison(False, w)
    return MapComparison(True)


def cellwise_map(X: Subshift, fn: Callable[[int], int], codomain_size: int,
                 labels=None, name="") -> BlockMap:
    return BlockMap.from_function(X, 0, lambda w: fn(w[0]), codomain_size, labels, name)


def power_shift(X: Subshift, k: int) -> Subshift:
    """``X × ... × X`` (``k`` copies)."""
    return product_shift([X] * k)
