"""Affine maps on algebraic subshifts, their radii, and recoding into a
cellwise algebra when the radii are bounded."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .algebra import FiniteAlgebra, Signature, check_identities
from .errors import PreconditionError
from .evp import EVP, evp_blockmap
from .subshift import (BlockMap, Subshift, blockmap_equal_on, contains, decode, encode,
                       identity_map, image, language, periodic_words, product_shift)


# --------------------------------------------------------------------------
# algebras whose operations are block maps


def extend_to_point(X: Subshift, word: Sequence[int], start: int = 0) -> EVP:
    """Some eventually periodic point of ``X`` carrying ``word`` at ``start``."""
    word = tuple(word)
    out, inn = X.graph.out(), X.graph.inn()
    # find a path labelled by the word
    frontier = {v: [v] for v in range(X.graph.nvertices)}
    for a in word:
        nxt = {}
        for v, path in frontier.items():
            for b, u in out[v]:
                if b == a and u not in nxt:
                    nxt[u] = path + [u]
        frontier = nxt
        if not frontier:
            raise ValueError(f"{word} is not a word of the subshift")
    end, path = min(frontier.items())

    def walk(v, edges):
        seen, labels = {}, []
        while v not in seen:
            seen[v] = len(labels)
            b, v = min(edges[v])
            labels.append(b)
        i = seen[v]
        return labels[:i], labels[i:]

    rtail, rper = walk(end, out)
    ltail, lper = walk(path[0], inn)
    return EVP.make(lper[::-1], ltail[::-1] + list(word) + rtail, rper,
                    start - len(ltail))


@dataclass
class SubshiftAlgebra:
    """Operations of positive arity are block maps ``X^k -> X`` on the
    product presentation; nullary operations are points."""

    X: Subshift
    signature: Signature
    ops: dict[str, BlockMap]
    constants: dict[str, EVP] = field(default_factory=dict)
    name: str = ""

    @classmethod
    def cellwise(cls, X: Subshift, alg: FiniteAlgebra, name: str = "") -> "SubshiftAlgebra":
        ops, consts = {}, {}
        n = X.alphabet_size
        for op, k in alg.signature:
            table = alg.tables[op]
            if k == 0:
                consts[op] = EVP.constant(int(table))
                continue
            P = product_shift([X] * k)
            ops[op] = BlockMap.from_function(
                P, 0, lambda w, t=table, k=k: int(t[decode(w[0], [n] * k)]), n, X.labels, op)
        return cls(X, alg.signature, ops, consts, name or alg.name)

    def arity(self, op: str) -> int:
        return self.signature.arity(op)

    def local(self, op: str) -> Callable[..., int]:
        f = self.ops[op]
        sizes = [self.X.alphabet_size] * self.arity(op)

        def g(*windows):
            return f.table[tuple(encode(col, sizes) for col in zip(*windows))]
        return g

    def evaluate(self, op: str, points: Sequence[EVP]) -> EVP:
        if self.arity(op) == 0:
            return self.constants[op]
        return evp_blockmap(self.local(op), self.ops[op].radius, points)

    def closure_failures(self) -> dict[str, tuple[int, ...]]:
        """Operations whose image leaves ``X``, with a witness word."""
        bad = {}
        X = self.X
        for op, f in self.ops.items():
            if X.forbidden:
                hit = _sft_window_failure(X, f, self.arity(op))
                if hit is not None:
                    bad[op] = hit
                continue
            res = contains(X, image(f))
            if not res:
                bad[op] = res.witness
        return bad

    def cyclic_table(self, op: str, period: int) -> dict[tuple, tuple]:
        """The operation on the periodic points of the given period."""
        pts = periodic_words(self.X, period)
        f = self.ops[op]
        n = self.X.alphabet_size
        k = self.arity(op)
        out = {}
        for args in itertools.product(pts, repeat=k):
            word = tuple(encode(col, [n] * k) for col in zip(*args))
            out[args] = f.apply_cyclic(word)
        return out

    def periodic_algebra(self, period: int) -> FiniteAlgebra:
        """The finite algebra of periodic points of the given period."""
        pts = periodic_words(self.X, period)
        index = {p: i for i, p in enumerate(pts)}
        tables = {}
        for op, k in self.signature:
            if k == 0:
                c = self.constants[op]
                tables[op] = np.array(index[tuple(c[i] for i in range(period))])
                continue
            t = np.empty((len(pts),) * k, dtype=np.int64)
            for args, res in self.cyclic_table(op, period).items():
                t[tuple(index[a] for a in args)] = index[res]
            tables[op] = t
        labels = ["".join(self.X.labels[a] for a in p) for p in pts]
        return FiniteAlgebra(len(pts), self.signature, tables, labels)


def _sft_window_failure(X: Subshift, f: BlockMap, k: int, dense_limit: int = 1 << 22):
    """First forbidden word produced by ``f : X^k -> X`` on an SFT ``X``.

    Output windows as long as the longest forbidden word are enough.  The
    last argument is handled as a numpy batch over all of its windows.
    """
    n = X.alphabet_size
    m = max(len(w) for w in X.forbidden)
    L = m + 2 * f.radius
    width = 2 * f.radius + 1
    N = n ** k
    if N ** width > dense_limit or n ** m > dense_limit:
        res = contains(X, image(f))
        return None if res else res.witness
    table = np.full(N ** width, -1, dtype=np.int64)
    weights = N ** np.arange(width - 1, -1, -1)
    for w, v in f.table.items():
        table[int(np.dot(w, weights))] = v
    banned = np.zeros(n ** m, dtype=bool)
    for w in itertools.product(range(n), repeat=m):
        if any(w[i:j] in set(X.forbidden) for i in range(m) for j in range(i + 1, m + 1)):
            banned[encode(w, [n] * m)] = True
    words = np.array(language(X, L), dtype=np.int64).reshape(-1, L)
    mw = n ** np.arange(m - 1, -1, -1)
    for head in itertools.product(range(len(words)), repeat=k - 1):
        code = np.zeros_like(words)
        for h in head:
            code = code * n + words[h][None, :]
        code = code * n + words
        out = np.stack([table[code[:, i:i + width] @ weights] for i in range(m)], axis=1)
        hits = banned[out @ mw]
        if hits.any():
            return tuple(int(a) for a in out[np.argmax(hits)])
    return None


def slot_offsets(A: SubshiftAlgebra, op: str) -> list[set[int]]:
    """For each argument slot, the relative positions the operation reads."""
    f = A.ops[op]
    k = A.arity(op)
    n = A.X.alphabet_size
    r = f.radius
    keys = np.array(sorted(f.table), dtype=np.int64).reshape(len(f.table), 2 * r + 1)
    vals = np.array([f.table[tuple(w)] for w in keys.tolist()], dtype=np.int64)
    # digits[:, j, s] = symbol of slot s at relative position j - r
    digits = np.stack([keys // n ** (k - 1 - s) % n for s in range(k)], axis=2)
    flat = digits.reshape(len(keys), -1)
    weights = n ** np.arange(flat.shape[1] - 1, -1, -1)
    code = flat @ weights
    reads: list[set[int]] = [set() for _ in range(k)]
    for j in range(2 * r + 1):
        for s in range(k):
            col = j * k + s
            rest = code - flat[:, col] * weights[col]
            pairs = np.unique(np.stack([rest, vals], axis=1), axis=0)
            if len(pairs) != len(np.unique(rest)):
                reads[s].add(j - r)
    return reads


# --------------------------------------------------------------------------
# affine expressions


def format_affine(expr, labels: Sequence[str]) -> str:
    kind = expr[0]
    if kind == "xi":
        return "ξ"
    if kind == "const":
        p = expr[1]
        return p.format(labels) if isinstance(p, EVP) else "".join(labels[a] for a in p)
    _, op, slot, args = expr
    parts = [format_affine(a, labels) for a in args]
    return f"{op}(" + ", ".join(parts) + ")"


def affine_depth(expr) -> int:
    if expr[0] in ("xi", "const"):
        return 0
    return 1 + max(affine_depth(a) for a in expr[3])


def eval_affine(A: SubshiftAlgebra, expr, xi: EVP) -> EVP:
    kind = expr[0]
    if kind == "xi":
        return xi
    if kind == "const":
        return expr[1]
    _, op, _, args = expr
    return A.evaluate(op, [eval_affine(A, a, xi) for a in args])


def _windowed(expr, A: SubshiftAlgebra, r: int):
    """Replace constant windows (centred at the origin) by points of X."""
    kind = expr[0]
    if kind == "xi":
        return expr
    if kind == "const":
        w = expr[1]
        return expr if isinstance(w, EVP) else ("const", extend_to_point(A.X, w, -r))
    _, op, slot, args = expr
    rr = A.ops[op].radius
    return ("op", op, slot, [_windowed(a, A, rr) for a in args])


# --------------------------------------------------------------------------
# closure of centre tables


@dataclass
class RadiusWitness:
    """``t(x)_i != t(y)_i`` although ``x`` and ``y`` agree on ``[i-R, i+R]``,
    so the affine map ``expr`` has radius greater than ``R``."""

    expr: tuple
    x: EVP
    y: EVP
    position: int
    exceeds: int

    def verify(self, A: SubshiftAlgebra) -> bool:
        i, R = self.position, self.exceeds
        if self.x.window(i - R, i + R + 1) != self.y.window(i - R, i + R + 1):
            return False
        return eval_affine(A, self.expr, self.x)[i] != eval_affine(A, self.expr, self.y)[i]


@dataclass
class Member:
    radius: int
    table: dict[tuple[int, ...], int]
    expr: tuple

    def key(self):
        return self.radius, tuple(sorted(self.table.items()))

    def __call__(self, window):
        c = (len(window) - 1) // 2 - self.radius
        return self.table[tuple(window[c:len(window) - c])]


@dataclass
class AffineBlockClosure:
    working_radius: int
    members: list[Member]
    status: str  # stabilized | unbounded-up-to(R) | inconclusive
    witness: Member | RadiusWitness | None = None
    radius_limit: int = 0

    @property
    def stabilized(self) -> bool:
        return self.status == "stabilized"


def _reduce(X: Subshift, R: int, table: dict) -> tuple[int, dict]:
    f = BlockMap(X, R, table, X.alphabet_size).reduced()
    return f.radius, f.table


def _slot_actions(A: SubshiftAlgebra, op: str, slot: int, offset: int):
    """Distinct unary actions on the slot symbol at ``offset``, one per
    choice of the other arguments' windows, with a representative choice."""
    f = A.ops[op]
    k = A.arity(op)
    n = A.X.alphabet_size
    r = f.radius
    acts: dict[tuple, tuple] = {}
    groups: dict[tuple, dict[int, int]] = {}
    for w, out in sorted(f.table.items()):
        cols = [decode(c, [n] * k) for c in w]
        others = tuple(tuple(c[s] for c in cols) for s in range(k) if s != slot)
        groups.setdefault(others, {})[cols[r + offset][slot]] = out
    for others, act in groups.items():
        key = tuple(act.get(a, -1) for a in range(n))
        acts.setdefault(key, others)
    return [(dict(enumerate(key)), others) for key, others in acts.items()]


def affine_block_closure(A: SubshiftAlgebra, radius_limit: int = 6,
                         family: Callable[[int], RadiusWitness] | None = None,
                         max_members: int = 20000) -> AffineBlockClosure:
    """Close the centre tables of affine maps under the operations.

    Exact when every operation reads its variable argument at a single
    relative position: a translate of an affine map is again affine, so the
    table at that position is itself a member.  Otherwise the members are
    not closed under composition, and only an explicit ``family`` of
    candidate maps with radius witnesses can certify unboundedness.
    """
    X = A.X
    if any(f.radius > radius_limit for f in A.ops.values()):
        raise PreconditionError("an operation already exceeds the radius limit")
    bad = A.closure_failures()
    if bad:
        raise PreconditionError("operation leaves the subshift", bad)
    symbols = sorted(X.symbols())
    seeds = [Member(0, {(a,): a for a in symbols}, ("xi",))]
    seeds += [Member(0, {(a,): c for a in symbols}, ("const", (c,))) for c in symbols]

    reads = {op: slot_offsets(A, op) for op in A.ops}
    single = all(len(r) <= 1 for rs in reads.values() for r in rs)
    moves = []
    if single:
        for op, rs in reads.items():
            for slot, r in enumerate(rs):
                o = min(r, default=0)
                for act, others in _slot_actions(A, op, slot, o):
                    moves.append((op, slot, o, act, others))

    if not single:
        if family is None:
            return AffineBlockClosure(radius_limit, seeds, "inconclusive", None, radius_limit)
        k = 0
        while True:
            wit = family(k)
            if not wit.verify(A):
                raise PreconditionError(f"family member {k} has an invalid radius witness")
            if wit.exceeds >= radius_limit:
                return AffineBlockClosure(radius_limit, seeds, f"unbounded-up-to({radius_limit})",
                                          wit, radius_limit)
            k += 1

    members: dict = {}
    order: list[Member] = []
    for m in seeds:
        if m.key() not in members:
            members[m.key()] = m
            order.append(m)
    queue = deque(order)
    while queue:
        t = queue.popleft()
        for op, slot, o, act, others in moves:
            R = t.radius + abs(o)
            table = {}
            for w in language(X, 2 * R + 1):
                v = t.table[w[R + o - t.radius:R + o + t.radius + 1]]
                table[w] = act[v]
            R2, table = _reduce(X, R, table)
            args = [("const", c) for c in others]
            args.insert(slot, t.expr)
            m = Member(R2, table, ("op", op, slot, args))
            if m.key() in members:
                continue
            members[m.key()] = m
            order.append(m)
            if R2 > radius_limit:
                return AffineBlockClosure(radius_limit, order,
                                          f"unbounded-up-to({radius_limit})", m, radius_limit)
            if len(order) > max_members:
                return AffineBlockClosure(radius_limit, order, "inconclusive", None, radius_limit)
            queue.append(m)
    R = max(m.radius for m in order)
    return AffineBlockClosure(R, order, "stabilized", None, radius_limit)


def member_radius_witness(A: SubshiftAlgebra, m: Member) -> RadiusWitness | None:
    """Two points agreeing on ``[-(R-1), R-1]`` that the member separates at 0,
    where ``R`` is its table radius; built from the table and checked exactly."""
    R = m.radius
    if R == 0:
        return None
    expr = _windowed(m.expr, A, 0)
    words = sorted(m.table)
    for u, v in itertools.combinations(words, 2):
        if u[1:-1] == v[1:-1] and m.table[u] != m.table[v]:
            x, y = extend_to_point(A.X, u, -R), extend_to_point(A.X, v, -R)
            w = RadiusWitness(expr, x, y, 0, R - 1)
            if w.verify(A):
                return w
    return None


# --------------------------------------------------------------------------
# recoding


@dataclass
class RecodedSubshift:
    radius: int
    classes: list[tuple[tuple[int, ...], ...]]
    Y: Subshift
    phi: BlockMap
    phi_inv: BlockMap
    tables: dict[str, np.ndarray]
    algebra: FiniteAlgebra

    def class_labels(self, labels: Sequence[str]) -> list[str]:
        return ["{" + ",".join("".join(labels[a] for a in w) for w in c) + "}"
                for c in self.classes]


def recode(A: SubshiftAlgebra, closure: AffineBlockClosure | None = None,
           radius_limit: int = 6, variety: str | None = None) -> RecodedSubshift:
    closure = closure or affine_block_closure(A, radius_limit)
    if not closure.stabilized:
        raise PreconditionError(f"affine radii not bounded: {closure.status}", closure.witness)
    X = A.X
    r = closure.working_radius
    words = language(X, 2 * r + 1)
    sig: dict[tuple, list] = {}
    for w in words:
        sig.setdefault(tuple(m(w) for m in closure.members), []).append(w)
    classes = sorted(tuple(ws) for ws in sig.values())
    cls_of = {w: i for i, ws in enumerate(classes) for w in ws}
    for ws in classes:
        if len({w[r] for w in ws}) != 1:
            raise PreconditionError("equivalent windows with different centres", ws)
    labels = ["/".join("".join(X.labels[a] for a in w) for w in ws) for ws in classes]
    phi = BlockMap(X, r, cls_of, len(classes), labels, "phi")
    Y = image(phi, reduce=False)
    Y = Subshift(Y.alphabet_size, Y.graph, None, labels, "recoded")
    centre = {(i,): ws[0][r] for i, ws in enumerate(classes) if (i,) in set(language(Y, 1))}
    phi_inv = BlockMap(Y, 0, centre, X.alphabet_size, X.labels, "phi_inv")
    if not blockmap_equal_on(phi_inv.compose(phi), identity_map(X), X):
        raise PreconditionError("recoding is not injective")
    if not blockmap_equal_on(phi.compose(phi_inv), identity_map(Y), Y):
        raise PreconditionError("recoding is not onto its image")

    n = len(classes)
    ysyms = sorted(Y.symbols())
    tables: dict[str, np.ndarray] = {}
    for op, k in A.signature:
        if k == 0:
            c = A.constants[op]
            tables[op] = np.array(cls_of[c.window(-r, r + 1)])
            continue
        f = A.ops[op]
        rho = r + f.radius
        sizes_x = [X.alphabet_size] * k
        table = np.full((n,) * k, -1, dtype=np.int64)
        ywords = language(Y, 2 * rho + 1)
        for args in itertools.product(ywords, repeat=k):
            xs = [tuple(centre[(b,)] for b in a) for a in args]
            prod = tuple(encode(col, sizes_x) for col in zip(*xs))
            fx = f.apply_word(prod)
            out = cls_of[fx]
            key = tuple(a[rho] for a in args)
            if table[key] not in (-1, out):
                raise PreconditionError(f"induced {op} is not cellwise", args)
            table[key] = out
        tables[op] = table
    sub = [c for c in range(n) if c in ysyms]
    idx = {c: i for i, c in enumerate(sub)}
    alg_tables = {}
    for op, k in A.signature:
        t = tables[op]
        if k == 0:
            alg_tables[op] = np.array(idx[int(t)])
        else:
            alg_tables[op] = np.vectorize(lambda v: idx.get(int(v), -1))(
                t[np.ix_(*[sub] * k)])
    alg = FiniteAlgebra(len(sub), A.signature, alg_tables, [labels[c] for c in sub],
                        f"recoded {A.name}")
    if variety is not None:
        verdict = check_identities(alg, variety)
        if not verdict.passed:
            raise PreconditionError("recoded algebra breaks an identity", verdict.violations)
    return RecodedSubshift(r, classes, Y, phi, phi_inv, tables, alg)


# --------------------------------------------------------------------------
# counterexample fixtures


FOUR_LABELS = ("0-", "0+", "1-", "1+")  # index = 2*value + sign


def four_symbol_lattice() -> SubshiftAlgebra:
    """Lattice SFT on ``{0-, 0+, 1-, 1+}`` whose meet rewrites its output."""
    val = [0, 0, 1, 1]
    neg = [True, False, True, False]
    forb = [(0, 3)]
    for a, b, c in itertools.product((0, 1), repeat=3):
        if (a, b, c) != (0, 0, 0):
            for d in (0, 1):
                forb.append((2 * a, 2 * b, 2 * c + d))
    X = Subshift.from_forbidden(4, forb, FOUR_LABELS, "four-symbol")

    def meet_word(u, v):
        m = [2 * (val[a] & val[b]) + (a & 1 & b) for a, b in zip(u, v)]
        out = list(m)
        for i in range(len(m) - 2):
            if neg[m[i]] and neg[m[i + 1]]:
                for j in range(i, i + 3):
                    out[j] = m[j] & 1
        for i in range(1, len(m)):
            if m[i - 1] == 0 and m[i] == 3 and out[i] == 3:
                out[i] = 1
        return out

    P = product_shift([X, X])

    def meet(w):
        u, v = zip(*(decode(c, [4, 4]) for c in w))
        return meet_word(u, v)[2]

    def join(w):
        a, b = decode(w[0], [4, 4])
        return 2 * (val[a] | val[b]) + (a & 1 | b & 1)

    ops = {"meet": BlockMap.from_function(P, 2, meet, 4, FOUR_LABELS, "meet"),
           "join": BlockMap.from_function(P, 0, join, 4, FOUR_LABELS, "join")}
    return SubshiftAlgebra(X, Signature((("meet", 2), ("join", 2))), ops, {}, "four-symbol")


def four_symbol_family(k: int) -> RadiusWitness:
    """``t_k = (...((ξ ∧ z_0) ∨ z') ∧ z_1) ∨ z' ... ∧ z_k) ∨ z'`` with the
    points ``x`` and ``y`` that it separates at coordinate ``k``."""
    zp = EVP.constant(1)
    expr: tuple = ("xi",)
    for j in range(k + 1):
        z = EVP.make((3,), (2,), (3,), j)
        expr = ("op", "meet", 0, [expr, ("const", z)])
        expr = ("op", "join", 0, [expr, ("const", zp)])
    x = EVP.make((3,), (1,), (3,), 0)
    y = EVP.constant(3)
    return RadiusWitness(expr, x, y, k, k - 1)


def quasigroup_shift() -> SubshiftAlgebra:
    """``Z_2^Z`` with ``x·y = σx+σy``, ``x/y = σ⁻¹x+y``, ``x\\y = x+σ⁻¹y``."""
    X = Subshift.full(2, None, "full2")
    P = product_shift([X, X])

    def rule(dx, dy):
        def f(w):
            return (decode(w[1 + dx], [2, 2])[0] + decode(w[1 + dy], [2, 2])[1]) % 2
        return f

    ops = {"mul": BlockMap.from_function(P, 1, rule(1, 1), 2, X.labels, "mul"),
           "rdiv": BlockMap.from_function(P, 1, rule(-1, 0), 2, X.labels, "rdiv"),
           "ldiv": BlockMap.from_function(P, 1, rule(0, -1), 2, X.labels, "ldiv")}
    sig = Signature((("mul", 2), ("rdiv", 2), ("ldiv", 2)))
    return SubshiftAlgebra(X, sig, ops, {}, "shifted quasigroup")


BOT = 3
GROUPOID_LABELS = ("0", "1", "2", "⊥")
GROUPOID_TABLE = np.array([[0, 0, 0, BOT],
                           [1, 2, 1, BOT],
                           [2, 2, 2, BOT],
                           [BOT, BOT, BOT, BOT]])


def groupoid_shift() -> SubshiftAlgebra:
    X = Subshift.from_forbidden(4, [(1, 0), (1, 1), (2, 0), (2, 1)], GROUPOID_LABELS,
                                "groupoid")
    alg = FiniteAlgebra(4, (("mul", 2),), {"mul": GROUPOID_TABLE}, GROUPOID_LABELS, "G⊥")
    return SubshiftAlgebra.cellwise(X, alg, "groupoid")


def groupoid_point(i: int) -> EVP:
    """The point without ⊥ whose only 1 sits at ``i``: ``^∞0 1 2^∞``."""
    return EVP.make((0,), (1,), (2,), i)


def groupoid_translation(k: int) -> tuple:
    expr: tuple = ("xi",)
    for i in range(1, k + 1):
        expr = ("op", "mul", 0, [expr, ("const", groupoid_point(i))])
    return expr


def min_depth_search(table: np.ndarray, X: Subshift, targets: Sequence[tuple[int, ...]],
                     max_depth: int) -> tuple[int, tuple] | None:
    """Least depth of a chain ``ξ ↦ f(…f(ξ, c¹)…, c^d)`` (each level with
    ``ξ`` in either slot) whose action at consecutive positions equals the
    given unary ``targets``, the constants forming words of ``X``.

    Returns ``(depth, (slots, constant words))`` or ``None``.
    """
    n = table.shape[0]
    L = len(targets)
    dfa = X.dfa
    for d in range(max_depth + 1):
        for slots in itertools.product((0, 1), repeat=d):
            # DP over positions; state = DFA state of each level's word
            layer: dict[tuple, tuple] = {tuple(dfa.start for _ in range(d)): ()}
            for j in range(L):
                nxt: dict[tuple, tuple] = {}
                for state, hist in layer.items():
                    for cs in itertools.product(range(n), repeat=d):
                        st = tuple(dfa.step(s, c) for s, c in zip(state, cs))
                        if not all(st) or st in nxt:
                            continue
                        f = list(range(n))
                        for slot, c in zip(slots, cs):
                            f = [int(table[v, c]) if slot == 0 else int(table[c, v])
                                 for v in f]
                        if tuple(f) == tuple(targets[j]):
                            nxt[st] = hist + (cs,)
                layer = nxt
                if not layer:
                    break
            if layer:
                hist = next(iter(layer.values()))
                return d, (slots, tuple(zip(*hist)) if d else ())
    return None


@dataclass
class GroupoidReport:
    k: int
    images_without_one: bool
    fixed_outside: bool
    min_depth: int | None
    realized_at: int | None
    details: dict


def groupoid_depth_fixture(k_max: int = 4) -> list[GroupoidReport]:
    A = groupoid_shift()
    ident = tuple(range(4))
    h = tuple(int(GROUPOID_TABLE[a, 1]) for a in range(4))
    out = []
    for k in range(1, k_max + 1):
        t = groupoid_translation(k)
        inside = all(1 not in eval_affine(A, t, groupoid_point(i)).window(-k - 4, 2 * k + 4)
                     and 1 not in _periodic_parts(eval_affine(A, t, groupoid_point(i)))
                     for i in range(1, k + 1))
        outside = all(eval_affine(A, t, groupoid_point(i)) == groupoid_point(i)
                      for i in list(range(-3, 1)) + list(range(k + 1, k + 5)))
        targets = [ident] + [h] * k + [ident]
        below = min_depth_search(GROUPOID_TABLE, A.X, targets, k - 1)
        at = min_depth_search(GROUPOID_TABLE, A.X, targets, k)
        out.append(GroupoidReport(k, inside, outside, None if below is None else below[0],
                                  None if at is None else at[0], {"targets": targets}))
    return out


def _periodic_parts(p: EVP) -> tuple[int, ...]:
    return p.left_period + p.right_period
