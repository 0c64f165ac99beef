"""Boolean subshifts: atom projections, simplicity certificates and the
normal form as a full shift times a finite shift."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import FiniteAlgebra, SignatureError, check_identities, lattice_leq, role_tables
from .errors import InternalConsistencyError, PreconditionError
from .lattice import BinaryClass, check_full_alphabet, classify_binary
from .subshift import (BlockMap, Subshift, blockmap_equal_on, cellwise_map, contains, decode,
                       encode, identity_map, image, product_shift)


@dataclass(frozen=True)
class PowerSetView:
    """Identification of a Boolean algebra with the subsets of its atoms.

    ``code[a]`` is the bitmask (bit ``j`` for ``atoms[j]``) of element ``a``.
    """

    algebra: FiniteAlgebra
    atoms: tuple[int, ...]
    code: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.atoms)

    def element(self, mask: int) -> int:
        return self.code.index(mask)

    def atom_label(self, j: int) -> str:
        return self.algebra.labels[self.atoms[j]]


def power_set_view(alg: FiniteAlgebra) -> PowerSetView:
    try:
        verdict = check_identities(alg, "boolean")
    except SignatureError as exc:
        raise SignatureError(f"not a Boolean algebra: {exc}") from None
    if not verdict.passed:
        raise SignatureError(f"not a Boolean algebra: fails {verdict.violations[0][0]}")
    leq = lattice_leq(alg)
    zero = int(role_tables(alg, "boolean")["zero"])
    nonzero = [a for a in range(alg.size) if a != zero]
    atoms = tuple(a for a in nonzero if not any(b != a and leq[b, a] for b in nonzero))
    if alg.size != 1 << len(atoms):
        raise SignatureError("carrier is not the power set of its atoms")
    code = tuple(sum(1 << j for j, t in enumerate(atoms) if leq[t, a]) for a in range(alg.size))
    return PowerSetView(alg, atoms, code)


def atom_projection(X: Subshift, alg: FiniteAlgebra, t: int, view: PowerSetView | None = None
                    ) -> BlockMap:
    """Radius-0 map onto ``{0,1}``: does atom number ``t`` belong to ``x_i``."""
    view = view or power_set_view(alg)
    return cellwise_map(X, lambda a: view.code[a] >> t & 1, 2, ("0", "1"),
                        f"pi_{view.atom_label(t)}")


def tuple_projection(X: Subshift, alg: FiniteAlgebra, R: Sequence[int],
                     view: PowerSetView | None = None) -> BlockMap:
    """``π_R`` with the bit of ``R[0]`` most significant (matches ``product_shift``)."""
    view = view or power_set_view(alg)
    sizes = [2] * len(R)
    labels = ["".join(str(b) for b in decode(c, sizes)) for c in range(1 << len(R))]
    return cellwise_map(X, lambda a: encode([view.code[a] >> t & 1 for t in R], sizes),
                        1 << len(R), labels, "pi_R")


def _shifted_projection(X: Subshift, view: PowerSetView, s: int, k: int) -> BlockMap:
    """``σ^k ∘ π_s``: the output at ``i`` is the ``s`` bit at ``i + k``."""
    r = abs(k)
    return BlockMap.from_function(X, r, lambda w: view.code[w[r + k]] >> s & 1, 2, ("0", "1"))


def boolean_closure_failure(X: Subshift, alg: FiniteAlgebra):
    """First Boolean operation whose cellwise image leaves ``X``, with the bad word."""
    from .lattice import cellwise_image
    ops = role_tables(alg, "boolean")
    checks = [("meet", ops["meet"], 2), ("join", ops["join"], 2),
              ("complement", ops["complement"], 1)]
    for name, table, arity in checks:
        res = contains(X, cellwise_image(X, np.asarray(table), arity))
        if not res:
            return name, res.witness
    for name in ("zero", "one"):
        c = int(ops[name])
        if not X.contains_periodic((c,)):
            return name, (c,)
    return None


# --------------------------------------------------------------------------
# simplicity


@dataclass
class SimplicityCertificate:
    view: PowerSetView
    representatives: tuple[int, ...] = ()
    classes: dict[int, BinaryClass] = field(default_factory=dict)
    links: dict[int, tuple[int, int]] = field(default_factory=dict)
    independent: bool = False
    failure: tuple[str, object] | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    def class_of(self, t: int) -> BinaryClass:
        return self.classes[self.links[t][0]]

    def summary(self) -> dict:
        lab = self.view.atom_label
        return {
            "representatives": [lab(r) for r in self.representatives],
            "classes": {lab(t): str(c) for t, c in sorted(self.classes.items())},
            "links": {lab(t): [lab(r), k] for t, (r, k) in sorted(self.links.items())},
            "independent": self.independent,
            "failure": None if self.failure is None else [self.failure[0], repr(self.failure[1])],
        }


def shift_links(Y: Subshift) -> list[int]:
    """All ``k`` with ``high(y_i) = low(y_{i+k})`` on every point of ``Y``,
    where ``Y`` is over four symbols ``2*high + low``, in the order
    ``0, 1, -1, 2, -2, ...``.

    A violation at offset ``k >= 1`` is a pair of edges whose bits differ
    with a path of length ``k - 1`` between them, so only the sequence of
    reachability matrices matters; it is eventually periodic and the scan
    stops at its first repeat.
    """
    g = Y.graph
    n = g.nvertices
    src = np.array([u for u, _, _ in g.edges], dtype=int)
    dst = np.array([v for _, v, _ in g.edges], dtype=int)
    hi = np.array([a >> 1 for _, _, a in g.edges], dtype=bool)
    lo = np.array([a & 1 for _, _, a in g.edges], dtype=bool)
    adj = np.zeros((n, n), dtype=bool)
    adj[src, dst] = True
    # first edge at i, second at i+k: connected by a path of length k-1
    fwd_bad = hi[:, None] != lo[None, :]  # high first, low later
    bwd_bad = lo[:, None] != hi[None, :]  # low first, high later
    pos, neg = [], []
    zero_ok = not (hi != lo).any()
    reach = np.eye(n, dtype=bool)
    seen: dict[bytes, int] = {}
    k = 1
    while True:
        key = reach.tobytes()
        if key in seen:
            break
        seen[key] = k
        link = reach[dst][:, src]  # link[e, f]: target of e reaches source of f
        if not (fwd_bad & link).any():
            pos.append(k)
        if not (bwd_bad & link).any():
            neg.append(-k)
        reach = (reach.astype(int) @ adj.astype(int)) > 0
        k += 1
    out = [0] if zero_ok else []
    for k in range(1, max([0] + pos + [-m for m in neg]) + 1):
        if k in pos:
            out.append(k)
        if -k in neg:
            out.append(-k)
    return out


def simplicity_check(X: Subshift, alg: FiniteAlgebra) -> SimplicityCertificate:
    view = power_set_view(alg)
    check_full_alphabet(X, alg)
    bad = boolean_closure_failure(X, alg)
    if bad is not None:
        raise PreconditionError(f"not closed under cellwise {bad[0]}", bad[1])
    cert = SimplicityCertificate(view)
    proj = [atom_projection(X, alg, t, view) for t in range(view.k)]
    shadows = [image(p) for p in proj]

    # condition 1: each atom projection is full or periodic
    kinds = {}
    for t, Y in enumerate(shadows):
        try:
            c = classify_binary(Y)
        except PreconditionError as exc:
            cert.failure = ("atom class", (view.atom_label(t), str(exc)))
            return cert
        if c.tag not in ("full", "periodic"):
            cert.failure = ("atom class", (view.atom_label(t), str(c)))
            return cert
        kinds[t] = c

    # condition 2: atoms related by a shift
    reps: list[int] = []
    for t in range(view.k):
        for r in reps:
            if kinds[r] != kinds[t]:
                continue
            pair = image(tuple_projection(X, alg, [t, r], view))
            k = next(iter(shift_links(pair)), None)
            if k is not None:
                check = blockmap_equal_on(proj[t], _shifted_projection(X, view, r, k), X)
                if not check:
                    raise InternalConsistencyError(f"offset {k} fails on {check.witness}")
                cert.links[t] = (r, k)
                break
        else:
            reps.append(t)
            cert.links[t] = (t, 0)
            cert.classes[t] = kinds[t]
    cert.representatives = tuple(reps)

    # condition 3: the representatives are independent
    joint = image(tuple_projection(X, alg, reps, view))
    prod = product_shift([shadows[r] for r in reps])
    res = contains(joint, prod)
    if not res:
        cert.failure = ("independence", res.witness)
        return cert
    cert.independent = True
    return cert


# --------------------------------------------------------------------------
# normal form


@dataclass
class NormalForm:
    full_atoms: tuple[int, ...]
    periodic_atoms: tuple[int, ...]
    full_alphabet_size: int
    finite_part: Subshift
    target: Subshift
    phi: BlockMap
    phi_inv: BlockMap
    verified: bool

    def split(self, symbol: int) -> tuple[int, int]:
        """Target symbol -> (full-shift symbol, finite-shift symbol)."""
        p = self.finite_part.alphabet_size
        return symbol // p, symbol % p


def _boolean_table(nbits: int):
    n = 1 << nbits
    a = np.arange(n)
    return {"meet": a[:, None] & a[None, :], "join": a[:, None] | a[None, :],
            "complement": (n - 1) ^ a}


def _commutes(f: BlockMap, src_ops, dst_ops) -> tuple[bool, object]:
    """Does ``f`` commute with the Boolean operations on every pair of windows?

    Over a shift closed under the cellwise operations this is the same as
    commuting on all words of length ``2r+1`` or more.
    """
    windows = np.array(sorted(f.table), dtype=np.int64)
    n = f.domain.alphabet_size
    width = windows.shape[1]
    weights = n ** np.arange(width - 1, -1, -1)
    lookup = np.full(n ** width, -1, dtype=np.int64)
    lookup[windows @ weights] = [f.table[tuple(w)] for w in windows.tolist()]
    out = lookup[windows @ weights]
    comp_s, comp_d = np.asarray(src_ops["complement"]), np.asarray(dst_ops["complement"])
    lhs = lookup[comp_s[windows] @ weights]
    bad = (lhs >= 0) & (lhs != comp_d[out])
    if bad.any():
        return False, ("complement", tuple(windows[np.argmax(bad)]))
    for name in ("meet", "join"):
        ts, td = np.asarray(src_ops[name]), np.asarray(dst_ops[name])
        for i, u in enumerate(windows):
            lhs = lookup[ts[u[None, :], windows] @ weights]
            bad = (lhs >= 0) & (lhs != td[out[i], out])
            if bad.any():
                return False, (name, tuple(u), tuple(windows[np.argmax(bad)]))
    return True, None


def boolean_normal_form(cert: SimplicityCertificate, X: Subshift) -> NormalForm:
    """Conjugacy of ``X`` with ``{0,1}^{R_full}`` to the ``Z`` times a finite shift.

    ``φ`` is the radius-0 projection onto the representatives (full ones
    first); ``φ⁻¹`` rebuilds every atom from its representative's bit at
    the linked offset.
    """
    if not cert.ok:
        raise PreconditionError("certificate records a failed condition", cert.failure)
    view = cert.view
    alg = view.algebra
    full = tuple(r for r in cert.representatives if cert.classes[r].tag == "full")
    per = tuple(r for r in cert.representatives if cert.classes[r].tag == "periodic")
    order = full + per
    phi = tuple_projection(X, alg, order, view)
    target = image(phi)
    P = image(tuple_projection(X, alg, per, view)) if per else Subshift.full(1)
    slot = {r: j for j, r in enumerate(order)}
    nb = len(order)
    rho = max((abs(k) for _, k in cert.links.values()), default=0)

    def rebuild(w):
        mask = 0
        for t, (r, k) in cert.links.items():
            bits = decode(w[rho + k], [2] * nb)
            if bits[slot[r]]:
                mask |= 1 << t
        return view.element(mask)

    phi_inv = BlockMap.from_function(target, rho, rebuild, alg.size, alg.labels, "phi_inv")

    ok = bool(blockmap_equal_on(phi_inv.compose(phi), identity_map(X), X))
    ok = ok and bool(blockmap_equal_on(phi.compose(phi_inv), identity_map(target), target))
    src = role_tables(alg, "boolean")
    dst = _boolean_table(nb)
    ok = ok and _commutes(phi, src, dst)[0]
    ok = ok and _commutes(phi_inv, dst, src)[0]
    return NormalForm(full, per, 1 << len(full), P, target, phi, phi_inv, ok)


# --------------------------------------------------------------------------
# random cellwise Boolean subshifts


@dataclass(frozen=True)
class BooleanRecipe:
    """Components ``(period or None)`` and, per atom, ``(component, offset)``."""

    components: tuple[int | None, ...]
    atoms: tuple[tuple[int, int], ...]


def random_recipe(rng: random.Random, k: int, max_period: int = 3, max_offset: int = 2
                  ) -> BooleanRecipe:
    ncomp = rng.randint(1, k)
    comps = tuple(None if rng.random() < 0.5 else rng.randint(1, max_period)
                  for _ in range(ncomp))
    used: dict[int, set[int]] = {c: {0} for c in range(ncomp)}
    atoms = [(c, 0) for c in range(ncomp)]
    for _ in range(k - ncomp):
        options = []
        for c, n in enumerate(comps):
            for off in range(-max_offset, max_offset + 1):
                key = off if n is None else off % n
                if key not in {u if n is None else u % n for u in used[c]}:
                    options.append((c, off))
        if not options:
            comps = comps + (None,)
            used[len(comps) - 1] = {0}
            atoms.append((len(comps) - 1, 0))
            continue
        c, off = rng.choice(options)
        used[c].add(off)
        atoms.append((c, off))
    order = list(range(k))
    rng.shuffle(order)
    return BooleanRecipe(comps, tuple(atoms[i] for i in order))


def build_from_recipe(recipe: BooleanRecipe) -> tuple[Subshift, FiniteAlgebra]:
    """Image of the product of the components under
    ``x_i = {t : component c_t is 1 at i + k_t}``."""
    from .catalog import boolean_algebra
    k = len(recipe.atoms)
    alg = boolean_algebra(k)
    comps = [Subshift.full(2) if n is None else BinaryClass("periodic", n).to_subshift()
             for n in recipe.components]
    base = product_shift(comps)
    sizes = [2] * len(comps)
    rho = max(abs(off) for _, off in recipe.atoms)

    def local(w):
        mask = 0
        for t, (c, off) in enumerate(recipe.atoms):
            if decode(w[rho + off], sizes)[c]:
                mask |= 1 << t
        return mask

    f = BlockMap.from_function(base, rho, local, alg.size, alg.labels)
    return image(f).with_labels(alg.labels), alg


def expected_certificate(recipe: BooleanRecipe) -> dict[int, tuple[int, str]]:
    """Per atom: the lowest-numbered atom on its component, and that component's class."""
    out = {}
    for t, (c, _) in enumerate(recipe.atoms):
        first = min(s for s, (c2, _) in enumerate(recipe.atoms) if c2 == c)
        n = recipe.components[c]
        out[t] = (first, "full" if n is None else f"periodic({n})")
    return out

