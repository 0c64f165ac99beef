"""Named worked examples with their expected outcomes, run by ``algsh fixtures``."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import catalog
from .algebra import (affine_closure, check_identities, congruence_product_check, congruences,
                      direct_decomposition, product, shallowness)
from .evp import EventuallyPeriodicPoint as EVP, evp_table
from .subshift import Subshift, contains, language

_REGISTRY: list[tuple[str, Callable[[], tuple[bool, str]]]] = []


def fixture(name: str):
    def deco(fn):
        _REGISTRY.append((name, fn))
        return fn
    return deco


@dataclass
class FixtureResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def run_all(names: list[str] | None = None) -> list[FixtureResult]:
    out = []
    for name, fn in _REGISTRY:
        if names and name not in names:
            continue
        t = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed fixture, not a crashed table
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(FixtureResult(name, bool(ok), detail, time.perf_counter() - t))
    return out


def names() -> list[str]:
    return [n for n, _ in _REGISTRY]


# --------------------------------------------------------------------------
# algebras


@fixture("identities: N5 is not modular")
def _n5():
    N5 = catalog.n5()
    v = check_identities(N5, "modular")
    ok = not v.passed and v.violations[0][0] == "modularity"
    return ok, "witness " + " ".join(N5.labels[a] for a in v.violations[0][1]) if ok else ""


@fixture("identities: Boolean 2 passes")
def _bool2():
    return bool(check_identities(catalog.boolean_algebra(1), "boolean")), ""


@fixture("congruences: 3-chain has 4, M3 has 2")
def _cons():
    a, b = len(congruences(catalog.three_chain())), len(congruences(catalog.m3()))
    return (a, b) == (4, 2), f"{a}, {b}"


@fixture("decompose: 2x2 splits into two copies of 2")
def _decomp():
    d = direct_decomposition(product([catalog.two(), catalog.two()]))
    return [f.size for f in d.factors] == [2, 2] and d.reassemble() == d.algebra, ""


@fixture("cpp: lattices hold, Z2xZ2 groups fail")
def _cpp():
    lat = congruence_product_check([catalog.two(), catalog.two()])
    grp = congruence_product_check([catalog.cyclic_group(2), catalog.cyclic_group(2)])
    return lat.holds and not grp.holds and grp.product_congruences == 5, ""


@fixture("affine closure: 2 as lattice and as Boolean algebra")
def _affine():
    a = affine_closure(catalog.two())
    b = affine_closure(catalog.boolean_algebra(1))
    return len(a.functions) == 3 and len(b.functions) == 4, f"{len(a.functions)}, {len(b.functions)}"


@fixture("shallowness: distributive lattices <= 2, Boolean algebras <= 3")
def _shallow():
    ks = [shallowness(L) for L in catalog.distributive_lattices(6)]
    bs = [shallowness(catalog.boolean_algebra(k)) for k in (1, 2, 3)]
    return max(ks) <= 2 and max(bs) <= 3, f"max {max(ks)}, {max(bs)}"


# --------------------------------------------------------------------------
# subshifts and points


@fixture("language: forbid 11 has 5 words of length 3")
def _golden_words():
    return len(language(Subshift.from_forbidden(2, [(1, 1)]), 3)) == 5, ""


@fixture("containment: full shift not inside forbid 11")
def _contain():
    res = contains(Subshift.from_forbidden(2, [(1, 1)]), Subshift.full(2))
    return (not res) and res.witness == (1, 1), f"witness {res.witness}"


@fixture("points: cellwise meet and join of periodic points")
def _points():
    two = catalog.two()
    meet, join = two.tables["meet"], two.tables["join"]
    a = evp_table(meet, [EVP.from_parts((0,), (), (1,), (1,)),
                         EVP.from_parts((1,), (), (0,), (0,))])
    b = evp_table(join, [EVP.periodic((0, 1)), EVP.periodic((1, 0))])
    return a == EVP.constant(0) and b == EVP.constant(1), f"{a}, {b}"


# --------------------------------------------------------------------------
# lattice subshifts


def _binary(words):
    return Subshift.from_forbidden(2, words)


@fixture("extremal: forbid 10 gives m1 = ^0.1^")
def _m_forbid10():
    from .lattice import compute_extremal
    fam = compute_extremal(_binary([(1, 0)]), catalog.two())
    return fam.m[1] == EVP.from_parts((0,), (), (1,), (1,)), str(fam.m[1])


@fixture("cellwise: forbid 10 yes, forbid 11 no")
def _cellwise():
    from .lattice import cellwise_lattice_check
    a = cellwise_lattice_check(_binary([(1, 0)]), catalog.two())
    b = cellwise_lattice_check(_binary([(1, 1)]), catalog.two())
    return a.cellwise and not b.cellwise and b.failing_word == (1, 1), f"{b.operation}"


@fixture("soficity: powers-of-two rule is not eventually periodic")
def _pow2():
    from .lattice import powers_of_two_family, soficity_check
    fam = powers_of_two_family(catalog.three_chain(), 1, 2, 0)
    v = soficity_check(fam, window=64, symbols=[2])
    return v.status == "not-eventually-periodic-up-to-window", v.status


@fixture("classify: full, right-cone(1), periodic(3)")
def _classify():
    from .lattice import classify_binary
    got = [str(classify_binary(X)) for X in (
        Subshift.full(2), _binary([(1, 0)]),
        _binary([w for w in np.ndindex(2, 2, 2, 2) if w[0] != w[3]]))]
    return got == ["full", "right-cone([1])", "periodic(3)"], ", ".join(got)


# --------------------------------------------------------------------------
# Boolean subshifts


@fixture("simplicity: shifted copy links t2 to (t1, 1)")
def _shifted():
    from .boolean import BooleanRecipe, build_from_recipe, simplicity_check
    X, alg = build_from_recipe(BooleanRecipe((None,), ((0, 0), (0, 1))))
    cert = simplicity_check(X, alg)
    return cert.ok and cert.links[1] == (0, 1) and cert.representatives == (0,), str(cert.links)


@fixture("normal form: full x periodic(2)")
def _normal():
    from .boolean import BooleanRecipe, boolean_normal_form, build_from_recipe, simplicity_check
    X, alg = build_from_recipe(BooleanRecipe((None, 2), ((0, 0), (1, 0))))
    cert = simplicity_check(X, alg)
    nf = boolean_normal_form(cert, X)
    return nf.verified and nf.full_alphabet_size == 2, f"finite part {nf.finite_part!r}"


# --------------------------------------------------------------------------
# recoding


@fixture("recode: cellwise 2 on forbid 10 stays radius 0")
def _recode():
    from .recoding import SubshiftAlgebra, recode
    rec = recode(SubshiftAlgebra.cellwise(_binary([(1, 0)]), catalog.two()), variety="lattice")
    return rec.radius == 0 and len(rec.classes) == 2, ""


@fixture("quasigroup: affine radii unbounded up to 5")
def _quasi():
    from .recoding import affine_block_closure, member_radius_witness, quasigroup_shift
    A = quasigroup_shift()
    cl = affine_block_closure(A, 5)
    w = member_radius_witness(A, cl.witness)
    return (cl.status == "unbounded-up-to(5)" and w is not None and w.verify(A)
            and w.exceeds >= 5), f"{cl.status}, witness radius > {w.exceeds if w else None}"


@fixture("four-symbol lattice: t_k(x) and t_k(y) for k <= 4")
def _four():
    from .recoding import FOUR_LABELS, eval_affine, four_symbol_family, four_symbol_lattice
    A = four_symbol_lattice()
    p, m = FOUR_LABELS.index("1+"), FOUR_LABELS.index("0+")
    ok = True
    for k in range(5):
        w = four_symbol_family(k)
        tx = eval_affine(A, w.expr, w.x)
        ok &= tx == EVP.from_parts((p,), (), (m,) * (k + 2), (p,))
        ok &= eval_affine(A, w.expr, w.y) == w.y and w.verify(A)
    return ok, ""


@fixture("groupoid: t_k needs depth k")
def _groupoid():
    from .recoding import groupoid_depth_fixture
    reps = groupoid_depth_fixture(3)
    ok = all(r.images_without_one and r.fixed_outside and r.min_depth is None
             and r.realized_at == r.k for r in reps)
    return ok, ", ".join(f"k={r.k}:{r.realized_at}" for r in reps)


# --------------------------------------------------------------------------
# linear cellular automata


def _two_by_two_rule(links, name=""):
    from .linear_ca import product_rule
    return product_rule([catalog.two(), catalog.two()], 1, links, name)


@fixture("linear: x meet z fails on join")
def _not_linear():
    from .linear_ca import LinearCA, check_linear
    two = catalog.two()
    ca = LinearCA.from_function(two, 1, lambda x, y, z: min(x, z))
    v = check_linear(ca)
    return (not v.linear) and v.operation == "join", str(v.arguments)


@fixture("ca: swap with shift has p = 2, q = 0")
def _swap():
    from .linear_ca import limit_structure
    ls = limit_structure(_two_by_two_rule([(1, 2, (0, 1)), (0, 0, (0, 1))]))
    links = [(ln.source, ln.position) for ln in ls.factorization.links]
    return (ls.p, ls.q) == (2, 0) and links == [(1, 2), (0, 0)], f"p={ls.p} q={ls.q}"


@fixture("ca: copy component has p = 1, q = 1")
def _copy():
    from .linear_ca import limit_structure
    ls = limit_structure(_two_by_two_rule([(0, 2, (0, 1)), (0, 1, (0, 1))]))
    return (ls.p, ls.q) == (1, 1), f"p={ls.p} q={ls.q}"


@fixture("ca: constant bottom has a one-point limit")
def _bottom():
    from .linear_ca import LinearCA, limit_structure
    ca = LinearCA.from_function(product([catalog.two(), catalog.two()]), 1, lambda *w: 0)
    ls = limit_structure(ca)
    return (ls.p, ls.q) == (1, 1) and len(ls.factorization.alphabet) == 1, ""


@fixture("ca: Z2xZ2 rule reports congruence-product failure")
def _z2():
    from .linear_ca import CongruenceProductFailure, LinearCA, factorize_rule
    G = catalog.z2_group_pair()
    iso = direct_decomposition(G).iso
    inv = {c: a for a, c in enumerate(iso)}
    ca = LinearCA.from_function(G, 0, lambda a: inv[((iso[a][0] + iso[a][1]) % 2, iso[a][1])])
    try:
        factorize_rule(ca)
    except CongruenceProductFailure:
        return True, ""
    return False, "factorization returned"


@fixture("ca: Boolean shift and atom swap")
def _boolean_ca():
    from .boolean import power_set_view
    from .linear_ca import LinearCA, boolean_ca_corollary_check
    B = catalog.boolean_algebra(2)
    view = power_set_view(B)
    code = list(view.code)
    el = {c: i for i, c in enumerate(code)}
    shift = LinearCA.from_function(B, 1, lambda a, b, c: c)
    swap = LinearCA.from_function(
        B, 1, lambda a, b, c: el[((code[b] & 1) << 1) | (code[b] >> 1)])
    s = [(r.source, r.shift) for r in boolean_ca_corollary_check(shift)]
    w = [(r.source, r.shift) for r in boolean_ca_corollary_check(swap)]
    return s == [(0, 1), (1, 1)] and w == [(1, 0), (0, 0)], f"{s}; {w}"
