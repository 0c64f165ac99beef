"""``algsh`` command line front end."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import io
from .algebra import (Congruence, ResourceLimitError, SignatureError, check_identities,
                      congruence_product_check, congruences, direct_decomposition, format_expr,
                      product, shallowness, VARIETIES)
from .errors import InternalConsistencyError, PreconditionError
from .evp import EventuallyPeriodicPoint as EVP
from .subshift import StateLimitError

EXIT_OK, EXIT_BUG, EXIT_FORMAT, EXIT_PRECONDITION, EXIT_RESOURCE = 0, 1, 2, 3, 4

SCHEMA_PATH = Path(__file__).with_name("report.schema.json")


@dataclass
class Report:
    command: str
    status: str = "ok"
    inputs: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    message: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls(**json.loads(text))

    def to_text(self) -> str:
        out = [f"{self.command}: {self.status}"]
        if self.message:
            out.append(self.message)
        for title, body in (("verdicts", self.verdicts), ("witnesses", self.witnesses)):
            if body:
                out.append(f"{title}:")
                out.extend(_text_lines(body, 1))
        return "\n".join(out) + "\n"


def _text_lines(obj, depth: int) -> list[str]:
    pad = "  " * depth
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                out.append(f"{pad}{k}:")
                out.extend(_text_lines(v, depth + 1))
            else:
                out.append(f"{pad}{k}: {_inline(v)}")
        return out
    if isinstance(obj, list) and not _flat(obj):
        out = []
        for v in obj:
            sub = _text_lines(v, depth + 1)
            out.append(pad + "- " + sub[0].strip()) if sub else None
            out.extend(sub[1:])
        return out
    return [pad + _inline(obj)]


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or
                                       (isinstance(x, list) and _flat(x)) for x in v)


def _inline(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if isinstance(v, str) and "\n" in v:
        return "\n" + v
    return str(v)


# --------------------------------------------------------------------------
# rendering with labels


class Labels:
    def __init__(self, labels: Sequence[str]):
        self.labels = list(labels)

    def sym(self, a) -> str:
        return self.labels[int(a)]

    def word(self, w) -> str:
        return " ".join(self.sym(a) for a in w)

    def point(self, p: EVP) -> str:
        return p.format(self.labels)

    def con(self, c: Congruence) -> list[list[str]]:
        return [[self.sym(a) for a in b] for b in c.blocks]

    def any(self, obj):
        """Best-effort rendering of witnesses of unknown shape."""
        if obj is None or isinstance(obj, (bool, str, float)):
            return obj
        if isinstance(obj, (int, np.integer)):
            return self.sym(obj) if 0 <= int(obj) < len(self.labels) else int(obj)
        if isinstance(obj, EVP):
            return self.point(obj)
        if isinstance(obj, Congruence):
            return self.con(obj)
        if isinstance(obj, dict):
            return {str(k): self.any(v) for k, v in obj.items()}
        if isinstance(obj, (tuple, list)):
            if obj and all(isinstance(a, (int, np.integer)) for a in obj):
                return self.word(obj)
            return [self.any(x) for x in obj]
        return str(obj)


def _digest(path: str) -> dict:
    data = Path(path).read_bytes()
    return {"path": str(path), "sha256": hashlib.sha256(data).hexdigest()}


def _load_algebra(args, rep: Report, key: str = "algebra", path: str | None = None):
    path = path or getattr(args, key)
    alg = io.parse_algebra(io.read(path))
    rep.inputs[key if path == getattr(args, key, None) else f"{key}:{path}"] = _digest(path)
    if alg.size > args.max_carrier:
        raise ResourceLimitError(f"carrier {alg.size} exceeds --max-carrier {args.max_carrier}")
    return alg


def _load_subshift(args, rep: Report, alg=None):
    X = io.parse_subshift(io.read(args.subshift))
    rep.inputs["subshift"] = _digest(args.subshift)
    if alg is not None:
        if X.alphabet_size != alg.size:
            raise io.FormatError(
                f"subshift alphabet has {X.alphabet_size} symbols, algebra carrier {alg.size}")
        X = X.with_labels(alg.labels, X.name)
    return X


# --------------------------------------------------------------------------
# commands


def cmd_check_identities(args, rep):
    alg = _load_algebra(args, rep)
    L = Labels(alg.labels)
    v = check_identities(alg, args.variety)
    rep.verdicts = {"variety": v.variety, "passed": v.passed,
                    "violated": [name for name, _ in v.violations]}
    rep.witnesses = {name: L.word(w) for name, w in v.violations}


def cmd_congruences(args, rep):
    alg = _load_algebra(args, rep)
    L = Labels(alg.labels)
    cons = sorted(congruences(alg), key=lambda c: (c.nblocks, c.labels), reverse=True)
    rep.verdicts = {"count": len(cons), "congruences": [L.con(c) for c in cons]}


def cmd_decompose(args, rep):
    alg = _load_algebra(args, rep)
    dec = direct_decomposition(alg)
    rep.verdicts = {
        "factor_sizes": [f.size for f in dec.factors],
        "factors": [f.labels for f in dec.factors],
        "iso": {alg.labels[a]: [f.labels[c] for f, c in zip(dec.factors, coords)]
                for a, coords in enumerate(dec.iso)},
    }
    rep.verdicts["factors"] = [list(f) for f in rep.verdicts["factors"]]


def cmd_cpp_check(args, rep):
    algs = [_load_algebra(args, rep, path=p) for p in args.algebra]
    if len(algs) == 1:
        factors = direct_decomposition(algs[0]).factors
    else:
        factors = algs
    v = congruence_product_check(factors, max_size=args.max_carrier)
    rep.verdicts = {"holds": v.holds, "factor_sizes": [f.size for f in factors],
                    "product_congruences": v.product_congruences,
                    "factor_products": v.factor_products}
    if v.counterexample is not None:
        prod = product(factors)
        rep.witnesses = {"non_product_congruence": Labels(prod.labels).con(v.counterexample)}


def cmd_shallowness(args, rep):
    alg = _load_algebra(args, rep)
    from .algebra import affine_closure
    cl = affine_closure(alg)
    k = shallowness(alg)
    rep.verdicts = {"k": k, "affine_maps": len(cl.functions)}
    deepest = [f for f in cl.functions if f not in cl.levels[k - 1]] if k else []
    if deepest:
        rep.witnesses = {"depth_k_map": format_expr(cl.witness[min(deepest)], alg.labels)}


def cmd_analyze_lattice(args, rep):
    from .lattice import cellwise_lattice_check
    alg = _load_algebra(args, rep)
    X = _load_subshift(args, rep, alg)
    L = Labels(alg.labels)
    v = cellwise_lattice_check(X, alg)
    rep.verdicts = {"cellwise_lattice": v.cellwise, "routes_agree": True}
    if not v.cellwise:
        rep.verdicts["failed_operation"] = v.operation
        rep.witnesses = {"word": L.word(v.failing_word),
                         "pair": [L.word(w) for w in v.witness_pair]}
    fam = v.family
    rep.witnesses["m"] = {L.sym(a): L.point(p) for a, p in sorted(fam.m.items())}
    rep.witnesses["M"] = {L.sym(a): L.point(p) for a, p in sorted(fam.M.items())}


def cmd_classify_binary(args, rep):
    from .lattice import classify_binary
    X = _load_subshift(args, rep)
    cls = classify_binary(X, use=args.use)
    rep.verdicts = {"class": cls.tag, "parameters": str(cls),
                    "period": cls.period, "generators": list(cls.generators or []),
                    "complement_closed": cls.complement_closed, "regenerates": True}


def cmd_sofic_check(args, rep):
    from .lattice import compute_extremal, powers_of_two_family, soficity_check, binary_two
    if args.powers_of_two:
        alg = binary_two()
        fam = powers_of_two_family(alg, 1, 1, 0)
        v = soficity_check(fam, window=args.window, symbols=[1])
        rep.inputs["family"] = {"path": "builtin:powers-of-two", "sha256": ""}
        L = Labels(alg.labels)
    else:
        if not (args.algebra and args.subshift):
            raise io.FormatError("need --algebra and --subshift, or --powers-of-two")
        alg = _load_algebra(args, rep)
        X = _load_subshift(args, rep, alg)
        L = Labels(alg.labels)
        v = soficity_check(compute_extremal(X, alg), window=args.window)
    rep.verdicts = {"status": v.status, "window": v.window}
    rep.witnesses = {"details": {str(k if isinstance(k, str) else
                                     (":".join([k[0], L.sym(k[1])]) if isinstance(k, tuple)
                                      else L.sym(k))): list(val) if val is not None else None
                                 for k, val in v.details.items()}}
    rep.witnesses["details"] = json.loads(json.dumps(rep.witnesses["details"]))


def cmd_boolean_decompose(args, rep):
    from .boolean import boolean_normal_form, simplicity_check
    alg = _load_algebra(args, rep)
    X = _load_subshift(args, rep, alg)
    cert = simplicity_check(X, alg)
    rep.verdicts = cert.summary()
    if not cert.ok:
        raise PreconditionError(f"not simple: {cert.failure[0]}", cert.failure[1])
    nf = boolean_normal_form(cert, X)
    lab = cert.view.atom_label
    rep.verdicts["normal_form"] = {
        "full_atoms": [lab(t) for t in nf.full_atoms],
        "periodic_atoms": [lab(t) for t in nf.periodic_atoms],
        "full_alphabet_size": nf.full_alphabet_size,
        "finite_part_size": nf.finite_part.graph.nvertices,
        "verified": nf.verified,
    }
    rep.witnesses = {"phi": io.format_blockmap(nf.phi), "phi_inv": io.format_blockmap(nf.phi_inv)}


def cmd_recode(args, rep):
    from .recoding import (SubshiftAlgebra, affine_block_closure, format_affine,
                           member_radius_witness, recode)
    alg = _load_algebra(args, rep)
    X = _load_subshift(args, rep, alg)
    A = SubshiftAlgebra.cellwise(X, alg)
    for path in args.ops or []:
        text = io.read(path)
        name = text.split()[1] if len(text.split()) > 1 else ""
        if name not in A.ops:
            raise io.FormatError(f"{path}: {name!r} is not a positive-arity operation")
        A.ops[name] = io.parse_blockmap(text, X, alg.labels, A.arity(name))
        rep.inputs[f"op:{name}"] = _digest(path)
    bad = A.closure_failures()
    if bad:
        raise PreconditionError("operations leave the subshift",
                                {op: w for op, w in bad.items()})
    L = Labels(alg.labels)
    cl = affine_block_closure(A, args.radius_limit)
    rep.verdicts = {"closure": cl.status, "working_radius": cl.working_radius,
                    "members": len(cl.members)}
    if not cl.stabilized:
        w = cl.witness
        if w is not None and not hasattr(w, "x"):
            w = member_radius_witness(A, w)
        if w is not None:
            rep.witnesses = {"expression": format_affine(w.expr, alg.labels),
                             "x": L.point(w.x), "y": L.point(w.y),
                             "position": w.position, "radius_exceeds": w.exceeds}
        return
    rec = recode(A, cl, args.radius_limit, args.variety)
    classes = rec.class_labels(alg.labels)
    rep.verdicts["radius"] = rec.radius
    rep.verdicts["classes"] = classes
    Lc = Labels(classes)
    rep.verdicts["tables"] = {
        op: {",".join(Lc.sym(a) for a in np.unravel_index(i, t.shape)): Lc.sym(v)
             for i, v in enumerate(np.asarray(t).reshape(-1))}
        for op, t in sorted(rec.tables.items()) if np.asarray(t).ndim > 0}
    rep.witnesses = {"phi": io.format_blockmap(rec.phi, alg.labels),
                     "phi_inv": io.format_blockmap(rec.phi_inv, classes)}


def cmd_ca_limit(args, rep):
    from .linear_ca import LinearCA, check_linear, limit_structure
    from .subshift import Subshift
    alg = _load_algebra(args, rep)
    text = io.read(args.rule)
    bm = io.parse_blockmap(text, Subshift.full(alg.size, alg.labels), alg.labels)
    rep.inputs["rule"] = _digest(args.rule)
    ca = LinearCA(alg, bm.radius, io.rule_from_blockmap(bm, alg.size), bm.name)
    L = Labels(alg.labels)
    lin = check_linear(ca)
    if not lin:
        raise PreconditionError(f"local rule does not commute with {lin.operation}",
                                {"operation": lin.operation, "arguments": lin.arguments})
    ls = limit_structure(ca, max_steps=64, max_period=args.max_period)
    fac = ls.factorization
    rep.verdicts = {
        "limit_alphabet": [L.sym(a) for a in fac.alphabet],
        "limit_symbols": [L.sym(a) for a in sorted(ls.limit.symbols())],
        "factor_sizes": fac.sizes,
        "factors": [list(f.labels) for f in fac.decomposition.factors],
        "links": [{"factor": i + 1, "source": ln.source + 1, "offset": ln.offset(ca.radius),
                   "h": {fac.decomposition.factors[ln.source].labels[a]:
                         fac.decomposition.factors[i].labels[b] for a, b in enumerate(ln.h)}}
                  for i, ln in enumerate(fac.links)],
        "edges": [[u + 1, v + 1] for u, v in ls.edges],
        "cycle_factors": [c + 1 for c in ls.cycle_vertices],
        "p": ls.p, "q": ls.q, "structural_depth": ls.structural_depth,
        "shift_exponents": {str(v + 1): ls.shift_exponent(v) for v in range(len(fac.links))},
    }
    rep.witnesses = {"limit": io.format_subshift(ls.limit.with_labels(alg.labels), "limit")}


def cmd_fixtures(args, rep):
    from .fixtures import run_all
    rows = run_all()
    rep.verdicts = {"passed": sum(r.passed for r in rows), "total": len(rows),
                    "fixtures": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                                 for r in rows]}
    if args.report == "text":
        width = max(len(r.name) for r in rows)
        table = [f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}  {r.detail}" for r in rows]
        rep.message = "\n".join(table)
        rep.verdicts = {"passed": rep.verdicts["passed"], "total": len(rows)}
    if not all(r.passed for r in rows):
        rep.status = "fixtures-failed"


COMMANDS = {
    "check-identities": cmd_check_identities,
    "congruences": cmd_congruences,
    "decompose": cmd_decompose,
    "cpp-check": cmd_cpp_check,
    "shallowness": cmd_shallowness,
    "analyze-lattice": cmd_analyze_lattice,
    "classify-binary": cmd_classify_binary,
    "sofic-check": cmd_sofic_check,
    "boolean-decompose": cmd_boolean_decompose,
    "recode": cmd_recode,
    "ca-limit": cmd_ca_limit,
    "fixtures": cmd_fixtures,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FORMAT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", choices=("text", "json"), default="text")
    common.add_argument("--radius-limit", type=int, default=6)
    common.add_argument("--max-carrier", type=int, default=64)
    common.add_argument("--max-period", type=int, default=6)

    p = _Parser(prog="algsh", description="Subshifts with algebraic structure.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help, algebra=True, subshift=False):
        sp = sub.add_parser(name, help=help, parents=[common])
        if algebra:
            sp.add_argument("--algebra", required=True)
        if subshift:
            sp.add_argument("--subshift", required=True)
        return sp

    add("check-identities", "check the identities of a variety").add_argument(
        "--variety", required=True, choices=sorted(VARIETIES))
    add("congruences", "list all congruences")
    add("decompose", "directly indecomposable factors")
    sp = sub.add_parser("cpp-check", help="congruence-product property of a product",
                        parents=[common])
    sp.add_argument("--algebra", action="append", required=True,
                    help="repeat for each factor; a single algebra is decomposed first")
    add("shallowness", "depth at which affine maps stabilize")
    add("analyze-lattice", "cellwise lattice test and extremal points", subshift=True)
    sp = add("classify-binary", "classify a binary cellwise lattice subshift",
             algebra=False, subshift=True)
    sp.add_argument("--use", choices=("m", "M"), default="m")
    sp = sub.add_parser("sofic-check", help="eventual periodicity of extremal points",
                        parents=[common])
    sp.add_argument("--algebra")
    sp.add_argument("--subshift")
    sp.add_argument("--powers-of-two", action="store_true",
                    help="check the built-in non-sofic rule family instead")
    sp.add_argument("--window", type=int, default=64)
    add("boolean-decompose", "simplicity and normal form over a Boolean algebra", subshift=True)
    sp = add("recode", "recode to a cellwise algebra", subshift=True)
    sp.add_argument("--ops", nargs="+", help="block-map files overriding operations")
    sp.add_argument("--variety", choices=sorted(VARIETIES))
    add("ca-limit", "limit set of a linear cellular automaton").add_argument(
        "--rule", required=True)
    sub.add_parser("fixtures", help="run the built-in fixtures", parents=[common])
    return p


def run(argv: Sequence[str] | None = None) -> tuple[int, Report | None]:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    rep = Report(args.command)
    code = EXIT_OK
    try:
        COMMANDS[args.command](args, rep)
    except (io.FormatError, ValueError) as exc:
        if isinstance(exc, PreconditionError):
            rep.status, code = "precondition-violated", EXIT_PRECONDITION
            rep.message = str(exc)
            if exc.witness is not None:
                rep.witnesses["precondition"] = _labels_for(args, rep).any(exc.witness)
        else:
            rep.status, code = "input-error", EXIT_FORMAT
            rep.message = str(exc)
    except SignatureError as exc:
        rep.status, code, rep.message = "precondition-violated", EXIT_PRECONDITION, str(exc)
    except (ResourceLimitError, StateLimitError) as exc:
        rep.status, code, rep.message = "resource-limit", EXIT_RESOURCE, str(exc)
    except InternalConsistencyError as exc:
        rep.status, code, rep.message = "internal-error", EXIT_BUG, str(exc)
    rep._args = args  # type: ignore[attr-defined]
    return code, rep


def _labels_for(args, rep) -> Labels:
    for key in ("algebra", "subshift"):
        path = getattr(args, key, None)
        if isinstance(path, str):
            try:
                obj = (io.parse_algebra if key == "algebra" else io.parse_subshift)(io.read(path))
                return Labels(obj.labels)
            except io.FormatError:
                pass
    return Labels(["0", "1"])


def main(argv: Sequence[str] | None = None) -> int:
    code, rep = run(argv)
    if rep is not None:
        fmt = rep._args.report  # type: ignore[attr-defined]
        sys.stdout.write(rep.to_json() + "\n" if fmt == "json" else rep.to_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
