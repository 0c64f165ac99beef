"""Line-oriented text formats for algebras, subshifts and block maps.

Blank lines and anything after ``#`` are ignored.  Symbols may be written
by label or by index; labels win when a token is both.
"""

from __future__ import annotations

import itertools
from pathlib import Path
from typing import Sequence

import numpy as np

from .algebra import FiniteAlgebra
from .subshift import BlockMap, Subshift, decode, encode, language, product_shift


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _int(tok: str, no: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"{what} must be an integer, got {tok!r}", no) from None


def symbol(tok: str, labels: Sequence[str], no: int | None = None) -> int:
    """Index of the symbol written as ``tok``."""
    for i, lab in enumerate(labels):
        if lab == tok:
            return i
    if tok.lstrip("-").isdigit() and 0 <= int(tok) < len(labels):
        return int(tok)
    raise FormatError(f"unknown symbol {tok!r}", no)


def word(line: str, labels: Sequence[str], no: int | None = None) -> tuple[int, ...]:
    """Space-separated cells; a single unknown token made of one-character
    labels is read character by character (``110`` for ``1 1 0``)."""
    toks = line.split()
    if len(toks) == 1 and toks[0] not in labels and len(toks[0]) > 1:
        try:
            return tuple(symbol(c, labels, no) for c in toks[0])
        except FormatError:
            pass
    return tuple(symbol(t, labels, no) for t in toks)


# --------------------------------------------------------------------------
# algebras


def parse_algebra(text: str) -> FiniteAlgebra:
    name, n = "", None
    labels: dict[int, str] = {}
    ops: list[tuple[str, int, list[str], int]] = []
    current = None
    for no, line in _lines(text):
        head, *rest = line.split()
        if current is not None and len(current[2]) < n ** current[1]:
            if len(line.split()) != 1:
                raise FormatError("expected one table entry per line", no)
            current[2].append((no, line))
            continue
        current = None
        if head == "algebra":
            name = " ".join(rest)
        elif head == "carrier":
            if len(rest) != 1:
                raise FormatError("usage: carrier <n>", no)
            n = _int(rest[0], no, "carrier size")
            if n < 1:
                raise FormatError("carrier must be nonempty", no)
        elif head == "elem":
            if n is None or len(rest) != 2:
                raise FormatError("usage: elem <index> <label> (after carrier)", no)
            i = _int(rest[0], no, "element index")
            if not 0 <= i < n:
                raise FormatError(f"element index {i} outside the carrier", no)
            labels[i] = rest[1]
        elif head == "op":
            if n is None or len(rest) != 2:
                raise FormatError("usage: op <name> <arity> (after carrier)", no)
            k = _int(rest[1], no, "arity")
            if k < 0:
                raise FormatError("negative arity", no)
            if any(o[0] == rest[0] for o in ops):
                raise FormatError(f"operation {rest[0]!r} defined twice", no)
            current = (rest[0], k, [], no)
            ops.append(current)
        else:
            raise FormatError(f"unknown directive {head!r}", no)
    if n is None:
        raise FormatError("missing carrier line")
    labs = [labels.get(i, str(i)) for i in range(n)]
    if len(set(labs)) != n:
        raise FormatError("element labels must be distinct")
    tables = {}
    for op, k, entries, no in ops:
        if len(entries) != n ** k:
            raise FormatError(f"operation {op!r} needs {n ** k} entries, got {len(entries)}", no)
        vals = [symbol(tok, labs, eno) for eno, tok in entries]
        tables[op] = np.array(vals, dtype=np.int64).reshape((n,) * k)
    return FiniteAlgebra(n, [(o[0], o[1]) for o in ops], tables, labs, name)


def format_algebra(alg: FiniteAlgebra) -> str:
    out = [f"algebra {alg.name or 'A'}", f"carrier {alg.size}"]
    for i, lab in enumerate(alg.labels):
        if lab != str(i):
            out.append(f"elem {i} {lab}")
    for name, k, t in alg.ops:
        out.append(f"op {name} {k}")
        out.extend(alg.labels[int(v)] for v in np.asarray(t).reshape(-1))
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# subshifts


def parse_subshift(text: str) -> Subshift:
    name, n = "", None
    labels: dict[int, str] = {}
    mode = None
    body: list[tuple[int, str]] = []
    for no, line in _lines(text):
        head, *rest = line.split()
        if mode == "forbidden" and head not in ("subshift", "alphabet", "sym", "graph"):
            body.append((no, line))
            continue
        if head == "subshift":
            name = " ".join(rest)
        elif head == "alphabet":
            if len(rest) != 1:
                raise FormatError("usage: alphabet <n>", no)
            n = _int(rest[0], no, "alphabet size")
            if n < 1:
                raise FormatError("alphabet must be nonempty", no)
        elif head == "sym":
            if n is None or len(rest) != 2:
                raise FormatError("usage: sym <index> <label> (after alphabet)", no)
            i = _int(rest[0], no, "symbol index")
            if not 0 <= i < n:
                raise FormatError(f"symbol index {i} outside the alphabet", no)
            labels[i] = rest[1]
        elif head in ("forbidden", "graph"):
            if mode is not None:
                raise FormatError("only one of forbidden/graph may appear", no)
            mode = head
        elif head == "edge" and mode == "graph":
            if len(rest) != 3:
                raise FormatError("usage: edge <from> <to> <label>", no)
            body.append((no, line))
        else:
            raise FormatError(f"unexpected line {line!r}", no)
    if n is None:
        raise FormatError("missing alphabet line")
    labs = [labels.get(i, str(i)) for i in range(n)]
    if len(set(labs)) != n:
        raise FormatError("symbol labels must be distinct")
    if mode == "graph":
        edges = []
        for no, line in body:
            _, u, v, a = line.split()
            edges.append((_int(u, no, "vertex"), _int(v, no, "vertex"), symbol(a, labs, no)))
        if any(min(u, v) < 0 for u, v, _ in edges):
            raise FormatError("negative vertex number")
        nv = max((max(u, v) for u, v, _ in edges), default=-1) + 1
        return Subshift.from_graph(n, nv, edges, labs, name)
    words = [word(line, labs, no) for no, line in body]
    return Subshift.from_forbidden(n, words, labs, name)


def format_subshift(X: Subshift, name: str | None = None) -> str:
    out = [f"subshift {name or X.name or 'X'}", f"alphabet {X.alphabet_size}"]
    for i, lab in enumerate(X.labels):
        if lab != str(i):
            out.append(f"sym {i} {lab}")
    if X.forbidden is not None:
        out.append("forbidden")
        out.extend(" ".join(X.labels[a] for a in w) for w in X.forbidden)
    else:
        out.append("graph")
        out.extend(f"edge {u} {v} {X.labels[a]}" for u, v, a in X.graph.edges)
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# block maps


def parse_blockmap(text: str, X: Subshift, codomain: Sequence[str] | None = None,
                   arity: int = 1) -> BlockMap:
    """A block map on ``X^arity`` (cells of a product are ``a,b`` or ``(a,b)``).

    Every window of the domain language must be listed."""
    codomain = list(codomain if codomain is not None else X.labels)
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty block map file")
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 3 or parts[0] != "blockmap":
        raise FormatError("usage: blockmap <name> <radius>", no)
    name, r = parts[1], _int(parts[2], no, "radius")
    if r < 0:
        raise FormatError("negative radius", no)
    sizes = [X.alphabet_size] * arity
    D = X if arity == 1 else product_shift([X] * arity)
    table = {}
    for no, line in lines[1:]:
        if "->" not in line:
            raise FormatError("expected '<word> -> <symbol>'", no)
        lhs, rhs = (s.strip() for s in line.split("->", 1))
        if arity == 1:
            w = word(lhs, X.labels, no)
        else:
            w = tuple(_cell(c, X.labels, sizes, no) for c in lhs.split())
        if len(w) != 2 * r + 1:
            raise FormatError(f"window length {len(w)} does not match radius {r}", no)
        if w in table:
            raise FormatError("window listed twice", no)
        table[w] = symbol(rhs, codomain, no)
    missing = [w for w in language(D, 2 * r + 1) if w not in table]
    if missing:
        raise FormatError(f"{len(missing)} windows of the domain are missing, e.g. "
                          + " ".join(D.labels[a] for a in missing[0]))
    allowed = set(language(D, 2 * r + 1))
    table = {w: v for w, v in table.items() if w in allowed}
    return BlockMap(D, r, table, len(codomain), codomain, name)


def _cell(tok: str, labels, sizes, no) -> int:
    parts = tok.strip("()").split(",")
    if len(parts) != len(sizes):
        raise FormatError(f"cell {tok!r} needs {len(sizes)} components", no)
    return encode([symbol(p, labels, no) for p in parts], sizes)


def format_blockmap(f: BlockMap, labels: Sequence[str] | None = None, arity: int = 1) -> str:
    """Inverse of :func:`parse_blockmap`; ``labels`` are the base symbol labels."""
    labels = list(labels or f.domain.labels)
    sizes = [len(labels)] * arity
    out = [f"blockmap {f.name or 'f'} {f.radius}"]
    for w in sorted(f.table):
        cells = (",".join(labels[c] for c in decode(a, sizes)) for a in w)
        out.append(" ".join(cells) + " -> " + f.codomain_labels[f.table[w]])
    return "\n".join(out) + "\n"


def rule_from_blockmap(f: BlockMap, n: int) -> np.ndarray:
    """Dense local rule array for a block map on the full shift over ``n`` symbols."""
    w = 2 * f.radius + 1
    rule = np.empty((n,) * w, dtype=np.int64)
    for win in itertools.product(range(n), repeat=w):
        rule[win] = f.table[win]
    return rule


def read(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
