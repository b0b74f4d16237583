"""Line-oriented text format for complexes and chain maps.

::

    ring Z | Q | F p | Zeps p
    complex NAME
    degrees LO HI
    dim I N            # one line per degree in [LO, HI]
    diff I             # then dim(I+1) rows of dim(I) entries
    <row entries>
    map NAME SRC TGT
    comp I             # then tgt.dim(I) rows of src.dim(I) entries
    <row entries>

``#`` starts a comment.  Missing ``diff``/``comp`` blocks are zero.
Entries are integers, fractions ``p/q`` (over Q), residues (over F p) and
dual numbers ``a+be`` (over Zeps p).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import ChainMap, Complex
from .errors import InvalidComplex, ParseError, WeightkitError
from .ring_linalg import CoeffRing, Dual, Matrix

_INT = re.compile(r"^[+-]?\d+$")
_FRAC = re.compile(r"^[+-]?\d+/\d+$")


def parse_ring(tokens: list[str]) -> CoeffRing:
    tag = tokens[0]
    if tag in ("Z", "Q"):
        if len(tokens) != 1:
            raise ValueError(f"ring {tag} takes no parameter")
        return CoeffRing(tag)
    if tag in ("F", "Zeps"):
        if len(tokens) != 2 or not _INT.match(tokens[1]):
            raise ValueError(f"ring {tag} needs a prime parameter")
        return CoeffRing(tag, int(tokens[1]))
    raise ValueError(f"unknown ring {tag!r}")


def format_ring(ring: CoeffRing) -> str:
    return str(ring)


def parse_entry(ring: CoeffRing, tok: str):
    t = ring.tag
    if t == "Zeps":
        if tok.endswith("e"):
            body = tok[:-1]
            k = max(body.rfind("+"), body.rfind("-"))
            if k > 0:
                a_s, b_s = body[:k], body[k:]
            else:
                a_s, b_s = "0", body
            if b_s in ("", "+"):
                b_s = "1"
            elif b_s == "-":
                b_s = "-1"
            if not _INT.match(a_s) or not _INT.match(b_s):
                raise ValueError(f"bad dual number {tok!r}")
            return Dual(int(a_s), int(b_s), ring.p)
        if _INT.match(tok):
            return Dual(int(tok), 0, ring.p)
        raise ValueError(f"bad dual number {tok!r}")
    if _INT.match(tok):
        return ring.coerce(int(tok))
    if _FRAC.match(tok):
        if t != "Q":
            raise ValueError(f"fractions are only allowed over Q, got {tok!r}")
        num, den = tok.split("/")
        if int(den) == 0:
            raise ValueError("zero denominator")
        return Fraction(int(num), int(den))
    raise ValueError(f"bad entry {tok!r}")


def format_entry(ring: CoeffRing, x) -> str:
    if ring.tag == "Zeps":
        return f"{x.a}+{x.b}e" if x.b else str(x.a)
    if ring.tag == "Q":
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


@dataclass
class Document:
    ring: CoeffRing
    complexes: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)

    def complex(self, name: str) -> Complex:
        if name not in self.complexes:
            raise KeyError(f"no complex named {name!r}")
        return self.complexes[name]

    def map(self, name: str) -> ChainMap:
        if name not in self.maps:
            raise KeyError(f"no map named {name!r}")
        return self.maps[name]


class _Lines:
    def __init__(self, text: str):
        self.items = []
        for n, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0]
            toks = []
            for m in re.finditer(r"\S+", line):
                toks.append((m.group(), m.start() + 1))
            if toks:
                self.items.append((n, toks))
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else None

    def next(self):
        item = self.peek()
        self.pos += 1
        return item


_KEYWORDS = {"ring", "complex", "degrees", "dim", "diff", "map", "comp"}


def _int_tok(tok, line) -> int:
    s, col = tok
    if not _INT.match(s):
        raise ParseError(f"expected an integer, got {s!r}", line, col)
    return int(s)


def _read_matrix(ring, lines: _Lines, rows: int, cols: int, where: str, line0: int) -> Matrix:
    data = []
    for _ in range(rows):
        item = lines.next()
        if item is None:
            raise ParseError(f"{where}: expected {rows} rows, file ended", line0, 1)
        n, toks = item
        if toks[0][0] in _KEYWORDS:
            raise ParseError(f"{where}: expected {rows} rows of entries", n, toks[0][1])
        if len(toks) != cols:
            # point at the first surplus entry, or at the row when entries are missing
            col = toks[cols][1] if len(toks) > cols else toks[0][1]
            raise ParseError(f"{where}: expected {cols} entries, got {len(toks)}", n, col)
        row = []
        for s, col in toks:
            try:
                row.append(parse_entry(ring, s))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(str(exc), n, col) from None
        data.append(row)
    return Matrix.from_rows(ring, data, cols=cols)


def parse_document(text: str) -> Document:
    """Parse the text format; raises :class:`ParseError` with line and column."""
    lines = _Lines(text)
    item = lines.next()
    if item is None:
        raise ParseError("empty input: expected a ring line", 1, 1)
    n, toks = item
    if toks[0][0] != "ring":
        raise ParseError("the first statement must be 'ring'", n, toks[0][1])
    if len(toks) < 2:
        raise ParseError("ring needs a name", n, toks[0][1])
    try:
        ring = parse_ring([t for t, _ in toks[1:]])
    except ValueError as exc:
        raise ParseError(str(exc), n, toks[1][1]) from None
    doc = Document(ring)
    while lines.peek() is not None:
        n, toks = lines.next()
        kw, col = toks[0]
        if kw == "complex":
            if len(toks) != 2:
                raise ParseError("usage: complex NAME", n, col)
            name = toks[1][0]
            if name in doc.complexes:
                raise ParseError(f"complex {name!r} defined twice", n, toks[1][1])
            doc.complexes[name] = _parse_complex(ring, lines, name, n)
        elif kw == "map":
            if len(toks) != 4:
                raise ParseError("usage: map NAME SRC TGT", n, col)
            name, src, tgt = (t for t, _ in toks[1:])
            for (t, c) in toks[2:]:
                if t not in doc.complexes:
                    raise ParseError(f"unknown complex {t!r}", n, c)
            if name in doc.maps:
                raise ParseError(f"map {name!r} defined twice", n, toks[1][1])
            doc.maps[name] = _parse_map(ring, lines, doc.complexes[src], doc.complexes[tgt], name, n)
        else:
            raise ParseError(f"unexpected {kw!r}", n, col)
    return doc


def _parse_complex(ring, lines: _Lines, name: str, line0: int) -> Complex:
    item = lines.next()
    if item is None or item[1][0][0] != "degrees":
        n, toks = item if item else (line0, [("", 1)])
        raise ParseError(f"complex {name}: expected 'degrees LO HI'", n, toks[0][1])
    n, toks = item
    if len(toks) != 3:
        raise ParseError("usage: degrees LO HI", n, toks[0][1])
    lo, hi = _int_tok(toks[1], n), _int_tok(toks[2], n)
    dims: dict[int, int] = {}
    diffs: dict[int, Matrix] = {}
    while lines.peek() is not None:
        n, toks = lines.peek()
        kw, col = toks[0]
        if kw == "dim":
            lines.next()
            if len(toks) != 3:
                raise ParseError("usage: dim I N", n, col)
            i, d = _int_tok(toks[1], n), _int_tok(toks[2], n)
            if not lo <= i <= hi:
                raise ParseError(f"degree {i} outside [{lo}, {hi}]", n, toks[1][1])
            if d < 0:
                raise ParseError("dimension must be nonnegative", n, toks[2][1])
            if i in dims:
                raise ParseError(f"dimension of degree {i} given twice", n, toks[1][1])
            if diffs:
                raise ParseError("dim lines must precede diff blocks", n, col)
            dims[i] = d
        elif kw == "diff":
            lines.next()
            if len(toks) != 2:
                raise ParseError("usage: diff I", n, col)
            i = _int_tok(toks[1], n)
            if not lo <= i < hi:
                raise ParseError(f"differential d^{i} outside the degree range", n, toks[1][1])
            missing = [k for k in range(lo, hi + 1) if k not in dims]
            if missing:
                raise ParseError(f"missing dim line for degree {missing[0]}", n, col)
            if i in diffs:
                raise ParseError(f"d^{i} given twice", n, toks[1][1])
            diffs[i] = _read_matrix(ring, lines, dims[i + 1], dims[i], f"d^{i} of {name}", n)
        else:
            break
    missing = [k for k in range(lo, hi + 1) if k not in dims]
    if missing:
        raise ParseError(f"complex {name}: missing dim line for degree {missing[0]}", line0, 1)
    try:
        if lo > hi:
            return Complex.zero(ring)
        return Complex(ring, lo, [dims[k] for k in range(lo, hi + 1)], diffs)
    except InvalidComplex as exc:
        raise ParseError(f"complex {name}: {exc}", line0, 1) from None


def _parse_map(ring, lines: _Lines, src: Complex, tgt: Complex, name: str, line0: int) -> ChainMap:
    comps: dict[int, Matrix] = {}
    while lines.peek() is not None:
        n, toks = lines.peek()
        kw, col = toks[0]
        if kw != "comp":
            break
        lines.next()
        if len(toks) != 2:
            raise ParseError("usage: comp I", n, col)
        i = _int_tok(toks[1], n)
        if i in comps:
            raise ParseError(f"component {i} given twice", n, toks[1][1])
        comps[i] = _read_matrix(ring, lines, tgt.dim(i), src.dim(i), f"component {i} of {name}", n)
    try:
        return ChainMap(src, tgt, comps)
    except WeightkitError as exc:
        raise ParseError(f"map {name}: {exc}", line0, 1) from None


def _format_matrix(ring, m: Matrix) -> list[str]:
    return [" ".join(format_entry(ring, x) for x in m.row(r)) for r in range(m.rows)]


def format_complex(name: str, M: Complex) -> list[str]:
    ring = M.ring
    out = [f"complex {name}"]
    if M.is_zero():
        out.append("degrees 0 -1")
        return out
    out.append(f"degrees {M.lo} {M.hi}")
    out += [f"dim {i} {M.dim(i)}" for i in M.degrees]
    for i in range(M.lo, M.hi):
        d = M.d(i)
        if not d.is_zero():
            out.append(f"diff {i}")
            out += _format_matrix(ring, d)
    return out


def format_map(name: str, src: str, tgt: str, f: ChainMap) -> list[str]:
    out = [f"map {name} {src} {tgt}"]
    for i, m in sorted(f.comps.items()):
        out.append(f"comp {i}")
        out += _format_matrix(f.ring, m)
    return out


def serialize_document(doc: Document) -> str:
    lines = [f"ring {format_ring(doc.ring)}"]
    names = {id(c): k for k, c in doc.complexes.items()}
    for name, M in doc.complexes.items():
        lines += format_complex(name, M)
    for name, f in doc.maps.items():
        src = _lookup(doc, f.src, names)
        tgt = _lookup(doc, f.tgt, names)
        lines += format_map(name, src, tgt, f)
    return "\n".join(lines) + "\n"


def _lookup(doc: Document, M: Complex, names: dict) -> str:
    if id(M) in names:
        return names[id(M)]
    for k, c in doc.complexes.items():
        if c == M:
            return k
    raise KeyError("map refers to a complex not in the document")


# ---------------------------------------------------------------------------
# JSON forms

def complex_to_json(M: Complex) -> dict:
    ring = M.ring
    return {
        "ring": format_ring(ring),
        "lo": M.lo,
        "dims": list(M.dims),
        "diffs": {str(i): [[format_entry(ring, x) for x in M.d(i).row(r)] for r in range(M.d(i).rows)]
                  for i in range(M.lo, M.hi) if not M.d(i).is_zero()},
    }


def complex_from_json(obj: dict) -> Complex:
    ring = parse_ring(obj["ring"].split())
    dims = obj["dims"]
    lo = obj["lo"]
    diffs = {}
    for k, rows in obj.get("diffs", {}).items():
        i = int(k)
        cols = dims[i - lo] if 0 <= i - lo < len(dims) else 0
        diffs[i] = Matrix.from_rows(ring, [[parse_entry(ring, s) for s in r] for r in rows], cols=cols)
    return Complex(ring, lo, dims, diffs)


def map_to_json(f: ChainMap) -> dict:
    ring = f.ring
    return {"src": complex_to_json(f.src), "tgt": complex_to_json(f.tgt),
            "comps": {str(i): [[format_entry(ring, x) for x in m.row(r)] for r in range(m.rows)]
                      for i, m in sorted(f.comps.items())}}


def map_from_json(obj: dict) -> ChainMap:
    src, tgt = complex_from_json(obj["src"]), complex_from_json(obj["tgt"])
    ring = src.ring
    comps = {int(k): Matrix.from_rows(ring, [[parse_entry(ring, s) for s in r] for r in rows],
                                      cols=src.dim(int(k)))
             for k, rows in obj.get("comps", {}).items()}
    return ChainMap(src, tgt, comps)
