"""Finitely presented connected graded algebras and their text format.

The format is a sequence of statements separated by ``;`` or newlines::

    field Q; gens x:1 y:2; rel x*y - y*x - x^3

``*`` concatenates, ``^`` repeats, coefficients are integers or ``a/b``.
Parentheses group sub-expressions.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .field import Field, FieldError
from .linalg import Echelon
from .order import MonomialOrder
from .poly import NcPolynomial, Word, word_degree


class PresentationError(ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(msg + where)


@dataclass(frozen=True)
class Generator:
    index: int
    name: str
    weight: int


@dataclass(frozen=True, eq=False)
class AlgebraPresentation:
    field: Field
    generators: Tuple[Generator, ...]
    relations: Tuple[NcPolynomial, ...]

    @property
    def n(self) -> int:
        return len(self.generators)

    @property
    def weights(self) -> Tuple[int, ...]:
        return tuple(g.weight for g in self.generators)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def degree_one_generated(self) -> bool:
        return all(g.weight == 1 for g in self.generators)

    def default_order(self) -> MonomialOrder:
        return MonomialOrder.deglex(self.weights)

    def relation_degrees(self) -> List[int]:
        return [r.homogeneous_degree(self.weights) for r in self.relations]

    def max_relation_degree(self) -> int:
        return max(self.relation_degrees(), default=0)

    def gen(self, name_or_index) -> NcPolynomial:
        i = name_or_index if isinstance(name_or_index, int) else self.names.index(name_or_index)
        return NcPolynomial.word(self.field, (i,))

    def poly(self, text: str) -> NcPolynomial:
        """Parse a polynomial in this presentation's generators."""
        return _PolyParser(text, self.field, self.names, 1, 1).parse()

    def __eq__(self, other):
        if not isinstance(other, AlgebraPresentation):
            return NotImplemented
        return (
            self.field == other.field
            and self.generators == other.generators
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.field, self.generators, self.relations))

    def __str__(self):
        return render_presentation(self)


def make_monic(p: NcPolynomial, order: MonomialOrder) -> NcPolynomial:
    if p.is_zero():
        return p
    lw = order.leading(p.terms)
    return p.scale(p.field.inv(p.terms[lw]))


def build_presentation(
    field: Field,
    gens: Sequence[Tuple[str, int]],
    relations: Sequence[NcPolynomial],
    check_independent: bool = True,
) -> AlgebraPresentation:
    """Validate and normalize a presentation (relations monic, deg-lex)."""
    names = [g for g, _ in gens]
    if len(set(names)) != len(names):
        raise PresentationError("duplicate generator name")
    weights = [w for _, w in gens]
    for name, w in gens:
        if not isinstance(w, int) or w < 1:
            raise PresentationError(f"generator {name}: weight must be a positive integer")
    if weights != sorted(weights):
        raise PresentationError("generator weights must be non-decreasing in declaration order")
    generators = tuple(Generator(i, g, w) for i, (g, w) in enumerate(gens))
    order = MonomialOrder.deglex(weights)
    rels = []
    for r in relations:
        if r.field != field:
            raise PresentationError("relation over a different field")
        if r.is_zero():
            raise PresentationError("zero relation")
        if any(a >= len(gens) for a in r.generators_used()):
            raise PresentationError("relation uses an unknown generator")
        d = r.homogeneous_degree(weights)
        if d is None:
            raise PresentationError("inhomogeneous relation")
        if d < 2:
            raise PresentationError(f"relation of degree {d} < 2")
        rels.append(make_monic(r, order))
    if check_independent:
        _check_independent(field, rels)
    return AlgebraPresentation(field, generators, tuple(rels))


def _check_independent(field: Field, rels):
    index: dict = {}
    E = Echelon(field)
    for r in rels:
        v = {index.setdefault(w, len(index)): c for w, c in r.terms.items()}
        if not E.add(v):
            raise PresentationError("relations are linearly dependent")


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*^()]))"
)


class _PolyParser:
    def __init__(self, text, field, names, line, col0):
        self.text = text
        self.field = field
        self.names = {n: i for i, n in enumerate(names)}
        self.line = line
        self.col0 = col0
        self.toks = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise PresentationError(f"unexpected character {text[pos:].strip()[0]!r}", line, self._col(pos))
            kind = m.lastgroup
            start = m.start(kind)
            self.toks.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def _col(self, pos):
        return self.col0 + pos

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise PresentationError(msg, self.line, self._col(tok[2]))

    def parse(self) -> NcPolynomial:
        if not self.toks:
            self.error("empty polynomial")
        p = self.expr()
        if self.i < len(self.toks):
            self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self):
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        p = self.term()
        if sign < 0:
            p = -p
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.factor()
        while True:
            kind, val, _ = self.peek()
            if val == "*":
                self.take()
                p = p * self.factor()
            elif kind in ("num", "name") or val == "(":
                p = p * self.factor()  # juxtaposition, e.g. "2 x*y"
            else:
                return p

    def factor(self):
        p = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or "/" in val:
                self.error("exponent must be a non-negative integer", (kind, val, pos))
            e = int(val)
            r = NcPolynomial.one(self.field)
            for _ in range(e):
                r = r * p
            p = r
        return p

    def atom(self):
        kind, val, pos = self.take()
        F = self.field
        if kind == "num":
            return NcPolynomial(F, {(): F(Fraction(val))})
        if kind == "name":
            if val not in self.names:
                raise PresentationError(f"unknown generator {val}", self.line, self._col(pos))
            return NcPolynomial.word(F, (self.names[val],))
        if val == "(":
            p = self.expr()
            k2, v2, p2 = self.take()
            if v2 != ")":
                self.error("expected ')'", (k2, v2, p2))
            return p
        self.error("unexpected end of polynomial" if kind is None else f"unexpected token {val!r}", (kind, val, pos))


def _statements(text: str):
    """Yield (keyword, body, line, col_of_body, col_of_keyword) for each statement."""
    for lineno, raw in enumerate(text.splitlines() or [""], start=1):
        line = raw.split("#", 1)[0]
        pos = 0
        for piece in line.split(";"):
            start = pos
            pos += len(piece) + 1
            stripped = piece.strip()
            if not stripped:
                continue
            lead = len(piece) - len(piece.lstrip())
            m = re.match(r"(\S+)\s*", stripped)
            kw = m.group(1)
            body = stripped[m.end():]
            yield kw, body, lineno, start + lead + m.end() + 1, start + lead + 1


def parse_presentation(text: str, field: Field | None = None) -> AlgebraPresentation:
    """Parse the presentation DSL.  ``field`` overrides the declared field."""
    fld = None
    gens: list = []
    rel_src: list = []
    for kw, body, line, col, kw_col in _statements(text):
        if kw == "field":
            try:
                fld = Field.parse(body)
            except FieldError as e:
                raise PresentationError(str(e), line, col) from None
        elif kw == "gens":
            if gens:
                raise PresentationError("generators declared twice", line, col)
            for m in re.finditer(r"\S+", body):
                tok = m.group(0)
                name, _, w = tok.partition(":")
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name):
                    raise PresentationError(f"bad generator name {name!r}", line, col + m.start())
                if w and not w.isdigit():
                    raise PresentationError(f"bad weight {w!r}", line, col + m.start())
                gens.append((name, int(w) if w else 1))
        elif kw == "rel":
            rel_src.append((body, line, col))
        else:
            raise PresentationError(f"unknown statement {kw!r}", line, kw_col)
    if field is not None:
        fld = field
    if fld is None:
        raise PresentationError("missing field declaration")
    if not gens:
        raise PresentationError("missing generators")
    names = [g for g, _ in gens]
    weights = [w for _, w in gens]
    rels = []
    for body, line, col in rel_src:
        p = _PolyParser(body, fld, names, line, col).parse()
        if p.is_zero():
            raise PresentationError("zero relation", line, col)
        d = p.homogeneous_degree(weights)
        if d is None:
            raise PresentationError("inhomogeneous relation", line, col)
        if d < 2:
            raise PresentationError(f"relation of degree {d} < 2", line, col)
        rels.append(p)
    return build_presentation(fld, gens, rels)


# --------------------------------------------------------------------------
# rendering


def render_word(word: Word, names: Sequence[str]) -> str:
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        k = j - i
        parts.append(names[word[i]] + (f"^{k}" if k > 1 else ""))
        i = j
    return "*".join(parts)


def render_poly(p: NcPolynomial, names: Sequence[str], order: MonomialOrder | None = None) -> str:
    """Render terms in descending order."""
    if p.is_zero():
        return "0"
    F = p.field
    if order is None:
        words = sorted(p.terms, key=lambda w: (len(w), w))[::-1]
    else:
        words = order.sorted(p.terms, descending=True)
    out = []
    for w in words:
        s = F.to_str(p.terms[w])
        neg = s.startswith("-")
        mag = s[1:] if neg else s
        body = render_word(w, names)
        if w and mag == "1":
            txt = body
        elif w:
            txt = f"{mag}*{body}"
        else:
            txt = mag
        if not out:
            out.append(("-" if neg else "") + txt)
        else:
            out.append((" - " if neg else " + ") + txt)
    return "".join(out)


def render_presentation(pres: AlgebraPresentation) -> str:
    order = pres.default_order()
    gens = " ".join(f"{g.name}:{g.weight}" for g in pres.generators)
    parts = [f"field {pres.field.name}", f"gens {gens}"]
    for r in pres.relations:
        parts.append("rel " + render_poly(r, pres.names, order))
    return "; ".join(parts)


def free_algebra(field: Field, names: Sequence[str], weights: Sequence[int] | None = None) -> AlgebraPresentation:
    weights = weights or [1] * len(names)
    return build_presentation(field, list(zip(names, weights)), [])


def word_deg(pres: AlgebraPresentation, word: Word) -> int:
    return word_degree(word, pres.weights)
