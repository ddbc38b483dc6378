"""Words and polynomials in the free associative algebra k<x_0, ..., x_{n-1}>.

A word is a tuple of generator indices; the empty tuple is the unit.  Degrees
are weighted: ``word_degree(w, weights)`` sums the weights of the letters.
"""

from __future__ import annotations

from typing import Dict, Iterable, Sequence, Tuple

from .field import Field

Word = Tuple[int, ...]


def word_degree(word: Word, weights: Sequence[int]) -> int:
    return sum(weights[a] for a in word)


class NcPolynomial:
    """Finite linear combination of words with nonzero coefficients.

    Instances are treated as immutable values; ``terms`` must not be mutated
    after construction.
    """

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms: Dict[Word, object] | None = None):
        self.field = field
        clean = {}
        if terms:
            for w, c in terms.items():
                c = field.norm(c)
                if c != 0:
                    clean[tuple(w)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, field: Field, terms: dict) -> "NcPolynomial":
        # caller guarantees normalized nonzero coefficients
        p = cls.__new__(cls)
        p.field = field
        p.terms = terms
        return p

    @classmethod
    def word(cls, field: Field, word: Iterable[int], coeff=1) -> "NcPolynomial":
        return cls(field, {tuple(word): field(coeff)})

    @classmethod
    def zero(cls, field: Field) -> "NcPolynomial":
        return cls._raw(field, {})

    @classmethod
    def one(cls, field: Field) -> "NcPolynomial":
        return cls._raw(field, {(): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, NcPolynomial):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"NcPolynomial({self.terms!r})"

    def _check(self, other):
        if self.field != other.field:
            raise ValueError("polynomials over different fields")

    def __add__(self, other: "NcPolynomial") -> "NcPolynomial":
        self._check(other)
        F = self.field
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = F.norm(out.get(w, 0) + c)
            if v == 0:
                out.pop(w, None)
            else:
                out[w] = v
        return NcPolynomial._raw(F, out)

    def __neg__(self) -> "NcPolynomial":
        F = self.field
        return NcPolynomial._raw(F, {w: F.norm(-c) for w, c in self.terms.items()})

    def __sub__(self, other: "NcPolynomial") -> "NcPolynomial":
        return self + (-other)

    def scale(self, c) -> "NcPolynomial":
        F = self.field
        c = F(c)
        if c == 0:
            return NcPolynomial.zero(F)
        return NcPolynomial._raw(F, {w: F.norm(v * c) for w, v in self.terms.items()})

    def __mul__(self, other: "NcPolynomial") -> "NcPolynomial":
        self._check(other)
        F = self.field
        out: dict = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u + v
                out[w] = out.get(w, 0) + a * b
        return NcPolynomial(F, out)

    def degrees(self, weights: Sequence[int]) -> set:
        return {word_degree(w, weights) for w in self.terms}

    def degree(self, weights: Sequence[int]) -> int:
        """Maximal weighted degree of a term (-1 for the zero polynomial)."""
        return max((word_degree(w, weights) for w in self.terms), default=-1)

    def homogeneous_degree(self, weights: Sequence[int]) -> int | None:
        degs = self.degrees(weights)
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_homogeneous(self, weights: Sequence[int]) -> bool:
        return len(self.degrees(weights)) <= 1

    def generators_used(self) -> set:
        return {a for w in self.terms for a in w}


def poly_arith(a: NcPolynomial, b, op: str) -> NcPolynomial:
    """Apply ``op`` in {'add', 'sub', 'mul', 'scale'}; for 'scale', ``b`` is a scalar."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown operation {op!r}")
