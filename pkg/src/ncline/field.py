"""Exact ground fields: the rationals and prime fields of odd characteristic.

Elements are plain Python numbers: ``Fraction`` (or ``int``) for Q and
``int`` in ``range(p)`` for F_p.  All arithmetic in the package goes through
ordinary operators followed by :meth:`Field.norm`, which is the identity over
Q and reduction mod p otherwise.
"""

from __future__ import annotations

from fractions import Fraction


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class FieldError(ValueError):
    pass


class Field:
    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p:
            if not _is_prime(p):
                raise FieldError(f"F{p}: {p} is not prime")
            if p == 2:
                raise FieldError("F2 is not supported; use an odd prime")
        self.p = p

    @classmethod
    def parse(cls, text: str) -> "Field":
        text = text.strip()
        if text in ("Q", "QQ"):
            return cls(0)
        if text[:1] == "F" and text[1:].isdigit():
            return cls(int(text[1:]))
        raise FieldError(f"unknown field {text!r}; expected Q or F<p>")

    @property
    def name(self) -> str:
        return f"F{self.p}" if self.p else "Q"

    def __repr__(self):
        return f"Field({self.name})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __call__(self, x):
        """Coerce an int, Fraction or numeric string into the field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        return int(x)

    def norm(self, x):
        return x % self.p if self.p else x

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(x, -1, self.p)
        return Fraction(1) / x

    def div(self, a, b):
        return self.norm(a * self.inv(b))

    def neg(self, a):
        return self.norm(-a)

    def to_str(self, x) -> str:
        """Render an element; F_p elements use the symmetric representative."""
        if self.p:
            x %= self.p
            if x > self.p // 2:
                x -= self.p
            return str(x)
        if isinstance(x, Fraction) and x.denominator != 1:
            return f"{x.numerator}/{x.denominator}"
        return str(int(x))

    def to_json(self, x):
        if self.p:
            return int(x % self.p)
        if isinstance(x, Fraction) and x.denominator != 1:
            return f"{x.numerator}/{x.denominator}"
        return int(x)

    def elements(self):
        """All elements of a finite field (raises over Q)."""
        if not self.p:
            raise FieldError("Q is infinite")
        return range(self.p)


QQ = Field(0)
