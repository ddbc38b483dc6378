"""Hilbert series, truncated integer power series, strong freeness.

Strong freeness is tested through Hilbert series.  If X minimally generates
the ideal I of A and B = A/I, condition "B * k<X> is isomorphic to A as graded
vector spaces" reads, with X(z) = sum over x in X of z^deg(x),

    H_A(z) = H_{B * k<X>}(z),   1/H_{B * k<X>} = 1/H_B - X(z)

(the Hilbert series of a free product P * Q satisfies
1/H_{P*Q} = 1/H_P + 1/H_Q - 1, and 1/H_{k<X>} = 1 - X(z)).  So X is strongly
free exactly when 1/H_B = 1/H_A + X(z) in every degree; we check it through a
finite degree D.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .groebner import CertificationError, GroebnerBasis, count_normal_words, two_sided_gb
from .order import MonomialOrder
from .poly import NcPolynomial
from .presentation import AlgebraPresentation


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class PowerSeries:
    """Integer power series a_0 + a_1 z + ... known through degree ``trunc``."""

    coeffs: tuple

    @classmethod
    def of(cls, coeffs: Sequence[int], trunc: int | None = None) -> "PowerSeries":
        c = [int(x) for x in coeffs]
        if trunc is not None:
            c = (c + [0] * (trunc + 1))[: trunc + 1]
        return cls(tuple(c))

    @property
    def trunc(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, d):
        return self.coeffs[d]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def _match(self, other):
        D = min(self.trunc, other.trunc)
        return self.coeffs[: D + 1], other.coeffs[: D + 1], D

    def __add__(self, other):
        a, b, _ = self._match(other)
        return PowerSeries(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other):
        a, b, _ = self._match(other)
        return PowerSeries(tuple(x - y for x, y in zip(a, b)))

    def __neg__(self):
        return PowerSeries(tuple(-x for x in self.coeffs))

    def __mul__(self, other):
        a, b, D = self._match(other)
        out = [0] * (D + 1)
        for i, x in enumerate(a):
            if x:
                for j in range(D + 1 - i):
                    out[i + j] += x * b[j]
        return PowerSeries(tuple(out))

    def reciprocal(self) -> "PowerSeries":
        a = self.coeffs
        if a[0] not in (1, -1):
            raise SeriesError(f"constant term {a[0]} is not a unit in Z[[z]]")
        D = self.trunc
        inv0 = a[0]  # 1/a0 == a0 for a0 = +-1
        out = [0] * (D + 1)
        out[0] = inv0
        for d in range(1, D + 1):
            s = sum(a[i] * out[d - i] for i in range(1, d + 1))
            out[d] = -inv0 * s
        return PowerSeries(tuple(out))

    def shifted(self, k: int) -> "PowerSeries":
        """Multiply by z^k, keeping the truncation degree."""
        D = self.trunc
        return PowerSeries(tuple(([0] * k + list(self.coeffs))[: D + 1]))

    def first_difference(self, other) -> Optional[int]:
        a, b, _ = self._match(other)
        return next((d for d, (x, y) in enumerate(zip(a, b)) if x != y), None)

    def render(self) -> str:
        return f"[{', '.join(str(x) for x in self.coeffs)}] (trunc {self.trunc})"

    def __str__(self):
        return self.render()

    def as_json(self):
        return {"coefficients": list(self.coeffs), "trunc": self.trunc}


def polynomial_series(coeffs: Sequence[int], D: int) -> PowerSeries:
    return PowerSeries.of(coeffs, D)


def series_arith(a: PowerSeries, b: PowerSeries | None, op: str) -> PowerSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "reciprocal":
        return a.reciprocal()
    raise ValueError(f"unknown series operation {op!r}")


def render_int_poly(coeffs: Sequence[int], var: str = "z") -> str:
    parts = []
    for d, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = "" if d == 0 else (var if d == 1 else f"{var}^{d}")
        mag = abs(c)
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def _trim(c):
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class RationalSeries:
    numerator: tuple
    denominator: tuple

    def expand(self, D: int) -> PowerSeries:
        num = PowerSeries.of(self.numerator, D)
        den = PowerSeries.of(self.denominator, D)
        return num * den.reciprocal()

    def render(self) -> str:
        return f"({render_int_poly(self.numerator)}) / ({render_int_poly(self.denominator)})"

    def __str__(self):
        return self.render()

    def as_json(self):
        return {"numerator": list(self.numerator), "denominator": list(self.denominator),
                "text": self.render()}


def guess_rational(H: PowerSeries) -> Optional[RationalSeries]:
    """Return 1/P when 1/H is a polynomial P of degree <= trunc/2 (within truncation)."""
    inv = H.reciprocal()
    D = H.trunc
    last = max((d for d, c in enumerate(inv.coeffs) if c), default=0)
    if last <= D // 2:
        return RationalSeries((1,), _trim(inv.coeffs[: last + 1]))
    return None


def regular_candidate(weights: Sequence[int], relation_degree: int) -> RationalSeries:
    """1 / (1 - sum z^{d_i} + z^{deg b}): the series of a regular one-relator algebra."""
    den = [0] * (max(list(weights) + [relation_degree]) + 1)
    den[0] += 1
    for w in weights:
        den[w] -= 1
    den[relation_degree] += 1
    return RationalSeries((1,), _trim(den))


def hilbert_from_gb(gb: GroebnerBasis, D: int) -> PowerSeries:
    """a_d = number of weighted-degree-d normal words, 0 <= d <= D."""
    return PowerSeries(tuple(count_normal_words(gb, D)))


def hilbert_series(pres: AlgebraPresentation, D: int, extra: Sequence[NcPolynomial] = (),
                   order: MonomialOrder | None = None) -> tuple:
    """(series, gb) of the algebra presented by ``pres`` (modulo ``extra``)."""
    gb = two_sided_gb(pres, order, bound=max(D, pres.max_relation_degree(),
                                             max((e.degree(pres.weights) for e in extra), default=0)),
                      extra=extra, certify=False)
    return hilbert_from_gb(gb, D), gb


def golod_shafarevich_bound(pres: AlgebraPresentation, D: int) -> Optional[PowerSeries]:
    """Coefficientwise lower bound 1/(1 - X(z) + R(z)) for H_A through D, where
    X and R count generators and relations by degree.  None unless every
    coefficient of the bound is positive (otherwise it is not a valid bound)."""
    den = [0] * (D + 1)
    den[0] = 1
    for w in pres.weights:
        if w <= D:
            den[w] -= 1
    for d in pres.relation_degrees():
        if d <= D:
            den[d] += 1
    bound = PowerSeries(tuple(den)).reciprocal()
    if any(c <= 0 for c in bound.coeffs):
        return None
    return bound


MODULAR_PRIME = 1_000_003


def reduce_mod_p(pres: AlgebraPresentation, p: int = MODULAR_PRIME) -> Optional[AlgebraPresentation]:
    """The presentation with each relation scaled to primitive integer
    coefficients and read over F_p; None when that is not possible."""
    from fractions import Fraction
    from math import gcd, lcm

    from .field import Field
    from .presentation import PresentationError, build_presentation

    if pres.field.p:
        return None
    Fp = Field(p)
    rels = []
    for r in pres.relations:
        coeffs = [Fraction(c) for c in r.terms.values()]
        m = lcm(*(c.denominator for c in coeffs))
        ints = {w: int(Fraction(c) * m) for w, c in r.terms.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        rels.append(NcPolynomial(Fp, {w: (v // g) % p for w, v in ints.items() if (v // g) % p}))
    try:
        return build_presentation(Fp, [(g.name, g.weight) for g in pres.generators], rels)
    except (PresentationError, ValueError):
        return None


def sandwich_series(pres: AlgebraPresentation, D: int) -> Optional[PowerSeries]:
    """Exact H_A through D for an algebra over Q when the series of its
    reduction mod a prime meets the Golod-Shafarevich lower bound.

    Reducing integral relations mod p can only shrink the ideal, so
    H_A <= H_{A mod p} coefficientwise; together with H_A >= bound, equality of
    the outer two pins down H_A.  Returns None when the squeeze does not close.
    """
    low = golod_shafarevich_bound(pres, D)
    if low is None:
        return None
    mod = reduce_mod_p(pres)
    if mod is None:
        return None
    gb = two_sided_gb(mod, bound=max(D, pres.max_relation_degree()), certify=False)
    H = hilbert_from_gb(gb, D)
    return H if H == low else None


# --------------------------------------------------------------------------
# strong freeness


@dataclass
class StronglyFreeResult:
    status: str  # "certified", "refuted" or "inconclusive"
    degree: int  # certified degree, or first failing degree
    defect: int = 0
    H_A: PowerSeries | None = None
    H_B: PowerSeries | None = None
    message: str = ""

    @property
    def certified(self) -> bool:
        return self.status == "certified"

    def as_json(self):
        out = {"status": self.status, "degree": self.degree}
        if self.status == "refuted":
            out["defect"] = self.defect
        if self.H_A is not None:
            out["H_A"] = list(self.H_A.coeffs)
        if self.H_B is not None:
            out["H_B"] = list(self.H_B.coeffs)
        if self.message:
            out["message"] = self.message
        return out


def x_series(pres: AlgebraPresentation, X: Sequence[NcPolynomial], D: int) -> PowerSeries:
    c = [0] * (D + 1)
    for x in X:
        d = x.homogeneous_degree(pres.weights)
        if d is not None and d <= D:
            c[d] += 1
    return PowerSeries(tuple(c))


def strongly_free_check(pres: AlgebraPresentation, X: Sequence[NcPolynomial], D: int | None = None,
                        order: MonomialOrder | None = None) -> StronglyFreeResult:
    """Test 1/H_{A/(X)} = 1/H_A + sum_x z^deg(x) through degree D.

    ``defect`` of a refutation is the coefficient of
    (1/H_A + X(z)) - 1/H_B at the first failing degree.
    """
    weights = pres.weights
    degs = []
    for x in X:
        d = x.homogeneous_degree(weights)
        if d is None or d < 1:
            raise ValueError("elements of X must be homogeneous of positive degree")
        degs.append(d)
    if D is None:
        D = 2 * max([pres.max_relation_degree()] + degs) + 6
    if degs and D < max(degs) + 2:
        raise ValueError(f"degree bound {D} must be at least max deg X + 2 = {max(degs) + 2}")
    HA = sandwich_series(pres, D) if order is None and not pres.field.p else None
    gbB = two_sided_gb(pres, order, bound=max(D, pres.max_relation_degree()), extra=X, certify=False)
    try:
        if HA is None:
            gbA = two_sided_gb(pres, order, bound=max(D, pres.max_relation_degree()), certify=False)
            HA = hilbert_from_gb(gbA, D)
        HB = hilbert_from_gb(gbB, D)
    except CertificationError as e:  # pragma: no cover - bounds are chosen >= D
        return StronglyFreeResult("inconclusive", D, message=str(e))
    lhs = HB.reciprocal()
    rhs = HA.reciprocal() + x_series(pres, X, D)
    d = lhs.first_difference(rhs)
    if d is None:
        return StronglyFreeResult("certified", D, 0, HA, HB)
    return StronglyFreeResult("refuted", d, rhs[d] - lhs[d], HA, HB)


# --------------------------------------------------------------------------
# Euler polynomial test


@dataclass
class EulerTest:
    passed: bool
    product: PowerSeries
    polynomial: tuple | None = None
    first_tail_degree: int | None = None
    coefficient: int | None = None

    def as_json(self):
        out = {"passed": self.passed, "product": list(self.product.coeffs)}
        if self.passed:
            out["polynomial"] = list(self.polynomial)
        else:
            out["first_tail_degree"] = self.first_tail_degree
            out["coefficient"] = self.coefficient
        return out


def euler_poly_test(H: PowerSeries, n: int, D: int | None = None) -> EulerTest:
    """Multiply H by 1 - n z + z^2 and test whether the result is a polynomial of degree <= 2."""
    D = H.trunc if D is None else D
    if D < 4:
        raise ValueError("euler_poly_test needs D >= 4")
    if D > H.trunc:
        raise ValueError(f"series known only through degree {H.trunc}")
    Hs = PowerSeries(H.coeffs[: D + 1])
    prod = Hs * PowerSeries.of([1, -n, 1], D)
    tail = next((d for d in range(3, D + 1) if prod[d] != 0), None)
    if tail is None:
        return EulerTest(True, prod, polynomial=_trim(prod.coeffs[:3]))
    return EulerTest(False, prod, first_tail_degree=tail, coefficient=prod[tail])
