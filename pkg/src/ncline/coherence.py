"""Finite presentations of graded right ideals, Tor/Betti tables and coherence
certificates for one-relator algebras."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .field import Field
from .groebner import GroebnerBasis, normal_words, right_gb, two_sided_gb
from .hilbert import StronglyFreeResult, hilbert_series, strongly_free_check, x_series
from .linalg import Echelon, mat_inverse
from .poly import NcPolynomial, Word
from .presentation import AlgebraPresentation, build_presentation, render_poly
from .quadratic import (
    GradedAutomorphism,
    QuadraticTensor,
    RegularityReport,
    _candidate_vectors,
    complete_basis,
    rank2_subspace,
    rank_one_factor,
    tensor_rank,
    zhang_regular_check,
)


# --------------------------------------------------------------------------
# right ideals


@dataclass
class BettiTable:
    tor1: Dict[int, int]
    tor2: Dict[int, int]
    D: int
    stabilized: bool

    @property
    def total_tor2(self) -> int:
        return sum(self.tor2.values())

    def as_json(self):
        return {
            "tor1": {str(d): c for d, c in sorted(self.tor1.items())},
            "tor2": {str(d): c for d, c in sorted(self.tor2.items())},
            "degree": self.D,
            "status": "stabilized" if self.stabilized else "truncated",
        }


@dataclass
class RightIdealPresentation:
    gb: GroebnerBasis
    generators: List[NcPolynomial]
    degrees: List[int]
    syzygies: List[Tuple[int, Tuple[NcPolynomial, ...]]]  # (degree, coefficient per generator)
    certified_degree: int
    dims: List[int]  # dim J_d, d = 0..D
    pruned: List[int] = dc_field(default_factory=list)  # input positions dropped as non-minimal
    minimal: bool = True

    def check_syzygies(self) -> bool:
        """Every syzygy sum_i g_i a_i reduces to zero."""
        for _, coeffs in self.syzygies:
            acc: dict = {}
            for g, a in zip(self.generators, coeffs):
                for w, c in (g * a).terms.items():
                    acc[w] = acc.get(w, 0) + c
            if self.gb.reduce_terms(acc):
                return False
        return True

    def betti(self) -> BettiTable:
        D = self.certified_degree
        tor1: Dict[int, int] = {}
        for d in self.degrees:
            tor1[d] = tor1.get(d, 0) + 1
        tor2: Dict[int, int] = {}
        for d, _ in self.syzygies:
            tor2[d] = tor2.get(d, 0) + 1
        top = max(self.degrees, default=0)
        quiet = all(d < D - 2 for d in list(tor1) + list(tor2))
        return BettiTable(tor1, tor2, D, quiet and D >= top + 3)


def ideal_presentation(pres: AlgebraPresentation, gens: Sequence[NcPolynomial], D: int,
                       gb: GroebnerBasis | None = None) -> RightIdealPresentation:
    """Minimal generators and minimal syzygies of the right ideal J = sum g_i A, through degree D.

    Works degree by degree: the free module F = sum g_i A[-d_i] has basis
    (i, u) with u normal; its image spans J_d, its kernel K_d holds the
    syzygies, and the minimal ones are those outside K_{d-w(a)} x_a.
    """
    F = pres.field
    weights = pres.weights
    if gb is None:
        gb = two_sided_gb(pres, bound=max(D, pres.max_relation_degree()))
    gb.require(D, "ideal presentation")
    cands = []
    for pos, g in enumerate(gens):
        d = g.homogeneous_degree(weights)
        if d is None:
            raise ValueError("ideal generators must be homogeneous")
        cands.append((d, pos, g))
    cands.sort(key=lambda t: (t[0], t[1]))
    pruned = []

    accepted: List[Tuple[int, NcPolynomial]] = []
    images: Dict[int, Dict[Tuple[int, Word], dict]] = {}  # degree -> (gen, u) -> NF(g u)
    kernels: Dict[int, List[dict]] = {}  # degree -> kernel basis as (gen, u) -> coeff
    nf_cache: Dict[Word, dict] = {}
    syzygies = []
    dims = [0] * (D + 1)

    def nf_word(w):
        r = nf_cache.get(w)
        if r is None:
            r = gb.reduce_terms({w: 1})
            nf_cache[w] = r
        return r

    def times_letter(vec: dict, a: int) -> dict:
        out: dict = {}
        p = F.p
        for w, c in vec.items():
            for t, x in nf_word(w + (a,)).items():
                y = out.get(t, 0) + c * x
                if p:
                    y %= p
                if y == 0:
                    out.pop(t, None)
                else:
                    out[t] = y
        return out

    for d in range(0, D + 1):
        cur: Dict[Tuple[int, Word], dict] = {}
        for a, w in enumerate(weights):
            for (i, u), img in images.get(d - w, {}).items():
                if gb.is_normal(u + (a,)):
                    cur[(i, u + (a,))] = times_letter(img, a)
        col: Dict[Word, int] = {}

        def vec(t):
            return {col.setdefault(w, len(col)): c for w, c in t.items()}

        E = Echelon(F, track=True)
        tags = sorted(cur, key=lambda k: (k[0], gb.order.key(k[1])))
        kern = []
        for tag in tags:
            if not E.add(vec(cur[tag]), tag):
                kern.append(E.last_dependency)
        for di, pos, g in [c for c in cands if c[0] == d]:
            t = gb.reduce_terms(g.terms)
            if t and E.add(vec(t), ("new", pos)):
                i = len(accepted)
                accepted.append((d, NcPolynomial(F, t)))
                cur[(i, ())] = t
            else:
                pruned.append(pos)
        dims[d] = E.rank
        images[d] = cur
        kernels[d] = kern
        if not kern:
            continue
        # syzygies generated in lower degrees
        low = Echelon(F)
        tag_col: Dict[Tuple[int, Word], int] = {}

        def tvec(s):
            return {tag_col.setdefault(k, len(tag_col)): c for k, c in s.items()}

        for a, w in enumerate(weights):
            for s in kernels.get(d - w, []):
                moved: dict = {}
                for (i, u), c in s.items():
                    for t, x in nf_word(u + (a,)).items():
                        key = (i, t)
                        y = F.norm(moved.get(key, 0) + c * x)
                        if y == 0:
                            moved.pop(key, None)
                        else:
                            moved[key] = y
                if moved:
                    low.add(tvec(moved))
        for s in kern:
            if low.add(tvec(s)):
                coeffs: List[dict] = [dict() for _ in accepted]
                for (i, u), c in s.items():
                    coeffs[i][u] = c
                syzygies.append((d, tuple(NcPolynomial(F, c) for c in coeffs)))

    gens_out = [g for _, g in accepted]
    # pad coefficient tuples for generators accepted after the syzygy was found
    syz = [(d, c + tuple(NcPolynomial.zero(F) for _ in range(len(gens_out) - len(c)))) for d, c in syzygies]
    return RightIdealPresentation(gb, gens_out, [d for d, _ in accepted], syz, D, dims, sorted(pruned))


def tor_betti(pres: AlgebraPresentation, gens: Sequence[NcPolynomial], D: int,
              gb: GroebnerBasis | None = None) -> BettiTable:
    """Graded Tor_1 and Tor_2 of A/J through degree D."""
    return ideal_presentation(pres, gens, D, gb).betti()


def augmentation_betti(pres: AlgebraPresentation, D: int) -> BettiTable:
    return tor_betti(pres, [pres.gen(i) for i in range(pres.n)], D)


# --------------------------------------------------------------------------
# coherence certificates


@dataclass
class CoherenceCertificate:
    kind: str  # monomial, noetherian, rnci or none
    status: str  # certified, withheld, outside-scope or contradiction
    presentation: AlgebraPresentation
    message: str = ""
    base_change: Optional[List[list]] = None  # R with x_i = sum_a R[a][i] y_a
    W: Optional[List[NcPolynomial]] = None
    transformed: Optional[AlgebraPresentation] = None
    X: Optional[List[NcPolynomial]] = None  # in the transformed generators
    B: Optional[AlgebraPresentation] = None
    strongly_free: Optional[StronglyFreeResult] = None
    B_regular: Optional[RegularityReport] = None
    factors: Optional[tuple] = None

    def as_json(self):
        F = self.presentation.field
        out = {"kind": self.kind, "status": self.status, "algebra": str(self.presentation)}
        if self.message:
            out["message"] = self.message
        if self.factors is not None:
            out["factors"] = [[F.to_json(x) for x in v] for v in self.factors]
        if self.base_change is not None:
            out["base_change"] = [[F.to_json(x) for x in r] for r in self.base_change]
        if self.W is not None:
            out["W"] = [render_poly(w, self.presentation.names) for w in self.W]
        if self.transformed is not None:
            out["transformed"] = str(self.transformed)
            out["X"] = [render_poly(x, self.transformed.names) for x in self.X]
        if self.B is not None:
            out["B"] = str(self.B)
        if self.strongly_free is not None:
            out["strongly_free"] = self.strongly_free.as_json()
        if self.B_regular is not None:
            out["B_regular"] = self.B_regular.as_json(self.B.names)
        return out


def _substitute(pres: AlgebraPresentation, R, names) -> AlgebraPresentation:
    """Rewrite in new generators via x_i = sum_a R[a][i] y_a, so that the
    relation matrix becomes R M R^T."""
    F = pres.field
    n = pres.n
    images = []
    for i in range(n):
        images.append(NcPolynomial(F, {(a,): R[a][i] for a in range(n) if R[a][i] != 0}))
    phi = GradedAutomorphism(F, pres.weights, tuple(images))
    rels = [phi.apply(r) for r in pres.relations]
    return build_presentation(F, list(zip(names, pres.weights)), rels)


def _quotient(pres: AlgebraPresentation, keep: Sequence[int]) -> AlgebraPresentation:
    """A/(generators not in keep): drop every word using a killed letter."""
    F = pres.field
    pos = {a: i for i, a in enumerate(keep)}
    rels = []
    for r in pres.relations:
        t = {tuple(pos[a] for a in w): c for w, c in r.terms.items() if all(a in pos for a in w)}
        if t:
            rels.append(NcPolynomial(F, t))
    gens = [(pres.names[a], pres.weights[a]) for a in keep]
    return build_presentation(F, gens, rels, check_independent=False)


def _new_names(pres: AlgebraPresentation) -> List[str]:
    taken = set(pres.names)
    base = "y"
    while any(f"{base}{i + 1}" in taken for i in range(pres.n)):
        base += "y"
    return [f"{base}{i + 1}" for i in range(pres.n)]


def rnci_extract(pres: AlgebraPresentation, D: int = 10) -> CoherenceCertificate:
    """Coherence certificate for a one-relator algebra.

    Rank one relations are monomial after a change of basis, two-generator
    regular algebras are Noetherian, and otherwise a rank-2 quotient B is split
    off by a change of basis and the complementary generators X are checked to
    be strongly free through degree D.
    """
    F = pres.field
    n = pres.n
    if len(pres.relations) != 1:
        raise ValueError(f"expected exactly one relation, got {len(pres.relations)}")
    b = pres.relations[0]
    if len(b.terms) == 1:
        return CoherenceCertificate("monomial", "certified", pres, "the relation is a single word")
    quadratic = all(len(w) == 2 for w in b.terms) and len(set(pres.weights)) == 1
    if quadratic:
        t = QuadraticTensor.from_poly(b, n)
        r = tensor_rank(t)
        if r == 1:
            return CoherenceCertificate("monomial", "certified", pres,
                                        "rank one: the relation is a product of two linear forms",
                                        factors=rank_one_factor(t))
        if n == 2:
            reg = zhang_regular_check(pres)
            return CoherenceCertificate("noetherian", "certified", pres,
                                        "two generators and rank 2: regular of global dimension 2",
                                        B=pres, B_regular=reg)
        proj = rank2_subspace(t)
        R = complete_basis(F, proj.P)
        keep = [0, 1]
        return _finish_rnci(pres, R, keep, D)
    reg = zhang_regular_check(pres)
    if not reg.is_regular:
        return CoherenceCertificate("none", "outside-scope", pres,
                                    "not quadratic and not regular: " + (reg.reason or "no automorphism"))
    if n == 2:
        return CoherenceCertificate("noetherian", "certified", pres,
                                    "regular with two generators", B=pres, B_regular=reg)
    return _weighted_rnci(pres, D)


def _finish_rnci(pres, R, keep, D, tried=None) -> CoherenceCertificate:
    F = pres.field
    n = pres.n
    names = _new_names(pres)
    A2 = _substitute(pres, R, names)
    X_idx = [a for a in range(n) if a not in keep]
    X = [A2.gen(a) for a in X_idx]
    B = _quotient(A2, keep)
    S = mat_inverse(F, R)
    W = [NcPolynomial(F, {(i,): S[i][a] for i in range(n) if S[i][a] != 0}) for a in X_idx]
    reg = zhang_regular_check(B)
    if not reg.is_regular or B.n != 2:
        return CoherenceCertificate("rnci", "contradiction", pres,
                                    "the two-generator quotient is not regular", R, W, A2, X, B, None, reg)
    sf = strongly_free_check(A2, X, D)
    if not sf.certified:
        return CoherenceCertificate("rnci", "withheld", pres,
                                    f"X is not strongly free: defect {sf.defect} in degree {sf.degree}",
                                    R, W, A2, X, B, sf, reg)
    return CoherenceCertificate("rnci", "certified", pres, "", R, W, A2, X, B, sf, reg)


def _weighted_rnci(pres: AlgebraPresentation, D: int, limit: int = 5000) -> CoherenceCertificate:
    """Search weight-preserving base changes whose two-generator quotient
    (lowest and highest weight) is regular."""
    F = pres.field
    n = pres.n
    weights = pres.weights
    lo, hi = weights[0], weights[-1]
    low = [i for i in range(n) if weights[i] == lo]
    high = [i for i in range(n) if weights[i] == hi]
    vl = list(_candidate_vectors(F, len(low), (0, 1, -1)))
    vh = list(_candidate_vectors(F, len(high), (0, 1, -1)))
    tried = 0
    for a in vl:
        for c in vh:
            tried += 1
            if tried > limit:
                break
            R = [[0] * n for _ in range(n)]
            for i in range(n):
                R[i][i] = 1
            for block, v in ((low, a), (high, c)):
                sub = complete_basis(F, [list(v)])
                for r, gi in enumerate(block):
                    for s, gj in enumerate(block):
                        R[gi][gj] = sub[r][s]
            keep = [low[0], high[0]]
            names = _new_names(pres)
            B = _quotient(_substitute(pres, R, names), keep)
            if len(B.relations) == 1 and zhang_regular_check(B).is_regular:
                return _finish_rnci(pres, R, keep, D)
    return CoherenceCertificate(
        "rnci", "contradiction", pres,
        f"no weight-preserving projection with a regular quotient among {min(tried, limit)} candidates; "
        "the top pair has rank at most one, which contradicts regularity")


def sf_tor_identity(cert: CoherenceCertificate, D: int) -> bool:
    """Tor_1^A(k,k) + Tor_2^B(k,k) == Tor_1^B(k,k) + Tor_2^A(k,k) + kX as graded dimensions."""
    A, B = cert.transformed, cert.B
    ta = augmentation_betti(A, D)
    tb = augmentation_betti(B, D)
    xs = x_series(A, cert.X, D)
    for d in range(D + 1):
        lhs = ta.tor1.get(d, 0) + tb.tor2.get(d, 0)
        rhs = tb.tor1.get(d, 0) + ta.tor2.get(d, 0) + xs[d]
        if lhs != rhs:
            return False
    return True


# --------------------------------------------------------------------------
# free bases of strongly free ideals


@dataclass
class FreeBasisVerdict:
    holds: bool
    degree: int  # verified through, or first failing degree
    actual: List[int]
    expected: List[int]
    explicit_degree: int = 0
    dependency: Optional[dict] = None

    def as_json(self):
        out = {"holds": self.holds, "degree": self.degree,
               "dim_I": self.actual, "expected": self.expected,
               "explicit_check_degree": self.explicit_degree}
        if self.dependency is not None:
            out["dependency"] = self.dependency
        return out


def ideal_free_basis_check(pres: AlgebraPresentation, X: Sequence[NcPolynomial], D: int = 10,
                           explicit: int = 5) -> FreeBasisVerdict:
    """Check that I = (X) is a free right module on B'X (B' lifted normal words of B = A/I).

    The dimension identity dim I_d = [H_B X(z) H_A]_d is checked through D, the
    explicit independence and spanning of B'X A through degree ``explicit``.
    """
    HA, gbA = hilbert_series(pres, D)
    HB, gbB = hilbert_series(pres, D, extra=X)
    actual = [a - b for a, b in zip(HA, HB)]
    expected = list((HB * x_series(pres, X, D) * HA).coeffs)
    bad = next((d for d in range(D + 1) if actual[d] != expected[d]), None)
    if bad is not None:
        return FreeBasisVerdict(False, bad, actual, expected)
    explicit = min(explicit, D)
    F = pres.field
    weights = pres.weights
    xs = [(x.homogeneous_degree(weights), x) for x in X]
    for d in range(1, explicit + 1):
        E = Echelon(F, track=True)
        col: dict = {}
        for d1 in range(0, d):
            bw = normal_words(gbB, d1)
            for dx, x in xs:
                d3 = d - d1 - dx
                if d3 < 0:
                    continue
                aw = normal_words(gbA, d3)
                for u in bw:
                    left = NcPolynomial.word(F, u) * x
                    for v in aw:
                        img = gbA.reduce_terms((left * NcPolynomial.word(F, v)).terms)
                        vec = {col.setdefault(w, len(col)): c for w, c in img.items()}
                        tag = f"{'.'.join(map(str, u))}|{render_poly(x, pres.names)}|{'.'.join(map(str, v))}"
                        if not E.add(vec, tag):
                            return FreeBasisVerdict(False, d, actual, expected, d - 1,
                                                    {k: F.to_json(c) for k, c in E.last_dependency.items()})
        if E.rank != actual[d]:
            return FreeBasisVerdict(False, d, actual, expected, d - 1)
    return FreeBasisVerdict(True, D, actual, expected, explicit)


# --------------------------------------------------------------------------
# non-Noetherian witness


@dataclass
class ChainReport:
    n: int
    t_max: int
    D: int
    quotient_dims: Dict[int, List[int]]  # t -> dim (I_t / I_{t-1})_d, d = 0..D
    strictly_ascending: bool

    @property
    def verdict(self) -> str:
        if self.strictly_ascending:
            return f"strictly ascending with infinite-dimensional quotients (evidence to degree {self.D})"
        return "no strict ascent detected"

    def as_json(self):
        return {"n": self.n, "t_max": self.t_max, "degree": self.D,
                "quotient_dims": {str(t): v for t, v in self.quotient_dims.items()},
                "verdict": self.verdict}


def cyclic_presentation(n: int, field: Field) -> AlgebraPresentation:
    """k<x1..xn | x1 x2 + x2 x3 + ... + xn x1>."""
    terms = {(i, (i + 1) % n): 1 for i in range(n)}
    return build_presentation(field, [(f"x{i + 1}", 1) for i in range(n)], [NcPolynomial(field, terms)])


def chain_witness(n: int, t_max: int, D: int, field: Field | None = None) -> ChainReport:
    """Right ideals I_t = (x1 x3, x1^2 x3, ..., x1^t x3) in the cyclic algebra."""
    from .field import QQ
    if n < 3:
        raise ValueError("the chain witness requires n >= 3")
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    if D < t_max + 3:
        raise ValueError(f"degree bound {D} must be at least t_max + 3 = {t_max + 3}")
    F = field or QQ
    A = cyclic_presentation(n, F)
    gb = two_sided_gb(A, bound=D)
    gens = [NcPolynomial.word(F, (0,) * s + (2,)) for s in range(1, t_max + 1)]
    prev = [0] * (D + 1)
    out = {}
    ok = True
    for t in range(1, t_max + 1):
        rg = right_gb(gens[:t], gb, D)
        dims = rg.dimensions(D)
        q = [a - b for a, b in zip(dims, prev)]
        out[t] = q
        if any(q[d] < 1 for d in range(t + 2, D + 1)):
            ok = False
        prev = dims
    return ChainReport(n, t_max, D, out, ok)
