"""Relations as tensors: rank, factorization, rank-2 projections, regularity,
Koszul duals and Zhang twists."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .field import Field
from .groebner import two_sided_gb
from .linalg import DegreeMatrix, matrix_rank, mat_inverse, rank_of, rref
from .poly import NcPolynomial, Word
from .presentation import AlgebraPresentation, build_presentation, render_poly


class RankError(ValueError):
    pass


# --------------------------------------------------------------------------
# tensors


@dataclass(frozen=True)
class QuadraticTensor:
    """b = sum_{i,j} M[i][j] x_i x_j over ``field``."""

    field: Field
    matrix: Tuple[Tuple[object, ...], ...]

    @classmethod
    def of(cls, F: Field, rows) -> "QuadraticTensor":
        return cls(F, tuple(tuple(F(x) for x in r) for r in rows))

    @classmethod
    def from_poly(cls, p: NcPolynomial, n: int, letters: Sequence[int] | None = None) -> "QuadraticTensor":
        """Coefficient matrix of the length-2 part of ``p``; ``letters`` selects
        (and orders) the generators spanning the tensor factors."""
        letters = list(range(n)) if letters is None else list(letters)
        pos = {a: i for i, a in enumerate(letters)}
        m = len(letters)
        M = [[0] * m for _ in range(m)]
        for w, c in p.terms.items():
            if len(w) == 2 and w[0] in pos and w[1] in pos:
                M[pos[w[0]]][pos[w[1]]] = c
        return cls(p.field, tuple(tuple(r) for r in M))

    @property
    def n(self) -> int:
        return len(self.matrix)

    def to_poly(self, letters: Sequence[int] | None = None) -> NcPolynomial:
        letters = list(range(self.n)) if letters is None else list(letters)
        terms = {}
        for i, row in enumerate(self.matrix):
            for j, c in enumerate(row):
                if c != 0:
                    terms[(letters[i], letters[j])] = c
        return NcPolynomial(self.field, terms)

    def project(self, P) -> "QuadraticTensor":
        """Image under the linear map with matrix P (rows = coordinate functionals): P M P^T."""
        F = self.field
        M = self.matrix
        n = self.n
        PM = [[F.norm(sum(P[a][i] * M[i][j] for i in range(n))) for j in range(n)] for a in range(len(P))]
        out = [[F.norm(sum(PM[a][j] * P[b][j] for j in range(n))) for b in range(len(P))] for a in range(len(P))]
        return QuadraticTensor(F, tuple(tuple(r) for r in out))


def tensor_rank(t: QuadraticTensor) -> int:
    """Minimal r with b = l_1 a_1 + ... + l_r a_r, l_i linear: the rank of M."""
    return matrix_rank(t.field, t.matrix)


def relation_rank(b: NcPolynomial, n: int) -> int:
    """Rank of an arbitrary homogeneous element: dim span of its left cofactors."""
    cof = left_cofactors(b, n)
    index: dict = {}
    vecs = [{index.setdefault(w, len(index)): c for w, c in cof[i].terms.items()} for i in range(n)]
    return rank_of(b.field, vecs)


def left_cofactors(b: NcPolynomial, n: int) -> List[NcPolynomial]:
    """The unique c_i with b = sum_i x_i c_i (plus a constant term, which must be absent)."""
    parts: List[dict] = [dict() for _ in range(n)]
    for w, c in b.terms.items():
        if not w:
            raise ValueError("element has a constant term")
        parts[w[0]][w[1:]] = c
    return [NcPolynomial(b.field, p) for p in parts]


def right_cofactors(b: NcPolynomial, n: int) -> List[NcPolynomial]:
    """The unique c'_i with b = sum_i c'_i x_i."""
    parts: List[dict] = [dict() for _ in range(n)]
    for w, c in b.terms.items():
        if not w:
            raise ValueError("element has a constant term")
        parts[w[-1]][w[:-1]] = c
    return [NcPolynomial(b.field, p) for p in parts]


def rank_one_factor(t: QuadraticTensor):
    """Vectors (u, v) with b = (sum u_i x_i)(sum v_j x_j)."""
    r = tensor_rank(t)
    if r != 1:
        raise RankError(f"tensor has rank {r}, not 1")
    F = t.field
    M = t.matrix
    ri = next(i for i, row in enumerate(M) if any(x != 0 for x in row))
    v = list(M[ri])
    c = next(j for j, x in enumerate(v) if x != 0)
    inv = F.inv(v[c])
    u = [F.norm(M[i][c] * inv) for i in range(t.n)]
    return tuple(u), tuple(v)


# --------------------------------------------------------------------------
# rank-2 projections


@dataclass
class Rank2Projection:
    P: Tuple[tuple, tuple]  # 2 x n: coordinates of V -> V/W
    W: List[tuple]  # basis of ker P, n-2 vectors
    reduced: QuadraticTensor  # b' = P M P^T
    stage: str
    tried: int

    def as_json(self, F: Field):
        return {
            "P": [[F.to_json(x) for x in r] for r in self.P],
            "W": [[F.to_json(x) for x in w] for w in self.W],
            "b_prime": [[F.to_json(x) for x in r] for r in self.reduced.matrix],
            "search_stage": self.stage,
            "candidates_tried": self.tried,
        }


_COEFF_ORDER = (0, 1, -1, 2, -2, 3, -3)


def _candidate_vectors(F: Field, n: int, coeffs: Sequence[int]):
    """Nonzero vectors over ``coeffs`` with first nonzero entry 1, by support size then
    lexicographically in the given coefficient order."""
    seen = set()
    vals = [c for c in coeffs if c != 0]
    for size in range(1, n + 1):
        for support in itertools.combinations(range(n), size):
            for tail in itertools.product(vals, repeat=size - 1):
                v = [0] * n
                v[support[0]] = 1
                for pos, c in zip(support[1:], tail):
                    v[pos] = c
                v = tuple(F(x) for x in v)
                if any(v[i] == 0 for i in support):
                    continue  # coefficient vanished mod p
                if v not in seen:
                    seen.add(v)
                    yield v


def _det2(F, a, b, c, d):
    return F.norm(a * d - b * c)


def _search_pairs(t: QuadraticTensor, vectors: List[tuple], limit: int | None = None):
    F = t.field
    M = t.matrix
    n = t.n
    vM = [tuple(F.norm(sum(v[i] * M[i][j] for i in range(n))) for j in range(n)) for v in vectors]

    def q(a, b):
        return F.norm(sum(vM[a][j] * vectors[b][j] for j in range(n)))

    diag = [q(a, a) for a in range(len(vectors))]
    tried = 0
    for a in range(len(vectors)):
        for b in range(a + 1, len(vectors)):
            tried += 1
            if limit is not None and tried > limit:
                return None, tried
            if _det2(F, diag[a], q(a, b), q(b, a), diag[b]) != 0:
                return (a, b), tried
    return None, tried


def rank2_subspace(t: QuadraticTensor, seed: int = 0, random_tries: int = 20000) -> Rank2Projection:
    """Find P (2 x n) with rank(P M P^T) = 2; W = ker P.

    Candidate rows are enumerated deterministically over {0, +-1}, then over
    {0, +-1, +-2, +-3}, then drawn from a seeded generator (exhaustively for
    small finite fields).
    """
    F = t.field
    n = t.n
    if n < 2:
        raise RankError("need at least two generators")
    r = tensor_rank(t)
    if r < 2:
        raise RankError(f"tensor has rank {r} < 2; use rank_one_factor")
    total = 0
    for stage, coeffs in (("coeffs{0,+-1}", _COEFF_ORDER[:3]), ("coeffs{0,..,+-3}", _COEFF_ORDER)):
        vecs = list(_candidate_vectors(F, n, coeffs))
        hit, tried = _search_pairs(t, vecs, limit=2_000_000)
        total += tried
        if hit:
            return _finish(t, (vecs[hit[0]], vecs[hit[1]]), stage, total)
    rng = random.Random(seed)
    if F.p and F.p ** n <= 4096:
        vecs = list(_candidate_vectors(F, n, list(range(F.p))))
        hit, tried = _search_pairs(t, vecs)
        total += tried
        if hit:
            return _finish(t, (vecs[hit[0]], vecs[hit[1]]), "exhaustive", total)
    else:
        for _ in range(random_tries):
            if F.p:
                a = tuple(rng.randrange(F.p) for _ in range(n))
                b = tuple(rng.randrange(F.p) for _ in range(n))
            else:
                a = tuple(rng.randint(-10, 10) for _ in range(n))
                b = tuple(rng.randint(-10, 10) for _ in range(n))
            total += 1
            red = t.project((a, b))
            if tensor_rank(red) == 2:
                return _finish(t, (a, b), "random", total)
    raise RankError("no rank-2 projection found")  # pragma: no cover


def _finish(t: QuadraticTensor, P, stage, tried) -> Rank2Projection:
    F = t.field
    P = (tuple(F(x) for x in P[0]), tuple(F(x) for x in P[1]))
    red = t.project(P)
    assert tensor_rank(red) == 2, "rank-2 projection postcondition violated"
    ker = rref(DegreeMatrix(F, P), with_kernel=True).kernel
    return Rank2Projection(P, ker, red, stage, tried)


def complete_basis(F: Field, P) -> List[list]:
    """Extend the rows of P (full row rank) to an invertible square matrix with unit rows."""
    n = len(P[0])
    rows = [list(r) for r in P]
    for i in range(n):
        if len(rows) == n:
            break
        e = [1 if j == i else 0 for j in range(n)]
        if matrix_rank(F, rows + [e]) == len(rows) + 1:
            rows.append(e)
    return rows


# --------------------------------------------------------------------------
# graded automorphisms and regularity


@dataclass
class GradedAutomorphism:
    """Images of the generators; graded means each image is homogeneous of the
    generator's weight."""

    field: Field
    weights: Tuple[int, ...]
    images: Tuple[NcPolynomial, ...]

    def check_graded(self) -> bool:
        for i, p in enumerate(self.images):
            if p.is_zero() or p.homogeneous_degree(self.weights) != self.weights[i]:
                return False
        return True

    def linear_part(self, w: int):
        """Matrix of the induced map on the weight-w generator span modulo decomposables."""
        idx = [i for i, d in enumerate(self.weights) if d == w]
        return idx, [[self.images[i].terms.get((j,), 0) for j in idx] for i in idx]

    def is_invertible(self) -> bool:
        if not self.check_graded():
            return False
        for w in sorted(set(self.weights)):
            idx, L = self.linear_part(w)
            if matrix_rank(self.field, L) != len(idx):
                return False
        return True

    def apply(self, p: NcPolynomial) -> NcPolynomial:
        F = self.field
        out = NcPolynomial.zero(F)
        cache: Dict[Word, NcPolynomial] = {}
        for w, c in p.terms.items():
            img = cache.get(w)
            if img is None:
                img = NcPolynomial.one(F)
                for a in w:
                    img = img * self.images[a]
                cache[w] = img
            out = out + img.scale(c)
        return out

    def compose(self, other: "GradedAutomorphism") -> "GradedAutomorphism":
        """self o other."""
        return GradedAutomorphism(self.field, self.weights, tuple(self.apply(q) for q in other.images))

    def inverse(self) -> "GradedAutomorphism":
        F = self.field
        if not self.is_invertible():
            raise ValueError("automorphism is not invertible")
        n = len(self.weights)
        inv_images: List[Optional[NcPolynomial]] = [None] * n
        for w in sorted(set(self.weights)):
            idx, L = self.linear_part(w)
            A = mat_inverse(F, L)
            # nonlinear remainders N_k of the images, rewritten through the inverse
            partial = GradedAutomorphism(
                F, self.weights,
                tuple(inv_images[i] if inv_images[i] is not None else NcPolynomial.word(F, (i,))
                      for i in range(n)),
            )
            N = []
            for k in idx:
                rest = {u: c for u, c in self.images[k].terms.items() if not (len(u) == 1 and u[0] in idx)}
                N.append(partial.apply(NcPolynomial(F, rest)))
            for r, j in enumerate(idx):
                acc = NcPolynomial.zero(F)
                for s, k in enumerate(idx):
                    a = A[r][s]
                    if a != 0:
                        acc = acc + (NcPolynomial.word(F, (k,)) - N[s]).scale(a)
                inv_images[j] = acc
        return GradedAutomorphism(F, self.weights, tuple(inv_images))

    def power(self, m: int) -> "GradedAutomorphism":
        F = self.field
        base = self if m >= 0 else self.inverse()
        out = identity_automorphism(F, self.weights)
        for _ in range(abs(m)):
            out = base.compose(out)
        return out

    def render(self, names) -> Dict[str, str]:
        return {names[i]: render_poly(p, names) for i, p in enumerate(self.images)}


def identity_automorphism(F: Field, weights) -> GradedAutomorphism:
    return GradedAutomorphism(F, tuple(weights), tuple(NcPolynomial.word(F, (i,)) for i in range(len(weights))))


def diagonal_automorphism(F: Field, weights, scalars) -> GradedAutomorphism:
    return GradedAutomorphism(
        F, tuple(weights), tuple(NcPolynomial.word(F, (i,), s) for i, s in enumerate(scalars))
    )


def sigma_from_relation(b: NcPolynomial, weights) -> GradedAutomorphism:
    """sigma(x_{n+1-i}) := c_i from the left cofactor decomposition b = sum x_i c_i."""
    n = len(weights)
    c = left_cofactors(b, n)
    return GradedAutomorphism(b.field, tuple(weights), tuple(c[n - 1 - j] for j in range(n)))


def tau_from_relation(b: NcPolynomial, weights) -> GradedAutomorphism:
    """tau(x_{n+1-i}) := c'_i from the right cofactor decomposition b = sum c'_i x_i."""
    n = len(weights)
    c = right_cofactors(b, n)
    return GradedAutomorphism(b.field, tuple(weights), tuple(c[n - 1 - j] for j in range(n)))


@dataclass
class RegularityReport:
    is_regular: bool
    n: int
    rank: int
    degree_pairing_ok: bool
    sigma: Optional[GradedAutomorphism] = None
    tau: Optional[GradedAutomorphism] = None
    tau_status: str = "n/a"  # "ok", "inconclusive" or "n/a"
    gorenstein_shift: Optional[int] = None
    reason: str = ""

    @property
    def noetherian(self) -> Optional[bool]:
        return (self.n == 2) if self.is_regular else None

    def as_json(self, names):
        out = {
            "is_regular": self.is_regular,
            "n": self.n,
            "rank": self.rank,
            "degree_pairing_ok": self.degree_pairing_ok,
            "gorenstein_shift": self.gorenstein_shift,
            "noetherian": self.noetherian,
            "tau_status": self.tau_status,
        }
        if self.sigma is not None:
            out["sigma"] = self.sigma.render(names)
        if self.tau is not None:
            out["tau"] = self.tau.render(names)
        if self.reason:
            out["reason"] = self.reason
        return out


def zhang_regular_check(pres: AlgebraPresentation) -> RegularityReport:
    """Regularity of global dimension 2 for a one-relator presentation."""
    n = pres.n
    if len(pres.relations) != 1:
        return RegularityReport(False, n, 0, False, reason=f"{len(pres.relations)} relations (need exactly one)")
    b = pres.relations[0]
    weights = pres.weights
    db = b.homogeneous_degree(weights)
    rank = relation_rank(b, n)
    pairing = all(db == weights[i] + weights[n - 1 - i] for i in range(n))
    if n < 2:
        return RegularityReport(False, n, rank, pairing, gorenstein_shift=db, reason="fewer than two generators")
    if not pairing:
        return RegularityReport(False, n, rank, False, gorenstein_shift=db,
                                reason="deg b != deg x_i + deg x_{n+1-i} for some i")
    sigma = sigma_from_relation(b, weights)
    if not sigma.check_graded() or not sigma.is_invertible():
        return RegularityReport(False, n, rank, True, sigma=None, gorenstein_shift=db,
                                reason=f"left-factor map is not a graded automorphism (rank {rank} < n = {n})"
                                if rank < n else "left-factor map is not a graded automorphism")
    tau = tau_from_relation(b, weights)
    tau_ok = tau.check_graded() and tau.is_invertible()
    return RegularityReport(True, n, rank, True, sigma=sigma, tau=tau if tau_ok else None,
                            tau_status="ok" if tau_ok else "inconclusive", gorenstein_shift=db)


# --------------------------------------------------------------------------
# Koszul dual


class UnsupportedPresentation(ValueError):
    pass


def koszul_dual(pres: AlgebraPresentation, suffix: str = "'") -> AlgebraPresentation:
    """Quadratic dual: relations = orthogonal complement under <x_i x_j, y_k y_l> = delta."""
    if not pres.degree_one_generated:
        raise UnsupportedPresentation("Koszul dual needs degree-one generators")
    if any(d != 2 for d in pres.relation_degrees()):
        raise UnsupportedPresentation("Koszul dual needs quadratic relations")
    F = pres.field
    n = pres.n
    rows = []
    for r in pres.relations:
        v = [0] * (n * n)
        for (i, j), c in r.terms.items():
            v[i * n + j] = c
        rows.append(v)
    if rows:
        kernel = rref(DegreeMatrix(F, tuple(tuple(r) for r in rows)), with_kernel=True).kernel
    else:
        kernel = [tuple(1 if k == m else 0 for k in range(n * n)) for m in range(n * n)]
    rels = []
    for v in kernel:
        terms = {(k // n, k % n): c for k, c in enumerate(v) if c != 0}
        rels.append(NcPolynomial(F, terms))
    gens = [(g.name + suffix, 1) for g in pres.generators]
    return build_presentation(F, gens, rels)


def same_relation_space(a: AlgebraPresentation, b: AlgebraPresentation) -> bool:
    """True when the two presentations (same generator count) have equal relation spans."""
    if a.n != b.n or a.field != b.field or a.weights != b.weights:
        return False
    index: dict = {}

    def vecs(p):
        return [{index.setdefault(w, len(index)): c for w, c in r.terms.items()} for r in p.relations]

    va, vb = vecs(a), vecs(b)
    ra, rb = rank_of(a.field, va), rank_of(a.field, vb)
    return ra == rb == rank_of(a.field, va + vb)


# --------------------------------------------------------------------------
# Zhang twists


class TwistError(ValueError):
    pass


def twist_word_map(sigma: GradedAutomorphism, w: Word) -> NcPolynomial:
    """x_{i1} x_{i2} ... -> x_{i1} sigma^{d1}(x_{i2}) sigma^{d1+d2}(x_{i3}) ..."""
    F = sigma.field
    weights = sigma.weights
    out = NcPolynomial.one(F)
    shift = 0
    powers: Dict[int, GradedAutomorphism] = {0: identity_automorphism(F, weights)}
    for a in w:
        if shift not in powers:
            powers[shift] = sigma.power(shift)
        out = out * powers[shift].images[a]
        shift += weights[a]
    return out


def zhang_twist(pres: AlgebraPresentation, sigma: GradedAutomorphism,
                check: bool = True) -> AlgebraPresentation:
    """Presentation of the twist with multiplication a * b = a sigma^{deg a}(b).

    A free-algebra element f is a relation of the twist iff its image under
    x_{i1} x_{i2} ... -> x_{i1} sigma^{d1}(x_{i2}) ... lies in the ideal of A,
    so each relation r of A is pulled back through the same map for sigma^{-1}.
    """
    F = pres.field
    if sigma.weights != pres.weights:
        raise TwistError("automorphism weights do not match the presentation")
    if not sigma.is_invertible():
        raise TwistError("sigma is not a graded automorphism")
    if check:
        D = pres.max_relation_degree()
        gb = two_sided_gb(pres, bound=max(D, 2))
        for r in pres.relations:
            if gb.reduce_terms(sigma.apply(r).terms):
                raise TwistError("sigma does not preserve the relation ideal")
    inv = sigma.inverse()
    rels = []
    for r in pres.relations:
        out = NcPolynomial.zero(F)
        for w, c in r.terms.items():
            out = out + twist_word_map(inv, w).scale(c)
        rels.append(out)
    return build_presentation(F, [(g.name, g.weight) for g in pres.generators], rels)


def find_diagonal_twist(a: AlgebraPresentation, b: AlgebraPresentation) -> Optional[GradedAutomorphism]:
    """A diagonal sigma with zhang_twist(a, sigma) == b, for one-relator quadratic a, b.

    Twisting by diag(l_1..l_n) turns M[i][j] into M[i][j] / l_j (up to scaling),
    so each column ratio M_a[i][j] / M_b[i][j] must be constant.
    """
    if a.n != b.n or len(a.relations) != 1 or len(b.relations) != 1:
        return None
    if not (a.degree_one_generated and b.degree_one_generated):
        return None
    if a.relation_degrees() != [2] or b.relation_degrees() != [2]:
        return None
    F = a.field
    n = a.n
    Ma = QuadraticTensor.from_poly(a.relations[0], n).matrix
    Mb = QuadraticTensor.from_poly(b.relations[0], n).matrix
    lam = []
    for j in range(n):
        ratio = None
        for i in range(n):
            x, y = Ma[i][j], Mb[i][j]
            if (x == 0) != (y == 0):
                return None
            if x != 0:
                rj = F.div(x, y)
                if ratio is None:
                    ratio = rj
                elif ratio != rj:
                    return None
        lam.append(1 if ratio is None else ratio)
    # the scale of lambda is free: prefer lambda_1 = 1, then the raw ratios
    first = lam[0]
    for cand in ([F.div(x, first) for x in lam], lam):
        sigma = diagonal_automorphism(F, a.weights, cand)
        try:
            tw = zhang_twist(a, sigma)
        except TwistError:
            continue
        if tw == b:
            return sigma
    return None
