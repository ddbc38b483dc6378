"""Truncated Hom and Ext over connected graded algebras, and the invariants of
the associated noncommutative projective scheme.

Shift convention: M[s]_e = M_{s+e}, so the free module A[-d] has its
generator in degree d.  Hom of internal degree j sends M_e to N_{e+j}.
Ext degrees of the residue field are reported by s = -j, the degree of the
corresponding generator of the minimal resolution.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .groebner import normal_words, two_sided_gb
from .hilbert import EulerTest, euler_poly_test, hilbert_series
from .linalg import Echelon
from .order import MonomialOrder
from .poly import NcPolynomial, Word, word_degree
from .presentation import AlgebraPresentation
from .quadratic import (
    GradedAutomorphism,
    TwistError,
    left_cofactors,
    same_relation_space,
    zhang_regular_check,
    zhang_twist,
    find_diagonal_twist,
)

CONVENTION = "M[s]_e = M_{s+e}; Hom of degree j maps M_e to N_{e+j}"


class WindowError(ValueError):
    pass


def finite_order(pres: AlgebraPresentation, bound: int) -> MonomialOrder:
    """A deg-lex order whose Groebner basis is finite, when one of the
    precedences gives that; otherwise the default order."""
    default = pres.default_order()
    if two_sided_gb(pres, default, bound=bound).complete or pres.n > 6:
        return default
    for perm in itertools.permutations(range(pres.n)):
        order = MonomialOrder.deglex(pres.weights, perm)
        if two_sided_gb(pres, order, bound=bound).complete:
            return order
    return default


class Algebra:
    """A presentation with a Groebner basis and cached normal forms."""

    def __init__(self, pres: AlgebraPresentation, bound: int, order: MonomialOrder | None = None):
        self.pres = pres
        self.order = order or finite_order(pres, max(bound, pres.max_relation_degree()))
        self.gb = two_sided_gb(pres, self.order, bound=max(bound, pres.max_relation_degree()))
        self.bound = bound
        self._nf: Dict[Word, dict] = {}
        self._words: Dict[int, List[Word]] = {}

    @property
    def F(self):
        return self.pres.field

    @property
    def weights(self):
        return self.pres.weights

    def require(self, d):
        self.gb.require(d, "module computation")

    def words(self, d: int) -> List[Word]:
        if d < 0:
            return []
        ws = self._words.get(d)
        if ws is None:
            self.require(d)
            ws = normal_words(self.gb, d)
            self._words[d] = ws
        return ws

    def dim(self, d: int) -> int:
        return len(self.words(d))

    def nf(self, w: Word) -> dict:
        r = self._nf.get(w)
        if r is None:
            r = self.gb.reduce_terms({w: 1})
            self._nf[w] = r
        return r


# --------------------------------------------------------------------------
# modules


@dataclass
class _Slice:
    cols: Dict[Tuple[int, Word], int]
    relations: Echelon

    @property
    def basis(self) -> List[Tuple[int, Word]]:
        piv = self.relations.rows
        return [k for k, c in self.cols.items() if c not in piv]

    @property
    def dim(self) -> int:
        return len(self.cols) - self.relations.rank


class TruncatedGradedModule:
    """Right module coker(sum_k A[-r_k] -> sum_i A[-g_i]) over ``alg``.

    ``relations`` holds one dict per relation: generator index -> homogeneous
    coefficient, so relation k is sum_i e_i * rel[k][i].  Slices are computed
    on demand for degrees in ``window``.
    """

    def __init__(self, alg: Algebra, gen_degrees: Sequence[int],
                 relations: Sequence[Dict[int, NcPolynomial]] = (), window: Tuple[int, int] | None = None,
                 name: str = ""):
        self.alg = alg
        self.gen_degrees = list(gen_degrees)
        self.relations = [dict(r) for r in relations]
        self.rel_degrees = []
        for r in self.relations:
            degs = {self.gen_degrees[i] + p.homogeneous_degree(alg.weights) for i, p in r.items() if p}
            if len(degs) != 1:
                raise ValueError("module relation is not homogeneous")
            self.rel_degrees.append(degs.pop())
        self.window = window
        self.name = name
        self._slices: Dict[int, _Slice] = {}

    # constructors
    @classmethod
    def free(cls, alg: Algebra, degrees: Sequence[int], name="free"):
        return cls(alg, degrees, (), None, name)

    @classmethod
    def residue_field(cls, alg: Algebra):
        F = alg.F
        rels = [{0: NcPolynomial.word(F, (a,))} for a in range(alg.pres.n)]
        return cls(alg, [0], rels, None, "k")

    def shift(self, s: int) -> "TruncatedGradedModule":
        """M[s]: the generator of degree g moves to degree g - s."""
        return TruncatedGradedModule(self.alg, [g - s for g in self.gen_degrees], self.relations,
                                     self.window, f"{self.name}[{s}]")

    def direct_sum(self, other: "TruncatedGradedModule") -> "TruncatedGradedModule":
        k = len(self.gen_degrees)
        rels = self.relations + [{i + k: p for i, p in r.items()} for r in other.relations]
        return TruncatedGradedModule(self.alg, self.gen_degrees + other.gen_degrees, rels, None,
                                     f"{self.name}+{other.name}")

    @property
    def lowest_degree(self) -> int:
        return min(self.gen_degrees)

    @property
    def is_finite_length(self) -> bool:
        return False

    # slices
    def _check_window(self, e):
        if self.window is not None and not (self.window[0] <= e <= self.window[1]):
            lo, hi = self.window
            raise WindowError(f"degree {e} outside the module window [{lo}, {hi}]; widen the window to include it")

    def slice(self, e: int) -> _Slice:
        s = self._slices.get(e)
        if s is not None:
            return s
        self._check_window(e)
        alg = self.alg
        cols: Dict[Tuple[int, Word], int] = {}
        for i, g in enumerate(self.gen_degrees):
            for u in alg.words(e - g):
                cols[(i, u)] = len(cols)
        E = Echelon(alg.F)
        for k, r in enumerate(self.relations):
            rd = self.rel_degrees[k]
            for v in alg.words(e - rd):
                vec = self._free_product(r, v, cols)
                if vec:
                    E.add(vec)
        s = _Slice(cols, E)
        self._slices[e] = s
        return s

    def _free_product(self, r: Dict[int, NcPolynomial], v: Word, cols) -> dict:
        """Coordinates of sum_i e_i * r[i] * v in the free module slice."""
        alg = self.alg
        F = alg.F
        out: dict = {}
        for i, p in r.items():
            for w, c in p.terms.items():
                for t, x in alg.nf(w + v).items():
                    col = cols[(i, t)]
                    y = F.norm(out.get(col, 0) + c * x)
                    if y == 0:
                        out.pop(col, None)
                    else:
                        out[col] = y
        return out

    def dim(self, e: int) -> int:
        return self.slice(e).dim

    def act(self, elem: Dict[Tuple[int, Word], object], p: NcPolynomial, e: int) -> dict:
        """elem (free coordinates (i, u) -> c, degree e) times p, reduced in the target slice.

        Returns column-indexed coordinates of the target slice."""
        alg = self.alg
        F = alg.F
        d = p.homogeneous_degree(alg.weights)
        tgt = self.slice(e + d)
        out: dict = {}
        for (i, u), c in elem.items():
            for w, a in p.terms.items():
                for t, x in alg.nf(u + w).items():
                    col = tgt.cols[(i, t)]
                    y = F.norm(out.get(col, 0) + c * a * x)
                    if y == 0:
                        out.pop(col, None)
                    else:
                        out[col] = y
        if tgt.relations.rank:
            out = tgt.relations.reduce(out)
        return out


def truncated_hom(M: TruncatedGradedModule, N: TruncatedGradedModule, j: int) -> int:
    """dim Hom_A(M, N)_j: images of M's generators in N subject to M's relations."""
    F = M.alg.F
    unknowns = []
    for i, g in enumerate(M.gen_degrees):
        for b in N.slice(g + j).basis:
            unknowns.append((i, b))
    if not unknowns:
        return 0
    by_gen: Dict[int, List[Tuple[int, NcPolynomial]]] = {}
    for k, r in enumerate(M.relations):
        for i, p in r.items():
            by_gen.setdefault(i, []).append((k, p))
    E = Echelon(F)
    offsets: Dict[Tuple[int, int], int] = {}
    for i, b in unknowns:
        g = M.gen_degrees[i]
        vec: dict = {}
        for k, p in by_gen.get(i, []):
            img = N.act({b: 1}, p, g + j)
            for col, x in img.items():
                key = offsets.setdefault((k, col), len(offsets))
                vec[key] = x
        if vec:
            E.add(vec)
    return len(unknowns) - E.rank


# --------------------------------------------------------------------------
# tails of A


def truncation(alg: Algebra, m: int) -> TruncatedGradedModule:
    """A_{>=m} presented on the normal words whose shortest prefix of degree >= m is the whole word.

    Relations come from the obstructions g * t where a leading word of the
    ambient basis starts inside g and ends at the end of t.
    """
    F = alg.F
    weights = alg.weights
    maxw = max(weights)
    gens: List[Word] = []
    for d in range(m, m + maxw):
        for w in alg.words(d):
            if not w or word_degree(w[:-1], weights) < m:
                gens.append(w)
    if m == 0:
        gens = [()]
    index = {g: i for i, g in enumerate(gens)}

    def split(w: Word) -> Tuple[int, Word]:
        acc = 0
        for k, a in enumerate(w):
            if acc >= m:
                return index[w[:k]], w[k:]
            acc += weights[a]
        return index[w], ()

    lws = alg.gb.leading_words
    rels = []
    if m > 0:
        for g in gens:
            for h in lws:
                for k in range(1, min(len(g), len(h) - 1) + 1):
                    if g[len(g) - k:] != h[:k]:
                        continue
                    t = h[k:]
                    rel: Dict[int, dict] = {index[g]: {t: F(1)}}
                    for w, c in alg.nf(g + t).items():
                        i, tail = split(w)
                        slot = rel.setdefault(i, {})
                        y = F.norm(slot.get(tail, 0) - c)
                        if y == 0:
                            slot.pop(tail, None)
                        else:
                            slot[tail] = y
                    rels.append({i: NcPolynomial(F, p) for i, p in rel.items() if p})
    return TruncatedGradedModule(alg, [word_degree(g, weights) for g in gens], rels, None, f"A>={m}")


def truncation_is_free_resolution(alg: Algebra, T: TruncatedGradedModule, m: int, top: int) -> bool:
    """Dimension check that T's relations form a free basis of the syzygies through degree ``top``.

    If the relations generate the syzygy module, equality of
    sum_g dim A_{d-g} - sum_r dim A_{d-r} with dim (A_{>=m})_d forces freeness.
    """
    for d in range(m, top + 1):
        expect = alg.dim(d)
        got = sum(alg.dim(d - g) for g in T.gen_degrees) - sum(alg.dim(d - r) for r in T.rel_degrees)
        if got != expect:
            return False
    return True


@dataclass
class HomStabilization:
    table: Dict[int, Dict[int, int]]  # j -> m -> value
    stabilized: Dict[int, bool]

    def value(self, j: int) -> Optional[int]:
        if not self.stabilized.get(j):
            return None
        row = self.table[j]
        return row[max(row)]

    def as_json(self):
        return {
            "convention": CONVENTION,
            "table": {str(j): {str(m): v for m, v in sorted(row.items())} for j, row in sorted(self.table.items())},
            "stabilized": {str(j): s for j, s in sorted(self.stabilized.items())},
        }


def m_values(j: int, start: int | None = None, count: int = 3) -> List[int]:
    """Tail cutoffs tried for internal degree j: max(0, -j) onwards, three values."""
    m0 = max(0, -j) if start is None else start
    return list(range(m0, m0 + count))


def _needed_degree(alg: Algebra, m: int, j: int) -> int:
    maxw = max(alg.weights)
    top_lw = max((word_degree(u, alg.weights) for u in alg.gb.leading_words), default=0)
    return max(m + maxw - 1 + top_lw + max(j, 0), m + maxw - 1 + max(j, 0))


def hom_tail_dims(alg: Algebra, js: Sequence[int], start: int | None = None) -> HomStabilization:
    """dim Hom_A(A_{>=m}, A)_j for each j over three consecutive m."""
    A = TruncatedGradedModule.free(alg, [0], "A")
    table: Dict[int, Dict[int, int]] = {}
    stab = {}
    cache: Dict[int, TruncatedGradedModule] = {}
    for j in js:
        row = {}
        for m in m_values(j, start):
            alg.require(_needed_degree(alg, m, j))
            T = cache.get(m)
            if T is None:
                T = cache[m] = truncation(alg, m)
            row[m] = truncated_hom(T, A, j)
        table[j] = row
        stab[j] = len(set(row.values())) == 1
    return HomStabilization(table, stab)


def ext1_tail_dims(alg: Algebra, js: Sequence[int], start: int | None = None) -> HomStabilization:
    """dim Ext^1_A(A_{>=m}, A)_j from the free presentation of A_{>=m}."""
    A = TruncatedGradedModule.free(alg, [0], "A")
    table: Dict[int, Dict[int, int]] = {}
    stab = {}
    cache: Dict[int, TruncatedGradedModule] = {}
    for j in js:
        row = {}
        ok = True
        for m in m_values(j, start):
            need = _needed_degree(alg, m, j)
            alg.require(need)
            T = cache.get(m)
            if T is None:
                T = cache[m] = truncation(alg, m)
            if not truncation_is_free_resolution(alg, T, m, min(need, alg.bound)):
                ok = False
            hom = truncated_hom(T, A, j)
            p0 = sum(alg.dim(g + j) for g in T.gen_degrees)
            p1 = sum(alg.dim(r + j) for r in T.rel_degrees)
            row[m] = p1 - (p0 - hom)
        table[j] = row
        stab[j] = ok and len(set(row.values())) == 1
    return HomStabilization(table, stab)


# --------------------------------------------------------------------------
# scheme-level checks


def _regular_or_raise(pres: AlgebraPresentation):
    rep = zhang_regular_check(pres)
    if not rep.is_regular:
        raise ValueError("expected a regular algebra of global dimension 2: " + (rep.reason or "not regular"))
    return rep


@dataclass
class GammaRecovery:
    holds: bool
    dims: List[Optional[int]]
    expected: List[int]
    table: HomStabilization

    def as_json(self):
        return {"holds": self.holds, "hom_dims": self.dims, "dim_A": self.expected,
                "stabilization": self.table.as_json()}


def gamma_recovery(pres: AlgebraPresentation, D: int, start: int | None = None) -> GammaRecovery:
    """Compare the stabilized dim Hom(A_{>=m}, A)_i with dim A_i for 0 <= i <= D."""
    alg = Algebra(pres, bound=3 + D + 2 * max(pres.weights) + pres.max_relation_degree() + 2)
    table = hom_tail_dims(alg, range(D + 1), start)
    dims = [table.value(i) for i in range(D + 1)]
    expected = [alg.dim(i) for i in range(D + 1)]
    return GammaRecovery(all(d == e for d, e in zip(dims, expected)), dims, expected, table)


@dataclass
class ChiResult:
    ext: Dict[int, Dict[int, int]]  # i -> s (= -j) -> dim, nonzero entries only
    window: Tuple[int, int]  # range of j examined
    finite: Dict[int, bool]
    gorenstein_shift: Optional[int] = None

    def totals(self) -> Dict[int, int]:
        return {i: sum(v.values()) for i, v in self.ext.items()}

    def as_json(self):
        return {
            "convention": CONVENTION + "; Ext degrees keyed by s = -j",
            "ext": {str(i): {str(s): c for s, c in sorted(v.items())} for i, v in self.ext.items()},
            "window_j": list(self.window),
            "finite": {str(i): f for i, f in self.finite.items()},
            "gorenstein_shift": self.gorenstein_shift,
        }


def chi_check(pres: AlgebraPresentation, M: TruncatedGradedModule | None = None, D: int = 4) -> ChiResult:
    """Graded dims of Ext^i(k, M), i = 0, 1, 2, from the length-two resolution of k.

    Hom(-, M) applied to 0 -> A[-deg b] -> sum A[-d_i] -> A -> k -> 0 gives
    M_j -> sum M_{d_i+j} -> M_{deg b+j}, m -> (m x_i), (m_i) -> sum m_i c_i
    where b = sum x_i c_i.
    """
    rep = _regular_or_raise(pres)
    b = pres.relations[0]
    db = rep.gorenstein_shift
    n = pres.n
    weights = pres.weights
    cof = left_cofactors(b, n)
    if M is None:
        alg = Algebra(pres, bound=max(D + db, db) + 2)
        M = TruncatedGradedModule.residue_field(alg)
    lo = M.lowest_degree - db
    hi = D
    F = pres.field
    xs = [NcPolynomial.word(F, (a,)) for a in range(n)]
    ext: Dict[int, Dict[int, int]] = {0: {}, 1: {}, 2: {}}
    for j in range(lo, hi + 1):
        c0 = M.slice(j)
        c1 = [M.slice(weights[a] + j) for a in range(n)]
        c2 = M.slice(db + j)
        # d0: M_j -> sum M_{d_a + j}
        E0 = Echelon(F)
        slots: Dict[Tuple[int, int], int] = {}
        for bcol in c0.basis:
            vec = {}
            for a in range(n):
                for col, x in M.act({bcol: 1}, xs[a], j).items():
                    vec[slots.setdefault((a, col), len(slots))] = x
            E0.add(vec)
        # d1: sum M_{d_a + j} -> M_{deg b + j}
        E1 = Echelon(F)
        for a in range(n):
            for bcol in c1[a].basis:
                if cof[a].is_zero():
                    continue
                img = M.act({bcol: 1}, cof[a], weights[a] + j)
                if img:
                    E1.add(img)
        dim0 = c0.dim
        dim1 = sum(s.dim for s in c1)
        dim2 = c2.dim
        r0, r1 = E0.rank, E1.rank
        vals = (dim0 - r0, dim1 - r1 - r0, dim2 - r1)
        for i, v in enumerate(vals):
            if v:
                ext[i][-j] = v
    # finite: nothing in the three highest internal degrees of the window
    finite = {i: all(-s < hi - 2 for s in ext[i]) for i in ext}
    return ChiResult(ext, (lo, hi), finite, db)


@dataclass
class CohomologyTable:
    h0: HomStabilization
    h1: HomStabilization
    fitted_shift: Optional[int]  # c with dim H^1_j = dim A_{c-j}
    dual_pattern_holds: bool

    def as_json(self):
        def row(t):
            return {str(j): t.value(j) for j in sorted(t.table)}

        return {"convention": CONVENTION, "H0": row(self.h0), "H1": row(self.h1),
                "H1_fitted_shift": self.fitted_shift, "H1_dual_pattern": self.dual_pattern_holds,
                "H0_stabilization": self.h0.as_json(), "H1_stabilization": self.h1.as_json()}


def cohomology_dims(pres: AlgebraPresentation, D: int = 4, js: Sequence[int] | None = None) -> CohomologyTable:
    """Stabilized dim H^0_j and H^1_j of the structure sheaf for -D <= j <= 2
    (or the given ``js``), with a fitted dual shift for H^1."""
    _regular_or_raise(pres)
    js = list(range(-D, 3)) if js is None else list(js)
    top = max(max(js), 0)
    deepest = max(0, -min(js))
    alg = Algebra(pres, bound=deepest + 3 + top + 2 * max(pres.weights) + pres.max_relation_degree() + 2)
    h0 = hom_tail_dims(alg, js)
    h1 = ext1_tail_dims(alg, js)
    vals = {j: h1.value(j) for j in js}
    fitted = None
    holds = False
    for c in range(-12, 13):
        if all(v is not None and v == (alg.dim(c - j) if c - j >= 0 else 0) for j, v in vals.items()):
            if any(v for v in vals.values()):
                fitted = c
                holds = True
                break
    return CohomologyTable(h0, h1, fitted, holds)


@dataclass
class SchemeInvariants:
    n: int
    hilbert_numerator: tuple
    hilbert_denominator: tuple
    kronecker_dims: Tuple[Optional[int], ...]
    gorenstein_shift: int
    matches_kronecker: bool
    cohomology: Optional[CohomologyTable] = None

    def as_json(self):
        out = {"n": self.n, "hilbert": {"numerator": list(self.hilbert_numerator),
                                        "denominator": list(self.hilbert_denominator)},
               "kronecker_dims": list(self.kronecker_dims), "expected": [1, self.n, 0, 1],
               "matches_kronecker_quiver": self.matches_kronecker,
               "gorenstein_shift": self.gorenstein_shift, "convention": CONVENTION}
        if self.cohomology is not None:
            out["cohomology"] = self.cohomology.as_json()
        return out


def kronecker_endo(pres: AlgebraPresentation, D: int = 8) -> SchemeInvariants:
    """(dim Hom(O,O), dim Hom(O,O(1)), dim Hom(O(1),O), dim Hom(O(1),O(1))) in the tail category.

    ``D`` bounds the Groebner basis used for the truncated Hom computations."""
    rep = _regular_or_raise(pres)
    if not pres.degree_one_generated:
        raise ValueError("kronecker_endo needs degree-one generators")
    alg = Algebra(pres, bound=max(D, 6))
    A = TruncatedGradedModule.free(alg, [0], "A")
    A1 = A.shift(1)

    def stable(M_shift: int, N: TruncatedGradedModule, j: int):
        vals = []
        for m in m_values(j - M_shift):
            T = truncation(alg, m)
            T = T.shift(M_shift) if M_shift else T
            vals.append(truncated_hom(T, N, j))
        return vals[-1] if len(set(vals)) == 1 else None

    h00 = stable(0, A, 0)
    h01 = stable(0, A1, 0)
    h10 = stable(1, A, 0)
    h11 = stable(1, A1, 0)
    dims = (h00, h01, h10, h11)
    n = pres.n
    return SchemeInvariants(n, (1,), (1, -n, 1), dims, rep.gorenstein_shift, dims == (1, n, 0, 1))


# --------------------------------------------------------------------------
# distinguishing schemes


@dataclass
class Distinction:
    verdict: str
    n_a: int
    n_b: int
    first_difference: Optional[int]
    euler_a_vs_b: EulerTest
    euler_b_vs_a: EulerTest
    twist: Optional[GradedAutomorphism] = None
    twist_preserves_hilbert: Optional[bool] = None
    names: tuple = ()

    @property
    def obstruction_degree(self) -> Optional[int]:
        return self.first_difference

    def as_json(self):
        out = {"verdict": self.verdict, "n_a": self.n_a, "n_b": self.n_b,
               "first_difference_degree": self.first_difference,
               "euler_a_against_n_b": self.euler_a_vs_b.as_json(),
               "euler_b_against_n_a": self.euler_b_vs_a.as_json()}
        if self.twist is not None:
            out["zhang_twist"] = self.twist.render(self.names)
            out["twist_preserves_hilbert"] = self.twist_preserves_hilbert
        return out


def find_twist(a: AlgebraPresentation, b: AlgebraPresentation, max_n: int = 5) -> Optional[GradedAutomorphism]:
    """A permutation or diagonal automorphism sigma of a with zhang_twist(a, sigma) spanning b's relations."""
    if a.n != b.n or a.weights != b.weights or a.field != b.field:
        return None
    F = a.field
    if a.n <= max_n:
        for perm in itertools.permutations(range(a.n)):
            sigma = GradedAutomorphism(F, a.weights, tuple(NcPolynomial.word(F, (p,)) for p in perm))
            try:
                tw = zhang_twist(a, sigma)
            except TwistError:
                continue
            if same_relation_space(tw, b):
                return sigma
    return find_diagonal_twist(a, b)


def distinguish_schemes(a: AlgebraPresentation, b: AlgebraPresentation, D: int = 8) -> Distinction:
    """Compare two regular degree-one generated algebras by the Euler-polynomial obstruction."""
    for p in (a, b):
        _regular_or_raise(p)
        if not p.degree_one_generated:
            raise ValueError("distinguish_schemes needs degree-one generators")
    Ha, _ = hilbert_series(a, D)
    Hb, _ = hilbert_series(b, D)
    ea = euler_poly_test(Ha, b.n, D)
    eb = euler_poly_test(Hb, a.n, D)
    first = Ha.first_difference(Hb)
    if a.n != b.n:
        tail = ea.first_tail_degree if not ea.passed else eb.first_tail_degree
        verdict = (f"non-isomorphic schemes (Hilbert series differ from degree {first}; "
                   f"Euler obstruction at degree {tail})")
        return Distinction(verdict, a.n, b.n, first, ea, eb)
    sigma = find_twist(a, b)
    same = None
    if sigma is not None:
        same = Ha == Hb
    verdict = "indistinguishable by this invariant"
    if sigma is not None:
        verdict += " (Zhang twist confirmed)"
    return Distinction(verdict, a.n, b.n, first, ea, eb, sigma, same, a.names)
