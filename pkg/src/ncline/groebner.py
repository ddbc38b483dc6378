"""Noncommutative Groebner bases for homogeneous ideals.

Completion runs overlap by overlap in increasing degree (FIFO inside a
degree) and stops at a degree bound ``D``.  The result is certified through
``D``; ``complete`` is set only when every overlap above the bound also
reduces to zero, in which case the basis is a genuine (finite) Groebner basis.
"""

from __future__ import annotations

import heapq
import itertools
from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .field import Field
from .order import MonomialOrder
from .poly import NcPolynomial, Word, word_degree
from .presentation import AlgebraPresentation


class CertificationError(ValueError):
    """A computation needed a degree above the basis' certified degree."""


class UnsupportedError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class Reducer:
    """Two-sided reduction modulo a set of monic polynomials keyed by leading word."""

    def __init__(self, F: Field, order: MonomialOrder):
        self.F = F
        self.order = order
        self.lw: Dict[Word, dict] = {}
        self.lengths: List[int] = []
        self._keys: Dict[Word, tuple] = {}
        self.last_steps = 0

    def key(self, w):
        k = self._keys.get(w)
        if k is None:
            k = self.order.neg_key(w)
            self._keys[w] = k
        return k

    def insert(self, lw: Word, terms: dict):
        self.lw[lw] = terms
        self.lengths = sorted({len(u) for u in self.lw})

    def remove(self, lw: Word):
        del self.lw[lw]
        self.lengths = sorted({len(u) for u in self.lw})

    def find(self, w: Word):
        lw = self.lw
        n = len(w)
        for i in range(n):
            for L in self.lengths:
                if i + L > n:
                    break
                u = w[i:i + L]
                if u in lw:
                    return i, u
        return None

    def is_normal(self, w: Word) -> bool:
        return self.find(w) is None

    def reduce(self, terms: dict, budget: int | None = None) -> dict:
        """Full normal form of a dict polynomial.

        With ``budget`` set, raise :class:`BudgetExceeded` once that many
        term updates have been spent.
        """
        if not self.lw:
            return {w: c for w, c in terms.items() if c != 0}
        p = self.F.p
        work = dict(terms)
        key = self.key
        heap = [(key(w), w) for w in work]
        heapq.heapify(heap)
        out = {}
        find = self.find
        lws = self.lw
        start = budget
        while heap:
            _, w = heapq.heappop(heap)
            c = work.pop(w, None)
            if c is None:
                continue
            hit = find(w)
            if hit is None:
                out[w] = c
                continue
            if budget is not None:
                budget -= len(lws[hit[1]])
                if budget < 0:
                    raise BudgetExceeded()
            i, u = hit
            pre, suf = w[:i], w[i + len(u):]
            for t, gc in lws[u].items():
                if t == u:
                    continue
                ww = pre + t + suf
                old = work.get(ww)
                x = (0 if old is None else old) - c * gc
                if p:
                    x %= p
                if x == 0:
                    if old is not None:
                        del work[ww]
                else:
                    if old is None:
                        heapq.heappush(heap, (key(ww), ww))
                    work[ww] = x
        if budget is not None:
            self.last_steps = start - budget
        return out


def _monic(F: Field, order: MonomialOrder, terms: dict) -> Tuple[Word, dict]:
    lw = order.leading(terms)
    c = terms[lw]
    if c == 1:
        return lw, dict(terms)
    inv = F.inv(c)
    return lw, {w: F.norm(v * inv) for w, v in terms.items()}


@dataclass(eq=False)
class GroebnerBasis:
    field: Field
    order: MonomialOrder
    elements: Tuple[NcPolynomial, ...]
    certified_degree: int
    complete: bool
    names: Tuple[str, ...] = ()
    stats: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self._reducer = Reducer(self.field, self.order)
        for g in self.elements:
            self._reducer.insert(self.order.leading(g.terms), g.terms)
        self._automaton = None

    @property
    def weights(self) -> Tuple[int, ...]:
        return self.order.weights

    @property
    def n(self) -> int:
        return len(self.order.weights)

    @property
    def leading_words(self) -> List[Word]:
        return [self.order.leading(g.terms) for g in self.elements]

    def certified_through(self, d: int) -> bool:
        return self.complete or d <= self.certified_degree

    def require(self, d: int, what: str = "computation"):
        if not self.certified_through(d):
            raise CertificationError(
                f"{what} needs degree {d} but the Groebner basis is certified only "
                f"through degree {self.certified_degree}"
            )

    def reduce_terms(self, terms: dict) -> dict:
        return self._reducer.reduce(terms)

    def is_normal(self, w: Word) -> bool:
        return self._reducer.is_normal(w)

    @property
    def automaton(self) -> "WordAutomaton":
        if self._automaton is None:
            self._automaton = WordAutomaton(self.leading_words, self.n)
        return self._automaton

    def elements_by_degree(self) -> Dict[int, int]:
        out: Dict[int, int] = defaultdict(int)
        for g in self.elements:
            out[g.degree(self.weights)] += 1
        return dict(sorted(out.items()))


# --------------------------------------------------------------------------
# completion


def _overlaps(u: Word, v: Word):
    """Lengths k of proper overlaps: suffix of u of length k == prefix of v."""
    m = min(len(u), len(v))
    for k in range(1, m):
        if u[len(u) - k:] == v[:k]:
            yield k


def complete_ideal(
    F: Field,
    order: MonomialOrder,
    polys: Iterable[dict],
    bound: int,
    check_limit: int = 5000,
    check_budget: int = 1_000_000,
    names: Sequence[str] = (),
) -> GroebnerBasis:
    """Degree-bounded overlap completion of the ideal generated by ``polys``."""
    weights = order.weights
    red = Reducer(F, order)
    elems: Dict[int, Tuple[Word, dict]] = {}
    by_lw: Dict[Word, int] = {}
    counter = itertools.count()
    ids = itertools.count()
    queue: list = []

    def deg(w):
        return word_degree(w, weights)

    for t in polys:
        t = {w: c for w, c in t.items() if F.norm(c) != 0}
        if t:
            d = max(deg(w) for w in t)
            heapq.heappush(queue, (d, next(counter), "poly", t))

    def spoly(i, j, k):
        u, f = elems[i]
        v, g = elems[j]
        c = v[k:]
        a = u[: len(u) - k]
        out: dict = {}
        p = F.p
        for t, x in f.items():
            ww = t + c
            out[ww] = out.get(ww, 0) + x
        for t, x in g.items():
            ww = a + t
            out[ww] = out.get(ww, 0) - x
        if p:
            return {w: x % p for w, x in out.items() if x % p}
        return {w: x for w, x in out.items() if x != 0}

    def push_overlaps(i):
        u, _ = elems[i]
        for j in list(elems):
            v, _ = elems[j]
            for k in _overlaps(u, v):
                heapq.heappush(queue, (deg(u) + deg(v[k:]), next(counter), "ovl", (i, j, k)))
            if j != i:
                for k in _overlaps(v, u):
                    heapq.heappush(queue, (deg(v) + deg(u[k:]), next(counter), "ovl", (j, i, k)))

    processed = 0
    while queue and queue[0][0] <= bound:
        d, _, kind, payload = heapq.heappop(queue)
        if kind == "poly":
            terms = payload
        else:
            i, j, k = payload
            if i not in elems or j not in elems:
                continue
            terms = spoly(i, j, k)
        processed += 1
        r = red.reduce(terms)
        if not r:
            continue
        lw, r = _monic(F, order, r)
        # interreduce leading words: drop elements whose leading word contains lw
        for eid in [e for e, (u, _) in elems.items() if _contains(u, lw)]:
            u, g = elems.pop(eid)
            red.remove(u)
            del by_lw[u]
            heapq.heappush(queue, (deg(u), next(counter), "poly", g))
        eid = next(ids)
        elems[eid] = (lw, r)
        by_lw[lw] = eid
        red.insert(lw, r)
        push_overlaps(eid)

    complete = check_limit > 0
    checked = 0
    pending = [item for item in queue if item[2] == "ovl"]
    pending.sort()
    for d, _, kind, (i, j, k) in (pending if complete else []):
        if i not in elems or j not in elems:
            continue
        checked += 1
        if checked > check_limit:
            complete = False
            break
        try:
            rest = red.reduce(spoly(i, j, k), budget=check_budget)
        except BudgetExceeded:
            complete = False  # too costly to confirm; stay conservative
            break
        check_budget -= red.last_steps
        if rest:
            complete = False
            break

    # tail reduction
    final = []
    for eid in sorted(elems, key=lambda e: order.key(elems[e][0])):
        lw, g = elems[eid]
        red.remove(lw)
        tail = red.reduce({w: c for w, c in g.items() if w != lw})
        red.insert(lw, g)
        tail[lw] = 1
        final.append((lw, tail))
    for lw, g in final:
        red.insert(lw, g)
    elements = tuple(NcPolynomial._raw(F, g) for _, g in final)
    return GroebnerBasis(
        F, order, elements, bound, complete, tuple(names),
        stats={"overlaps_processed": processed, "pending_checked": checked},
    )


def _contains(u: Word, v: Word) -> bool:
    L = len(v)
    return any(u[i:i + L] == v for i in range(len(u) - L + 1))


def two_sided_gb(
    pres: AlgebraPresentation,
    order: MonomialOrder | None = None,
    bound: int | None = None,
    extra: Sequence[NcPolynomial] = (),
    certify: bool = True,
) -> GroebnerBasis:
    """Groebner basis of the relation ideal (plus ``extra`` generators) through ``bound``.

    The default bound is ``2 * (max relation degree) + 6``.  With
    ``certify=False`` the pending overlaps above the bound are not examined
    and ``complete`` stays False.
    """
    order = order or pres.default_order()
    if tuple(order.weights) != pres.weights:
        raise ValueError("order weights do not match the presentation")
    maxdeg = max([pres.max_relation_degree()] + [e.degree(pres.weights) for e in extra])
    if bound is None:
        bound = 2 * maxdeg + 6
    if bound < maxdeg:
        raise ValueError(f"degree bound {bound} is below the maximal relation degree {maxdeg}")
    polys = [dict(r.terms) for r in pres.relations] + [dict(e.terms) for e in extra]
    return complete_ideal(pres.field, order, polys, bound, names=pres.names,
                          check_limit=5000 if certify else 0)


def normal_form(p: NcPolynomial, gb: GroebnerBasis) -> NcPolynomial:
    gb.require(p.degree(gb.weights), "normal form")
    return NcPolynomial._raw(gb.field, gb.reduce_terms(p.terms))


# --------------------------------------------------------------------------
# counting and enumerating normal words


class WordAutomaton:
    """Aho-Corasick automaton recognizing words that avoid a set of subwords.

    States are trie nodes; ``delta[s][a]`` is -1 when appending letter ``a``
    completes a forbidden word.
    """

    def __init__(self, forbidden: Sequence[Word], n: int):
        self.n = n
        goto: List[Dict[int, int]] = [{}]
        dead = [False]
        for w in forbidden:
            s = 0
            for a in w:
                if a not in goto[s]:
                    goto.append({})
                    dead.append(False)
                    goto[s][a] = len(goto) - 1
                s = goto[s][a]
            dead[s] = True
        fail = [0] * len(goto)
        delta = [[0] * n for _ in goto]
        order = []
        for a in range(n):
            if a in goto[0]:
                t = goto[0][a]
                fail[t] = 0
                order.append(t)
                delta[0][a] = t
            else:
                delta[0][a] = 0
        qi = 0
        while qi < len(order):
            s = order[qi]
            qi += 1
            dead[s] = dead[s] or dead[fail[s]]
            for a in range(n):
                if a in goto[s]:
                    t = goto[s][a]
                    fail[t] = delta[fail[s]][a]
                    delta[s][a] = t
                    order.append(t)
                else:
                    delta[s][a] = delta[fail[s]][a]
        self.delta = [[(-1 if dead[t] else t) for t in row] for row in delta]
        self.dead = dead
        self.nstates = len(goto)

    def run(self, word: Word, state: int = 0) -> int:
        for a in word:
            if state < 0:
                return -1
            state = self.delta[state][a]
        return state

    def count(self, weights: Sequence[int], D: int, start: Dict[int, int] | None = None) -> List[int]:
        """Number of accepted words of each weighted degree 0..D from ``start``."""
        start = start if start is not None else {0: 1}
        layers: List[Dict[int, int]] = [dict() for _ in range(D + 1)]
        layers[0] = dict(start)
        out = [0] * (D + 1)
        delta = self.delta
        for d in range(D + 1):
            layer = layers[d]
            out[d] = sum(layer.values())
            for s, c in layer.items():
                row = delta[s]
                for a, t in enumerate(row):
                    if t < 0:
                        continue
                    e = d + weights[a]
                    if e <= D:
                        nxt = layers[e]
                        nxt[t] = nxt.get(t, 0) + c
        return out


def count_normal_words(gb: GroebnerBasis, D: int) -> List[int]:
    gb.require(D, "normal-word count")
    return gb.automaton.count(gb.weights, D)


def normal_words(gb: GroebnerBasis, d: int, sort: bool = True) -> List[Word]:
    """All normal words of weighted degree ``d``, ascending in the monomial order."""
    gb.require(d, "normal-word enumeration")
    return _enumerate_words(gb.automaton, gb.weights, d, 0, (), gb.order if sort else None)


def normal_extensions(gb: GroebnerBasis, prefix: Word, d: int) -> List[Word]:
    """Normal words of degree ``d`` that begin with the normal word ``prefix``."""
    gb.require(d, "normal-word enumeration")
    s = gb.automaton.run(prefix)
    if s < 0:
        return []
    rest = d - word_degree(prefix, gb.weights)
    if rest < 0:
        return []
    return _enumerate_words(gb.automaton, gb.weights, rest, s, prefix, gb.order)


def _enumerate_words(aut, weights, d, state, prefix, order):
    # words of remaining degree d from the given state
    by: Dict[int, List[Tuple[Word, int]]] = {0: [(prefix, state)]}
    for e in range(d):
        items = by.get(e)
        if not items:
            continue
        for w, s in items:
            row = aut.delta[s]
            for a, t in enumerate(row):
                if t >= 0 and e + weights[a] <= d:
                    by.setdefault(e + weights[a], []).append((w + (a,), t))
    words = [w for w, _ in by.get(d, [])]
    if order is not None:
        words = order.sorted(words)
    return words


# --------------------------------------------------------------------------
# right Groebner bases


@dataclass(eq=False)
class RightGroebnerBasis:
    ambient: GroebnerBasis
    elements: Tuple[NcPolynomial, ...]
    certified_degree: int
    complete: bool

    def __post_init__(self):
        order = self.ambient.order
        self._by_lw = {order.leading(e.terms): e.terms for e in self.elements}

    @property
    def leading_words(self) -> List[Word]:
        order = self.ambient.order
        return [order.leading(e.terms) for e in self.elements]

    def certified_through(self, d: int) -> bool:
        return self.complete or d <= self.certified_degree

    def reduce_terms(self, terms: dict) -> dict:
        return _right_reduce(self.ambient, self._by_lw, terms)

    def contains(self, p: NcPolynomial) -> bool:
        d = p.degree(self.ambient.weights)
        if not self.certified_through(d):
            raise CertificationError(f"membership in degree {d} exceeds certified degree {self.certified_degree}")
        self.ambient.require(d, "right-ideal membership")
        return not self.reduce_terms(self.ambient.reduce_terms(p.terms))

    def dimensions(self, D: int) -> List[int]:
        """dim of the right ideal in degrees 0..D (count of normal words with a
        leading word as prefix)."""
        amb = self.ambient
        amb.require(D, "right-ideal dimension")
        if not self.certified_through(D):
            raise CertificationError(f"right Groebner basis certified only through {self.certified_degree}")
        aut = amb.automaton
        out = [0] * (D + 1)
        for u in self.leading_words:
            s = aut.run(u)
            du = word_degree(u, amb.weights)
            if s < 0 or du > D:
                continue
            cnt = aut.count(amb.weights, D - du, {s: 1})
            for e, c in enumerate(cnt):
                out[du + e] += c
        return out


def _right_reduce(amb: GroebnerBasis, by_lw: Dict[Word, dict], terms: dict) -> dict:
    if not by_lw:
        return dict(terms)
    F = amb.field
    p = F.p
    order = amb.order
    lengths = sorted({len(u) for u in by_lw})
    work = dict(terms)
    out = {}
    while work:
        w = max(work, key=order.key)
        c = work.pop(w)
        hit = None
        for L in lengths:
            if L <= len(w) and w[:L] in by_lw:
                hit = w[:L]
                break
        if hit is None:
            out[w] = c
            continue
        v = w[len(hit):]
        prod = {t + v: x for t, x in by_lw[hit].items()}
        prod = amb.reduce_terms(prod)
        # leading word of prod is w with coefficient 1
        for t, x in prod.items():
            if t == w:
                continue
            y = work.get(t, 0) - c * x
            if p:
                y %= p
            if y == 0:
                work.pop(t, None)
            else:
                work[t] = y
    return out


def right_gb(gens: Sequence[NcPolynomial], ambient: GroebnerBasis, bound: int) -> RightGroebnerBasis:
    """Right Groebner basis of the right ideal generated by ``gens`` in A = T/I.

    Obstructions are the products g * t where a suffix of LW(g) and a prefix
    of t form a leading word of the ambient two-sided basis.
    """
    F = ambient.field
    order = ambient.order
    weights = ambient.weights
    ambient.require(bound, "right Groebner basis")
    elems: Dict[Word, dict] = {}
    counter = itertools.count()
    queue: list = []
    amb_lws = ambient.leading_words

    for g in gens:
        t = ambient.reduce_terms(g.terms)
        if t:
            heapq.heappush(queue, (g.degree(weights), next(counter), t))

    while queue and queue[0][0] <= bound:
        d, _, terms = heapq.heappop(queue)
        r = _right_reduce(ambient, elems, ambient.reduce_terms(terms))
        if not r:
            continue
        lw, r = _monic(F, order, r)
        for u in [u for u in elems if u[: len(lw)] == lw]:
            heapq.heappush(queue, (word_degree(u, weights), next(counter), elems.pop(u)))
        elems[lw] = r
        for h in amb_lws:
            for k in range(1, min(len(lw), len(h) - 1) + 1):
                if lw[len(lw) - k:] != h[:k]:
                    continue
                t = h[k:]
                prod = {w + t: x for w, x in r.items()}
                heapq.heappush(queue, (d + word_degree(t, weights), next(counter), prod))

    complete = True
    for d, _, terms in sorted(queue, key=lambda q: (q[0], q[1])):
        if not ambient.certified_through(d):
            complete = False
            break
        if _right_reduce(ambient, elems, ambient.reduce_terms(terms)):
            complete = False
            break
    if complete and not ambient.complete:
        complete = False
    elements = tuple(NcPolynomial._raw(F, elems[u]) for u in order.sorted(elems))
    return RightGroebnerBasis(ambient, elements, bound, complete)


# --------------------------------------------------------------------------
# growth


@dataclass
class GrowthReport:
    kind: str  # "polynomial" or "exponential"
    gk_dimension: Optional[int]
    graph: nx.DiGraph

    def as_dict(self):
        return {
            "growth": self.kind,
            "gk_dimension": self.gk_dimension,
            "vertices": self.graph.number_of_nodes(),
            "edges": self.graph.number_of_edges(),
        }


def ufnarovski_graph(gb: GroebnerBasis) -> nx.DiGraph:
    lws = gb.leading_words
    ell = max((len(u) for u in lws), default=1)
    ell = max(ell, 1)
    n = gb.n
    G = nx.DiGraph()
    if ell == 1:
        G.add_node(())
        for a in range(n):
            if (a,) not in set(lws):
                G.add_edge((), (), letters=[a])
                G.graph.setdefault("loops", []).append(a)
        return G
    # all normal words of length ell - 1 (unweighted)
    aut = gb.automaton
    layer = [((), 0)]
    for _ in range(ell - 1):
        layer = [(w + (a,), t) for w, s in layer for a, t in enumerate(aut.delta[s]) if t >= 0]
    verts = [w for w, _ in layer]
    G.add_nodes_from(verts)
    for u in verts:
        s = aut.run(u)
        for a in range(n):
            if aut.delta[s][a] >= 0:
                v = u[1:] + (a,)
                if aut.run(u + (a,)) >= 0:
                    G.add_edge(u, v)
    return G


def ufnarovski_growth(gb: GroebnerBasis) -> GrowthReport:
    if not gb.complete:
        raise CertificationError("growth needs a complete Groebner basis")
    if any(w != 1 for w in gb.weights):
        raise UnsupportedError("Ufnarovski growth is only supported for weight-1 generators")
    G = ufnarovski_graph(gb)
    if G.number_of_nodes() == 1 and () in G:
        loops = len(G.graph.get("loops", []))
        if loops >= 2:
            return GrowthReport("exponential", None, G)
        return GrowthReport("polynomial", loops, G)
    cond = nx.condensation(G)
    cyc_weight = {}
    for c in cond.nodes:
        members = cond.nodes[c]["members"]
        sub = G.subgraph(members)
        edges = sub.number_of_edges()
        if len(members) == 1 and edges == 0:
            cyc_weight[c] = 0
        elif edges == len(members):
            cyc_weight[c] = 1  # a single simple cycle
        else:
            return GrowthReport("exponential", None, G)
    best = {}
    for c in nx.topological_sort(cond):
        preds = [best[p] for p in cond.predecessors(c)]
        best[c] = cyc_weight[c] + max(preds, default=0)
    return GrowthReport("polynomial", max(best.values(), default=0), G)
