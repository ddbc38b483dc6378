"""Exact linear algebra over a :class:`~ncline.field.Field`.

Two layers:

* :class:`Echelon` -- an incremental sparse semi-echelon basis.  Vectors are
  dicts ``column -> value`` with integer columns; the pivot of a stored row is
  its smallest column and is normalized to 1.  This is what every degree-slice
  computation in the package runs on.
* :func:`rref` -- dense reduced row echelon form of a :class:`DegreeMatrix`,
  with deterministic pivoting (first nonzero entry in the leftmost column).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field as dc_field
from typing import Dict, Hashable, List, Optional, Sequence

from .field import Field


def _combine(F: Field, target: dict, row: dict, c):
    """target -= c * row, in place, pruning zeros."""
    p = F.p
    for k, v in row.items():
        x = target.get(k, 0) - c * v
        if p:
            x %= p
        if x == 0:
            target.pop(k, None)
        else:
            target[k] = x


class Echelon:
    """Sparse semi-echelon basis of a subspace of k^(columns).

    With ``track=True`` every inserted vector carries a tag; reducing a vector
    to zero then yields the linear dependency among previously inserted tags
    (used for kernels and syzygies).
    """

    def __init__(self, F: Field, track: bool = False):
        self.F = F
        self.rows: Dict[int, dict] = {}
        self.track = track
        self.combos: Dict[int, dict] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict, combo: Optional[dict] = None):
        """Reduce ``vec`` (a copy is made) against the basis.

        Returns the reduced vector, or ``(reduced, combo)`` when ``combo`` is
        given; ``combo`` records the tags used so that
        ``original = reduced + sum(combo[t] * inserted[t])``.
        """
        F = self.F
        p = F.p
        v = dict(vec)
        rows = self.rows
        heap = [k for k in v if k in rows]
        heapq.heapify(heap)
        seen = set()
        while heap:
            k = heapq.heappop(heap)
            if k in seen:
                continue
            seen.add(k)
            c = v.get(k)
            if c is None:
                continue
            row = rows[k]
            for kk, rv in row.items():
                x = v.get(kk, 0) - c * rv
                if p:
                    x %= p
                if x == 0:
                    v.pop(kk, None)
                else:
                    if kk not in v and kk in rows and kk not in seen:
                        heapq.heappush(heap, kk)
                    v[kk] = x
            if combo is not None:
                for t, tv in self.combos[k].items():
                    x = combo.get(t, 0) + c * tv
                    if p:
                        x %= p
                    if x == 0:
                        combo.pop(t, None)
                    else:
                        combo[t] = x
        if combo is not None:
            return v, combo
        return v

    def add(self, vec: dict, tag: Hashable = None) -> bool:
        """Insert ``vec``; return True if it enlarged the span."""
        F = self.F
        if self.track:
            v, combo = self.reduce(vec, {})
        else:
            v = self.reduce(vec)
        if not v:
            if self.track:
                self.last_dependency = {t: F.norm(-c) for t, c in combo.items()}
                self.last_dependency[tag] = 1
            return False
        k = min(v)
        inv = F.inv(v[k])
        row = {kk: F.norm(x * inv) for kk, x in v.items()}
        self.rows[k] = row
        if self.track:
            # row = inv * (vec - sum combo * inserted)
            c2 = {t: F.norm(-c * inv) for t, c in combo.items()}
            c2[tag] = inv
            self.combos[k] = {t: c for t, c in c2.items() if c != 0}
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)


def rank_of(F: Field, vectors) -> int:
    E = Echelon(F)
    for v in vectors:
        E.add(v)
    return E.rank


def kernel_of(F: Field, images: Sequence[dict]) -> List[dict]:
    """Basis of {c : sum_i c_i images[i] = 0} as dicts ``index -> coeff``.

    Deterministic: vectors are inserted in index order and each dependency is
    expressed with the later index carrying coefficient 1.
    """
    E = Echelon(F, track=True)
    ker = []
    for i, v in enumerate(images):
        if not E.add(v, i):
            ker.append(E.last_dependency)
    return ker


def full_reduce_basis(F: Field, E: Echelon) -> Dict[int, dict]:
    """Return the reduced row echelon rows of ``E`` keyed by pivot."""
    piv = sorted(E.rows, reverse=True)
    out: Dict[int, dict] = {}
    for k in piv:
        row = dict(E.rows[k])
        for kk in sorted(row):
            if kk != k and kk in out:
                c = row.get(kk)
                if c:
                    _combine(F, row, out[kk], c)
        out[k] = row
    return out


@dataclass(frozen=True)
class DegreeMatrix:
    """Dense matrix with labelled rows and columns over a field."""

    field: Field
    entries: tuple
    row_labels: tuple = ()
    col_labels: tuple = ()

    @classmethod
    def from_rows(cls, F: Field, rows, row_labels=(), col_labels=()):
        ents = tuple(tuple(F(x) for x in r) for r in rows)
        ncols = len(ents[0]) if ents else len(col_labels)
        if any(len(r) != ncols for r in ents):
            raise ValueError("ragged matrix")
        return cls(F, ents, tuple(row_labels), tuple(col_labels))

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        if self.entries:
            return len(self.entries[0])
        return len(self.col_labels)

    def rows_as_dicts(self):
        return [{j: x for j, x in enumerate(r) if x != 0} for r in self.entries]


@dataclass
class RrefResult:
    matrix: DegreeMatrix
    pivots: List[int]
    rank: int
    kernel: List[tuple] = dc_field(default_factory=list)


def rref(m: DegreeMatrix, with_kernel: bool = False) -> RrefResult:
    """Reduced row echelon form with leftmost-column, first-nonzero pivoting."""
    F = m.field
    A = [list(r) for r in m.entries]
    nrows, ncols = m.nrows, m.ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.norm(x * inv) for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [F.norm(x - f * y) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    kernel = []
    if with_kernel:
        free = [c for c in range(ncols) if c not in pivots]
        for f in free:
            v = [0] * ncols
            v[f] = 1
            for i, pc in enumerate(pivots):
                v[pc] = F.norm(-A[i][f])
            kernel.append(tuple(v))
    out = DegreeMatrix(F, tuple(tuple(row) for row in A), m.row_labels, m.col_labels)
    return RrefResult(out, pivots, len(pivots), kernel)


def matrix_rank(F: Field, rows) -> int:
    return rank_of(F, ({j: F(x) for j, x in enumerate(r) if F(x) != 0} for r in rows))


def mat_mul(F: Field, A, B):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    return [[F.norm(sum(A[i][t] * B[t][j] for t in range(k))) for j in range(m)] for i in range(n)]


def transpose(A):
    return [list(r) for r in zip(*A)]


def mat_inverse(F: Field, A):
    """Inverse of a square matrix; raises ValueError when singular."""
    n = len(A)
    aug = [list(A[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    res = rref(DegreeMatrix(F, tuple(tuple(F(x) for x in r) for r in aug)))
    if res.pivots[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [list(r[n:]) for r in res.matrix.entries]
