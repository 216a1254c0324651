"""Exact sparse linear algebra over the rationals.

Vectors are plain ``dict[int, Fraction]`` with no zero entries.  A matrix is
handed around as a list of column vectors, which is how every linear map in
this package is built (the image of each basis element).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = dict  # dict[int, Fraction]


def vec_add(u: Vector, v: Vector, c=1) -> Vector:
    """Return ``u + c*v`` as a new vector."""
    out = dict(u)
    if not c:
        return out
    for i, x in v.items():
        y = out.get(i, 0) + c * x
        if y:
            out[i] = y
        else:
            out.pop(i, None)
    return out


def vec_scale(v: Vector, c) -> Vector:
    if not c:
        return {}
    return {i: c * x for i, x in v.items()}


def _axpy_inplace(u: Vector, v: Vector, c) -> None:
    for i, x in v.items():
        y = u.get(i, 0) + c * x
        if y:
            u[i] = y
        else:
            del u[i]


class Echelon:
    """An incrementally built echelon basis of a subspace.

    Every stored row has a pivot (its smallest index) with coefficient 1.
    With ``track=True`` each row remembers how it was assembled from the
    vectors passed to :meth:`add`, which is what powers kernel and solve.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self.rows: dict[int, tuple[Vector, Vector]] = {}
        self._order: list[int] = []
        self._sorted = True
        self.count = 0

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        if not self._sorted:
            self._order.sort()
            self._sorted = True
        return self._order

    def reduce(self, v: Vector, combo: Vector | None = None) -> tuple[Vector, Vector]:
        """Reduce ``v`` against the stored rows.

        Returns the remainder and, when tracking, the combination ``combo``
        updated so that ``remainder = (combination of added vectors)``.
        """
        v = dict(v)
        combo = dict(combo) if combo is not None else {}
        if not v:
            return v, combo
        for p in self.pivots:
            c = v.get(p)
            if c:
                row, rc = self.rows[p]
                _axpy_inplace(v, row, -c)
                if self.track:
                    _axpy_inplace(combo, rc, -c)
        return v, combo

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)[0]

    def add(self, v: Vector) -> tuple[bool, Vector]:
        """Add ``v`` (labelled by its insertion index).

        Returns ``(independent, combo)``.  When the vector is dependent,
        ``combo`` is a relation among the added vectors summing to zero
        (only meaningful with tracking).
        """
        label = self.count
        self.count += 1
        rem, combo = self.reduce(v, {label: Fraction(1)} if self.track else None)
        if not rem:
            return False, combo
        p = min(rem)
        c = rem[p]
        if c != 1:
            inv = 1 / Fraction(c)
            rem = vec_scale(rem, inv)
            if self.track:
                combo = vec_scale(combo, inv)
        self.rows[p] = (rem, combo)
        self._order.append(p)
        self._sorted = False
        return True, combo

    def basis(self) -> list[Vector]:
        return [self.rows[p][0] for p in self.pivots]

    def reduced_basis(self) -> list[Vector]:
        """Fully reduced (RREF) rows, in pivot order."""
        rows = {p: dict(self.rows[p][0]) for p in self.pivots}
        piv = self.pivots
        for p in reversed(piv):
            row = rows[p]
            for q in piv:
                if q <= p:
                    continue
                c = row.get(q)
                if c:
                    _axpy_inplace(row, rows[q], -c)
        return [rows[p] for p in piv]


def kernel(columns: Sequence[Vector]) -> list[Vector]:
    """Basis of ``{x : sum_j x_j * columns[j] = 0}``, in RREF over column indices."""
    ech = Echelon(track=True)
    relations = []
    for col in columns:
        independent, combo = ech.add(col)
        if not independent:
            relations.append(combo)
    out = Echelon()
    for r in relations:
        out.add(r)
    return out.reduced_basis()


def rank(columns: Iterable[Vector]) -> int:
    ech = Echelon()
    for col in columns:
        ech.add(col)
    return len(ech)


def image_echelon(columns: Iterable[Vector]) -> Echelon:
    ech = Echelon()
    for col in columns:
        ech.add(col)
    return ech


def solve(columns: Sequence[Vector], b: Vector) -> Vector | None:
    """Some ``x`` with ``sum_j x_j * columns[j] = b``, or ``None``.

    Deterministic: the answer only involves pivot columns.
    """
    ech = Echelon(track=True)
    for col in columns:
        ech.add(col)
    rem, combo = ech.reduce(b)
    if rem:
        return None
    return vec_scale(combo, -1)


def independent_subset(vectors: Sequence[Vector], modulo: Iterable[Vector] = ()) -> list[int]:
    """Indices of a maximal subfamily of ``vectors`` independent modulo ``modulo``."""
    ech = Echelon()
    for v in modulo:
        ech.add(v)
    picked = []
    for i, v in enumerate(vectors):
        if ech.add(v)[0]:
            picked.append(i)
    return picked


# -- dense helpers for the small square forms that show up in pairings ------


def to_dense(columns: Sequence[Vector], nrows: int) -> list[list[Fraction]]:
    return [[Fraction(columns[j].get(i, 0)) for j in range(len(columns))] for i in range(nrows)]


def dense_rank(matrix: Sequence[Sequence]) -> int:
    if not matrix:
        return 0
    ncols = len(matrix[0])
    cols = [{i: Fraction(row[j]) for i, row in enumerate(matrix) if row[j]} for j in range(ncols)]
    return rank(cols)


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for j in range(c, n):
                    m[r][j] -= f * m[c][j]
    return det


def inertia(matrix: Sequence[Sequence]) -> tuple[int, int, int]:
    """``(positive, negative, zero)`` counts of a symmetric rational matrix.

    Symmetric elimination by congruence; a zero diagonal with a nonzero
    off-diagonal entry is fixed by adding one basis vector to another.
    """
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    for i in range(n):
        for j in range(n):
            if m[i][j] != m[j][i]:
                raise ValueError("inertia needs a symmetric matrix")
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if m[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and m[i][j]), None)
            if pair is None:
                break
            i, j = pair
            # e_i <- e_i + e_j: row and column operation
            for t in range(n):
                m[i][t] += m[j][t]
            for t in range(n):
                m[t][i] += m[t][j]
            piv = i
        d = m[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for r in active:
            f = m[r][piv] / d
            if f:
                for t in range(n):
                    m[r][t] -= f * m[piv][t]
                for t in range(n):
                    m[t][r] -= f * m[t][piv]
    return pos, neg, n - pos - neg
