"""
Exact elimination: ranks, reduced echelon forms, kernels and linear solves.

Over Q ranks use fraction-free (Bareiss) elimination on rows cleared of
denominators; everything else runs Gauss-Jordan on Fractions. Over F_p the
work is done on plain residues. Pivots are always the first nonzero entry in
column order, so results are reproducible.
"""

import logging
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

from src.linalg.fields import Field, FpElement
from src.linalg.matrix import Mat
from src.utils.errors import DimMismatch, MixedField, SingularSystem, SpectraOverlap

logger = logging.getLogger('adhmlab.linalg')


def _raw_rows(m: Mat) -> List[list]:
    if m.field.is_rational:
        return [m.row(r) for r in range(m.rows)]
    return [[x.value for x in m.row(r)] for r in range(m.rows)]


def _wrap(values: Sequence, field: Field) -> List:
    if field.is_rational:
        return [Fraction(x) for x in values]
    return [FpElement(x, field.p) for x in values]


def _bareiss_rank(rows: List[List[int]], ncols: int) -> int:
    a = [r[:] for r in rows]
    nrows = len(a)
    rank, prev = 0, 1
    for c in range(ncols):
        pivot = next((r for r in range(rank, nrows) if a[r][c] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, nrows):
            factor = a[r][c]
            row = a[r]
            for cc in range(c + 1, ncols):
                row[cc] = (row[cc] * p - factor * a[rank][cc]) // prev
            row[c] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def rref_raw(rows: List[list], ncols: int, p: Optional[int] = None) -> Tuple[List[list], List[int]]:
    """Gauss-Jordan on raw rows (Fractions, or residues mod p); returns (nonzero rows, pivot columns)."""
    a = [r[:] for r in rows]
    nrows = len(a)
    pivots: List[int] = []
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        pivot = next((r for r in range(rank, nrows) if a[r][c]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        lead = a[rank][c]
        if p is None:
            a[rank] = [x / lead for x in a[rank]]
        else:
            inv = pow(lead, -1, p)
            a[rank] = [(x * inv) % p for x in a[rank]]
        prow = a[rank]
        for r in range(nrows):
            if r != rank and a[r][c]:
                factor = a[r][c]
                if p is None:
                    a[r] = [x - factor * y for x, y in zip(a[r], prow)]
                else:
                    a[r] = [(x - factor * y) % p for x, y in zip(a[r], prow)]
        pivots.append(c)
        rank += 1
    return a[:rank], pivots


def rank(m: Mat) -> int:
    """Rank of m; fraction-free elimination over Q, plain elimination over F_p."""
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.field.is_rational:
        int_rows = []
        for row in _raw_rows(m):
            den = lcm(*(x.denominator for x in row))
            int_rows.append([int(x * den) for x in row])
        return _bareiss_rank(int_rows, m.cols)
    _, pivots = rref_raw(_raw_rows(m), m.cols, m.field.p)
    return len(pivots)


def rref(m: Mat) -> Tuple[Mat, List[int]]:
    """Reduced row echelon form (nonzero rows only) and its pivot columns."""
    rows, pivots = rref_raw(_raw_rows(m), m.cols, m.field.p)
    return Mat.from_rows([_wrap(r, m.field) for r in rows], m.field, cols=m.cols), pivots


def nullspace(m: Mat) -> List[Mat]:
    """Basis of the right kernel, one column vector per free column of the RREF."""
    field, p = m.field, m.field.p
    rows, pivots = rref_raw(_raw_rows(m), m.cols, p)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [0] * m.cols
        v[free] = 1
        for row, pc in zip(rows, pivots):
            v[pc] = -row[free] if p is None else (-row[free]) % p
        basis.append(Mat.column(_wrap(v, field), field))
    return basis


def nullity(m: Mat) -> int:
    return m.cols - rank(m)


def left_nullspace(m: Mat) -> List[Mat]:
    return [v.T for v in nullspace(m.T)]


def solve(a: Mat, b: Mat) -> Mat:
    """Unique X with a·X = b; a must have full column rank and the system must be consistent."""
    if a.field != b.field:
        raise MixedField(f"{a.field.tag} vs {b.field.tag}")
    if a.rows != b.rows:
        raise DimMismatch(f"Cannot solve {a.shape} against {b.shape}")
    p = a.field.p
    aug = [ra + rb for ra, rb in zip(_raw_rows(a), _raw_rows(b))]
    rows, pivots = rref_raw(aug, a.cols + b.cols, p)
    if len([c for c in pivots if c < a.cols]) < a.cols:
        raise SingularSystem(f"Coefficient matrix {a.shape} is rank deficient")
    if any(c >= a.cols for c in pivots):
        raise SingularSystem("Inconsistent linear system")
    solution = [row[a.cols:] for row in rows[:a.cols]]
    return Mat.from_rows([_wrap(r, a.field) for r in solution], a.field, cols=b.cols)


def inverse(a: Mat) -> Mat:
    if not a.is_square:
        raise DimMismatch(f"Cannot invert a {a.shape} matrix")
    return solve(a, Mat.identity(a.rows, a.field))


def solve_sylvester(a: Mat, b: Mat, c: Mat) -> Mat:
    """
    Unique X with a·X − X·b = c.

    The equation is vectorized with unknown X[t, s] at index t·l + s; a
    singular system means the spectra of a and b meet.
    """
    m, l = a.rows, b.rows
    if not a.is_square or not b.is_square or c.shape != (m, l):
        raise DimMismatch(f"Sylvester shapes {a.shape}, {b.shape}, {c.shape} do not fit")
    field = a.field
    if m == 0 or l == 0:
        return Mat.zeros(m, l, field)
    zero = field.zero
    system = [[zero] * (m * l) for _ in range(m * l)]
    for r in range(m):
        for s in range(l):
            eq = system[r * l + s]
            for t in range(m):
                if a[r, t]:
                    eq[t * l + s] = eq[t * l + s] + a[r, t]
            for u in range(l):
                if b[u, s]:
                    eq[r * l + u] = eq[r * l + u] - b[u, s]
    rhs = Mat.column(c.flatten(), field)
    try:
        x = solve(Mat.from_rows(system, field, cols=m * l), rhs)
    except SingularSystem:
        raise SpectraOverlap(f"Sylvester system of size {m * l} is singular; spectra overlap")
    return Mat(m, l, x.entries, field)


def column_space_basis(m: Mat) -> Mat:
    """Columns forming a basis of the column space (RREF of the transpose)."""
    reduced, _ = rref(m.T)
    return reduced.T if reduced.rows else Mat.zeros(m.rows, 0, m.field)


def row_space_basis(m: Mat) -> Mat:
    reduced, _ = rref(m)
    return reduced if reduced.rows else Mat.zeros(0, m.cols, m.field)


def in_column_span(basis: Mat, v: Mat) -> bool:
    return rank(Mat.hstack([basis, v])) == rank(basis)


def same_column_span(a: Mat, b: Mat) -> bool:
    ra = rank(a)
    return ra == rank(b) and rank(Mat.hstack([a, b])) == ra


def express_in_basis(basis: Mat, v: Mat) -> Mat:
    """Coordinates of the columns of v in the independent columns of `basis`."""
    return solve(basis, v)
