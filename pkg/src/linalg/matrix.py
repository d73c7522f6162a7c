import logging
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from src.linalg.fields import QQ, ExactScalar, Field
from src.utils.errors import DimMismatch, MixedField

logger = logging.getLogger('adhmlab.linalg')


@dataclass(frozen=True)
class Mat:
    """Dense immutable matrix over a single exact field, row-major."""
    rows: int
    cols: int
    entries: Tuple[ExactScalar, ...]
    field: Field = QQ

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimMismatch(f"Negative shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimMismatch(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        for x in self.entries:
            if not self.field.contains(x):
                raise MixedField(f"Entry {x!r} does not belong to {self.field.tag}")

    # Construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field = QQ, cols: int = None) -> 'Mat':
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise DimMismatch("Ragged rows")
        return cls(len(rows), cols, tuple(field(x) for r in rows for x in r), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = QQ) -> 'Mat':
        return cls(rows, cols, (field.zero,) * (rows * cols), field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> 'Mat':
        return cls.scalar(n, 1, field)

    @classmethod
    def scalar(cls, n: int, value, field: Field = QQ) -> 'Mat':
        value, zero = field(value), field.zero
        return cls(n, n, tuple(value if r == c else zero for r in range(n) for c in range(n)), field)

    @classmethod
    def diag(cls, values: Sequence, field: Field = QQ) -> 'Mat':
        n, zero = len(values), field.zero
        return cls(n, n, tuple(field(values[r]) if r == c else zero for r in range(n) for c in range(n)), field)

    @classmethod
    def column(cls, values: Sequence, field: Field = QQ) -> 'Mat':
        return cls(len(values), 1, tuple(field(x) for x in values), field)

    @classmethod
    def unit(cls, rows: int, cols: int, r: int, c: int, field: Field = QQ) -> 'Mat':
        """Matrix unit E_rc."""
        entries = [field.zero] * (rows * cols)
        entries[r * cols + c] = field.one
        return cls(rows, cols, tuple(entries), field)

    @classmethod
    def permutation(cls, perm: Sequence[int], field: Field = QQ) -> 'Mat':
        """Matrix sending basis vector e_t to e_perm[t]."""
        n = len(perm)
        entries = [field.zero] * (n * n)
        for t, image in enumerate(perm):
            entries[image * n + t] = field.one
        return cls(n, n, tuple(entries), field)

    @classmethod
    def hstack(cls, mats: Sequence['Mat'], rows: int = None, field: Field = None) -> 'Mat':
        mats = list(mats)
        if not mats:
            return cls.zeros(rows or 0, 0, field or QQ)
        field = mats[0].field
        rows = mats[0].rows
        if any(m.rows != rows for m in mats) or any(m.field != field for m in mats):
            raise DimMismatch("hstack needs equal row counts over one field")
        return cls.from_rows([sum((m.row(r) for m in mats), []) for r in range(rows)], field,
                             cols=sum(m.cols for m in mats))

    @classmethod
    def vstack(cls, mats: Sequence['Mat'], cols: int = None, field: Field = None) -> 'Mat':
        mats = list(mats)
        if not mats:
            return cls.zeros(0, cols or 0, field or QQ)
        field = mats[0].field
        cols = mats[0].cols
        if any(m.cols != cols for m in mats) or any(m.field != field for m in mats):
            raise DimMismatch("vstack needs equal column counts over one field")
        return cls(sum(m.rows for m in mats), cols, sum((m.entries for m in mats), ()), field)

    @classmethod
    def block(cls, grid: Sequence[Sequence['Mat']]) -> 'Mat':
        return cls.vstack([cls.hstack(row) for row in grid])

    @classmethod
    def block_diag(cls, mats: Sequence['Mat'], field: Field = None) -> 'Mat':
        mats = list(mats)
        if not mats:
            return cls.zeros(0, 0, field or QQ)
        field = mats[0].field
        total_cols = sum(m.cols for m in mats)
        out, offset = [], 0
        for m in mats:
            for r in range(m.rows):
                out.append([field.zero] * offset + m.row(r) + [field.zero] * (total_cols - offset - m.cols))
            offset += m.cols
        return cls.from_rows(out, field, cols=total_cols)

    # Access

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, rc: Tuple[int, int]) -> ExactScalar:
        r, c = rc
        return self.entries[r * self.cols + c]

    def row(self, r: int) -> List[ExactScalar]:
        return list(self.entries[r * self.cols:(r + 1) * self.cols])

    def col(self, c: int) -> List[ExactScalar]:
        return [self.entries[r * self.cols + c] for r in range(self.rows)]

    def to_rows(self) -> List[List[ExactScalar]]:
        return [self.row(r) for r in range(self.rows)]

    def column_vectors(self) -> List['Mat']:
        return [Mat.column(self.col(c), self.field) for c in range(self.cols)]

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> 'Mat':
        return Mat.from_rows([self.row(r)[c0:c1] for r in range(r0, r1)], self.field, cols=c1 - c0)

    def select_columns(self, indices: Iterable[int]) -> 'Mat':
        indices = list(indices)
        return Mat.from_rows([[self[r, c] for c in indices] for r in range(self.rows)], self.field,
                             cols=len(indices))

    def flatten(self) -> List[ExactScalar]:
        return list(self.entries)

    # Arithmetic

    def _check_same(self, other: 'Mat'):
        if self.field != other.field:
            raise MixedField(f"{self.field.tag} vs {other.field.tag}")
        if self.shape != other.shape:
            raise DimMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: 'Mat') -> 'Mat':
        self._check_same(other)
        return Mat(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)), self.field)

    def __sub__(self, other: 'Mat') -> 'Mat':
        self._check_same(other)
        return Mat(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)), self.field)

    def __neg__(self) -> 'Mat':
        return Mat(self.rows, self.cols, tuple(-a for a in self.entries), self.field)

    def scale(self, c) -> 'Mat':
        c = self.field(c)
        return Mat(self.rows, self.cols, tuple(c * a for a in self.entries), self.field)

    def __matmul__(self, other: 'Mat') -> 'Mat':
        if self.field != other.field:
            raise MixedField(f"{self.field.tag} vs {other.field.tag}")
        if self.cols != other.rows:
            raise DimMismatch(f"Cannot multiply {self.shape} by {other.shape}")
        zero = self.field.zero
        other_cols = [other.col(c) for c in range(other.cols)]
        out = []
        for r in range(self.rows):
            row = self.row(r)
            nz = [(t, x) for t, x in enumerate(row) if x]
            for col in other_cols:
                acc = zero
                for t, x in nz:
                    y = col[t]
                    if y:
                        acc = acc + x * y
                out.append(acc)
        return Mat(self.rows, other.cols, tuple(out), self.field)

    @property
    def T(self) -> 'Mat':
        return Mat(self.cols, self.rows,
                   tuple(self.entries[r * self.cols + c] for c in range(self.cols) for r in range(self.rows)),
                   self.field)

    def power(self, n: int) -> 'Mat':
        result = Mat.identity(self.rows, self.field)
        for _ in range(n):
            result = result @ self
        return result

    def trace(self) -> ExactScalar:
        acc = self.field.zero
        for t in range(min(self.rows, self.cols)):
            acc = acc + self[t, t]
        return acc

    def kron(self, other: 'Mat') -> 'Mat':
        if self.field != other.field:
            raise MixedField(f"{self.field.tag} vs {other.field.tag}")
        rows = []
        for r1 in range(self.rows):
            for r2 in range(other.rows):
                rows.append([self[r1, c1] * other[r2, c2] for c1 in range(self.cols) for c2 in range(other.cols)])
        return Mat.from_rows(rows, self.field, cols=self.cols * other.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def to_field(self, field: Field) -> 'Mat':
        """Reduce a rational matrix into `field` (identity when already there)."""
        if field == self.field:
            return self
        return Mat(self.rows, self.cols, tuple(field(x) for x in self.entries), field)

    def __repr__(self):
        body = '; '.join(' '.join(self.field.format(x) for x in self.row(r)) for r in range(self.rows))
        return f"Mat[{self.rows}x{self.cols}]({body})"


def commutator(a: Mat, b: Mat) -> Mat:
    return a @ b - b @ a


def anticommutator(a: Mat, b: Mat) -> Mat:
    return a @ b + b @ a
