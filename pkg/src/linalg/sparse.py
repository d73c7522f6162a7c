import logging
from typing import Dict, List, Optional

from src.linalg.fields import Field

logger = logging.getLogger('adhmlab.linalg')

SparseRow = Dict[int, object]


class SparseEchelon:
    """
    Incremental echelon basis of dict rows {column: scalar}.

    Each stored row has a distinct leading column and no entries in the leading
    columns of rows stored before it, so reduce() gives a unique normal form:
    the remainder has no entry in any pivot column.
    """

    def __init__(self, field: Field):
        self.field = field
        self.rows: Dict[int, SparseRow] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> List[int]:
        return sorted(self.rows)

    def reduce(self, row: SparseRow) -> SparseRow:
        f = {c: x for c, x in row.items() if x}
        done = -1
        while True:
            candidates = [c for c in f if c > done and c in self.rows]
            if not candidates:
                return f
            c = min(candidates)
            pivot_row = self.rows[c]
            factor = f[c] / pivot_row[c]
            for cc, y in pivot_row.items():
                value = f.get(cc, self.field.zero) - factor * y
                if value:
                    f[cc] = value
                else:
                    f.pop(cc, None)
            done = c

    def add(self, row: SparseRow) -> Optional[int]:
        """Insert a row; returns its new pivot column or None when it was dependent."""
        reduced = self.reduce(row)
        if not reduced:
            return None
        lead = min(reduced)
        self.rows[lead] = reduced
        return lead
