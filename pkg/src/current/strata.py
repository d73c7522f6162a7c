import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

from src.utils.errors import BadRank, OutOfRange

logger = logging.getLogger('adhmlab.current')


@dataclass(frozen=True)
class StratumEntry:
    rank_class: int
    stabilizer_dim: int
    dim: int
    attained: Optional[bool] = None


@dataclass(frozen=True)
class StrataTable:
    r: int
    n: int
    entries: Tuple[StratumEntry, ...]

    @property
    def group_dim(self) -> int:
        return 3 * self.n

    @property
    def space_dim(self) -> int:
        return 2 * self.r * self.n

    @property
    def modality(self) -> int:
        """max over strata of (stratum dim − orbit dim), orbit dim = 3n − s."""
        return max(e.dim - (self.group_dim - e.stabilizer_dim) for e in self.entries)

    def modality_attained_by(self) -> List[StratumEntry]:
        top = self.modality
        return [e for e in self.entries if e.dim - (self.group_dim - e.stabilizer_dim) == top]

    def entry(self, rank_class: int, stabilizer_dim: int) -> Optional[StratumEntry]:
        return next((e for e in self.entries
                     if e.rank_class == rank_class and e.stabilizer_dim == stabilizer_dim), None)

    def satisfies_flatness(self) -> bool:
        return flatness_criterion(self.modality, self.space_dim, self.group_dim)


def flatness_criterion(modality: int, dim_v: int, dim_g: int) -> bool:
    """The cotangent moment map is flat iff mod(G:V) <= dim V − dim G."""
    return modality <= dim_v - dim_g


def strata_dims(r: int, n: int) -> StrataTable:
    """
    Stratum dimensions of sl2[z]/(z^n) acting on L(k^r, T[z]/(z^n)).

    Level 1: rank 2 (s=0, dim 2r), rank 1 (s=1, dim r+1), zero (s=3, dim 0).
    Rank-2 points at level n form an open stratum of dim 2rn with s=0. Rank-1
    points with stabilizer z^(n−s)-cyclic of dim s fill dim s(r+1) + 2r(n−s).
    Rank-0 points are z times a level n−1 point: same rank class shifted to
    the rank-0 class with s raised by 3.
    """
    if r < 2:
        raise BadRank(f"Strata need r >= 2, got {r}")
    if n < 1:
        raise OutOfRange(f"Truncation order must be >= 1, got {n}")
    if n == 1:
        entries = [StratumEntry(2, 0, 2 * r), StratumEntry(1, 1, r + 1), StratumEntry(0, 3, 0)]
        return StrataTable(r, n, tuple(entries))
    previous = strata_dims(r, n - 1)
    entries = [StratumEntry(2, 0, 2 * r * n)]
    entries += [StratumEntry(1, s, s * (r + 1) + 2 * r * (n - s)) for s in range(1, n + 1)]
    shifted: Dict[int, int] = {}
    for e in previous.entries:
        s = e.stabilizer_dim + 3
        shifted[s] = max(shifted.get(s, -1), e.dim)
    entries += [StratumEntry(0, s, dim) for s, dim in sorted(shifted.items())]
    table = StrataTable(r, n, tuple(entries))
    logger.debug(f"Strata r={r} n={n}: {len(entries)} entries, modality {table.modality}")
    return table


def mark_attained(table: StrataTable, counts: Dict[Tuple[int, int], int], p: int) -> StrataTable:
    """
    Flag each entry whose census count fits its dimension.

    A stratum of dimension D over F_p has about p^D points; the entry counts
    as attained when p^(2D−1) < count² < p^(2D+1).
    """
    marked = []
    for e in table.entries:
        count = counts.get((e.rank_class, e.stabilizer_dim), 0)
        if e.dim == 0:
            attained = count == 1
        else:
            attained = p ** (2 * e.dim - 1) < count * count < p ** (2 * e.dim + 1)
        marked.append(replace(e, attained=attained))
    return replace(table, entries=tuple(marked))


@dataclass(frozen=True)
class RegularNilpotentStrata:
    """Strata of k[z]/(z^k) acting on N copies of k[z]/(z^k): orbit dim s has stratum dim sN."""
    k: int
    n: int

    @property
    def entries(self) -> List[Tuple[int, int]]:
        return [(s, s * self.n) for s in range(self.k + 1)]

    @property
    def modality(self) -> int:
        return max(dim - s for s, dim in self.entries)


def regular_nilpotent_strata(k: int, n: int) -> RegularNilpotentStrata:
    if k < 1 or n < 1:
        raise OutOfRange(f"Need k, N >= 1, got k={k}, N={n}")
    return RegularNilpotentStrata(k, n)
