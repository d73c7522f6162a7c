import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Tuple

from joblib import Parallel, delayed

from src.current.truncated import CurrentVector, cyclic_generator, stabilizer_dim, zero_rank_lift
from src.linalg import Field
from src.utils.errors import AdhmLabError, TooLarge

logger = logging.getLogger('adhmlab.current')


@dataclass
class Census:
    """Point counts of the F_p-points of V_n by stabilizer dimension."""
    r: int
    n: int
    p: int
    by_class: Dict[Tuple[int, int], int] = field(default_factory=dict)
    violations: int = 0

    @property
    def total(self) -> int:
        return sum(self.by_class.values())

    @property
    def by_stabilizer(self) -> Dict[int, int]:
        counts: Counter = Counter()
        for (_, s), c in self.by_class.items():
            counts[s] += c
        return dict(sorted(counts.items()))


def _check_point(x: CurrentVector, s: int) -> bool:
    """Pointwise stabilizer claims, by the rank of x0."""
    l = x.rank0
    if l == 2:
        return s == 0
    if l == 1:
        try:
            m_x, _ = cyclic_generator(x)
        except AdhmLabError:
            return False
        return s == x.n - m_x
    try:
        return s == zero_rank_lift(x)
    except AdhmLabError:
        return False


def _census_chunk(r: int, n: int, p: int, first: int) -> Tuple[Counter, int]:
    f = Field.prime(p)
    counts: Counter = Counter()
    violations = 0
    for rest in itertools.product(range(p), repeat=2 * r * n - 1):
        x = CurrentVector.from_vector(n, r, (first,) + rest, f)
        s = stabilizer_dim(x)
        counts[(x.rank0, s)] += 1
        if not _check_point(x, s):
            violations += 1
            logger.debug(f"Pointwise check failed at {x.to_vector()}")
    return counts, violations


def ff_census(r: int, n: int, p: int, workers: int = 1, max_points: int = 10 ** 8,
              backend: str = 'loky') -> Census:
    """Exhaustive stabilizer census over F_p, split across workers by the first coordinate."""
    Field.prime(p)
    points = p ** (2 * r * n)
    if points > max_points:
        raise TooLarge(f"p^(2rn) = {points} exceeds the census budget {max_points}")
    logger.info(f"Census r={r} n={n} p={p}: {points} points on {workers} worker(s)")
    chunks = Parallel(n_jobs=workers, backend=backend)(
        delayed(_census_chunk)(r, n, p, first) for first in range(p)
    )
    total: Counter = Counter()
    violations = 0
    for counts, bad in chunks:
        total.update(counts)
        violations += bad
    census = Census(r, n, p, dict(sorted(total.items())), violations)
    logger.info(f"Census done: {census.by_stabilizer}, {violations} violation(s)")
    return census
