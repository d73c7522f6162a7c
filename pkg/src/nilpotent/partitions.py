from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

from src.utils.errors import OutOfRange


@dataclass(frozen=True, order=True)
class Partition:
    """A weakly decreasing tuple of positive parts; stored sorted."""
    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(sorted((int(p) for p in self.parts), reverse=True))
        if any(p <= 0 for p in parts):
            raise OutOfRange(f"Partition parts must be positive, got {parts}")
        object.__setattr__(self, 'parts', parts)

    @classmethod
    def of(cls, *parts: int) -> 'Partition':
        return cls(tuple(parts))

    @classmethod
    def from_kernel_growth(cls, dims: Sequence[int]) -> 'Partition':
        """Jordan type from dim Ker Bˡ, l = 0, 1, 2, ... (dims[0] = 0)."""
        growth = [b - a for a, b in zip(dims, dims[1:]) if b > a]
        return cls(tuple(growth)).dual()

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def dual(self) -> 'Partition':
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > l) for l in range(self.parts[0])))

    @property
    def is_even_type(self) -> bool:
        """Every part of the dual is even, i.e. every part occurs an even number of times."""
        return all(q % 2 == 0 for q in self.dual().parts)

    def multiplicities(self) -> List[Tuple[int, int]]:
        out: List[Tuple[int, int]] = []
        for p in self.parts:
            if out and out[-1][0] == p:
                out[-1] = (p, out[-1][1] + 1)
            else:
                out.append((p, 1))
        return out

    @property
    def odd_parts(self) -> int:
        return sum(1 for p in self.parts if p % 2)

    def label(self) -> str:
        if not self.parts:
            return '()'
        return ' '.join(str(p) if m == 1 else f"{p}^{m}" for p, m in self.multiplicities())

    def __str__(self):
        return self.label()


def partitions(n: int, largest: int = None) -> Iterator[Partition]:
    """All partitions of n, parts in decreasing lexicographic order."""
    largest = n if largest is None else largest
    if n == 0:
        yield Partition(())
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield Partition((first,) + rest.parts)


def even_type_partitions(n: int) -> Iterator[Partition]:
    return (p for p in partitions(n) if p.is_even_type)


def partition_lists(total: int, even_type: bool = False) -> Iterator[Tuple[Partition, ...]]:
    """Ordered lists of nonempty partitions whose sizes sum to total."""
    if total == 0:
        yield ()
        return
    for size in range(1, total + 1):
        heads = even_type_partitions(size) if even_type else partitions(size)
        for head in heads:
            for tail in partition_lists(total - size, even_type):
                yield (head,) + tail
