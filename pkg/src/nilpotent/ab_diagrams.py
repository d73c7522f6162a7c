import itertools
import logging
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from src.forms import BilinearSpace, FormKind, lie_algebra_basis, right_adjoint
from src.linalg import QQ, Field, Mat, nullspace, rank
from src.linalg.matrix import commutator
from src.nilpotent.partitions import Partition
from src.utils.errors import InvariantViolation, ParseError, RuleUnavailable

logger = logging.getLogger('adhmlab.nilpotent')

# Letter a marks basis vectors of the orthogonal space W, letter b those of the symplectic space V.
ORTHOGONAL_LETTER = 'a'
SYMPLECTIC_LETTER = 'b'
_SIGN = {ORTHOGONAL_LETTER: 1, SYMPLECTIC_LETTER: -1}

_TO_SUPERSCRIPT = str.maketrans('0123456789', '⁰¹²³⁴⁵⁶⁷⁸⁹')
_FROM_SUPERSCRIPT = str.maketrans('⁰¹²³⁴⁵⁶⁷⁸⁹', '0123456789')
_TOKEN = re.compile(r'^([ab]+)(?:\^(\d+)|([⁰¹²³⁴⁵⁶⁷⁸⁹]+))?$')


def _other(letter: str) -> str:
    return SYMPLECTIC_LETTER if letter == ORTHOGONAL_LETTER else ORTHOGONAL_LETTER


def alternating_row(start: str, length: int) -> str:
    return ''.join(start if t % 2 == 0 else _other(start) for t in range(length))


def _row_key(row: str):
    # Longest rows first; among equal lengths odd rows list b-rows first, even rows ab before ba.
    leads = row[0] == (SYMPLECTIC_LETTER if len(row) % 2 else ORTHOGONAL_LETTER)
    return -len(row), 0 if leads else 1


@dataclass(frozen=True)
class AbDiagram:
    """Rows of alternating letters a (vectors of W) and b (vectors of V)."""
    rows: Tuple[str, ...]

    def __post_init__(self):
        rows = tuple(self.rows)
        for row in rows:
            if not row or set(row) - {'a', 'b'}:
                raise ParseError(f"Row {row!r} is not a word in a, b")
            if any(x == y for x, y in zip(row, row[1:])):
                raise ParseError(f"Row {row!r} does not alternate")
        object.__setattr__(self, 'rows', tuple(sorted(rows, key=_row_key)))

    @classmethod
    def parse(cls, label: str) -> 'AbDiagram':
        """Reads labels like 'bab/b²/a⁴' or 'bab/b^2/a^4'."""
        label = label.strip()
        if label in ('', '0'):
            return cls(())
        rows = []
        for token in label.split('/'):
            match = _TOKEN.match(token.strip())
            if not match:
                raise ParseError(f"Bad diagram row {token!r}", location=label)
            word, caret, sup = match.groups()
            count = int(caret or (sup.translate(_FROM_SUPERSCRIPT) if sup else 1))
            rows += [word] * count
        return cls(tuple(rows))

    @property
    def label(self) -> str:
        if not self.rows:
            return '0'
        parts = []
        for row, group in itertools.groupby(self.rows):
            count = len(list(group))
            if len(row) == 1 and count > 1:
                parts.append(row + str(count).translate(_TO_SUPERSCRIPT))
            else:
                parts += [row] * count
        return '/'.join(parts)

    def __str__(self):
        return self.label

    @property
    def k(self) -> int:
        return sum(row.count(SYMPLECTIC_LETTER) for row in self.rows)

    @property
    def n(self) -> int:
        return sum(row.count(ORTHOGONAL_LETTER) for row in self.rows)

    @property
    def b_partition(self) -> Partition:
        """Jordan type of ii* on V."""
        return Partition(tuple(c for c in (row.count(SYMPLECTIC_LETTER) for row in self.rows) if c))

    @property
    def a_partition(self) -> Partition:
        """Jordan type of i*i on W."""
        return Partition(tuple(c for c in (row.count(ORTHOGONAL_LETTER) for row in self.rows) if c))

    @property
    def is_square_zero(self) -> bool:
        """(ii*)² = 0: no row carries three b's."""
        return all(row.count(SYMPLECTIC_LETTER) <= 2 for row in self.rows)

    @property
    def ii_star_zero(self) -> bool:
        return all(row.count(SYMPLECTIC_LETTER) <= 1 for row in self.rows)

    def admissibility_violations(self) -> List[str]:
        problems = []
        even_lengths = {len(r) for r in self.rows if len(r) % 2 == 0}
        for length in sorted(even_lengths):
            ab = sum(1 for r in self.rows if len(r) == length and r[0] == 'a')
            ba = sum(1 for r in self.rows if len(r) == length and r[0] == 'b')
            if ab != ba:
                problems.append(f"{ab} rows {alternating_row('a', length)} against {ba} rows "
                                f"{alternating_row('b', length)}")
        for row in sorted(set(self.rows), key=_row_key):
            if len(row) % 2 and row[len(row) // 2] == SYMPLECTIC_LETTER and self.rows.count(row) % 2:
                problems.append(f"row {row} occurs an odd number of times")
        return problems

    @property
    def is_admissible(self) -> bool:
        return not self.admissibility_violations()


def enumerate_ab_diagrams(k: int, n: int, square_zero: bool = False) -> List[AbDiagram]:
    """All admissible diagrams with k letters b and n letters a."""
    max_b = 2 if square_zero else k
    types = []
    for length in range(1, k + n + 1):
        for start in (SYMPLECTIC_LETTER, ORTHOGONAL_LETTER):
            row = alternating_row(start, length)
            if row.count('a') <= n and row.count('b') <= min(k, max_b):
                types.append(row)
    found: List[AbDiagram] = []

    def extend(index: int, rows: List[str], left_a: int, left_b: int):
        if left_a == 0 and left_b == 0:
            diagram = AbDiagram(tuple(rows))
            if diagram.is_admissible:
                found.append(diagram)
            return
        if index == len(types):
            return
        row = types[index]
        ra, rb = row.count('a'), row.count('b')
        count = 0
        while count * ra <= left_a and count * rb <= left_b:
            extend(index + 1, rows + [row] * count, left_a - count * ra, left_b - count * rb)
            count += 1

    extend(0, [], n, k)
    found.sort(key=lambda d: [_row_key(r) for r in d.rows])
    logger.debug(f"{len(found)} admissible diagram(s) for k={k}, N={n}, square_zero={square_zero}")
    return found


def sp_orbit_dim(partition: Partition) -> int:
    """Dimension of the nilpotent Sp orbit of Jordan type `partition`."""
    m = partition.size
    dual_sq = sum(q * q for q in partition.dual().parts)
    return (m * (m + 1) - dual_sq - partition.odd_parts) // 2


def o_orbit_dim(partition: Partition) -> int:
    """Dimension of the nilpotent O orbit of Jordan type `partition`."""
    m = partition.size
    dual_sq = sum(q * q for q in partition.dual().parts)
    return (m * (m - 1) - dual_sq + partition.odd_parts) // 2


# Δ, dim Sp(V).ii*, dim O(W).i*i, dim of the pair orbit, for k = 4, N = 5.
GOLDEN_TABLE: Dict[str, Tuple[int, int, int, int]] = {
    'ababa/bab/a': (0, 6, 6, 16),
    'abab/baba/a': (0, 6, 4, 15),
    'bab/bab/a³': (0, 6, 0, 13),
    'ababa/ab/ba': (0, 4, 6, 15),
    'ababa/b²/a²': (4, 4, 6, 13),
    'bab/aba/aba': (2, 4, 4, 13),
    'bab/ab/ba/a²': (0, 4, 0, 12),
    'bab/b²/a⁴': (6, 4, 0, 9),
    'aba/aba/b²/a': (2, 0, 4, 11),
    'ab/ba/b²/a³': (6, 0, 0, 7),
    'b⁴/a⁵': (20, 0, 0, 0),
}
GOLDEN_SHAPE = (4, 5)


@dataclass(frozen=True)
class Realization:
    """A point (i, i*) with the given diagram, on Gram matrices adapted to the rows."""
    diagram: AbDiagram
    i: Mat
    j: Mat
    v_space: BilinearSpace
    w_space: BilinearSpace


def _partners(rows: Tuple[str, ...]) -> List[int]:
    """Row paired with each row by the forms: itself, a twin copy, or the reversed even row."""
    partner = [-1] * len(rows)
    waiting: Dict[str, List[int]] = {}
    for r, row in enumerate(rows):
        if len(row) % 2 and row[len(row) // 2] == ORTHOGONAL_LETTER:
            partner[r] = r
            continue
        mate = row[::-1]
        if waiting.get(mate):
            q = waiting[mate].pop(0)
            partner[r], partner[q] = q, r
        else:
            waiting.setdefault(row, []).append(r)
    if -1 in partner:
        raise InvariantViolation("Diagram rows cannot be paired by the forms")
    return partner


def realize(diagram: AbDiagram, field: Field = QQ) -> Realization:
    """
    Basis vectors at the letters of the diagram, i sending each a to the next b
    and j each b to the next a. The pairing constants of V and W solve the
    linear conditions for symmetry type and j = i*.
    """
    if not diagram.is_admissible:
        raise InvariantViolation(f"Diagram {diagram} is not admissible: {diagram.admissibility_violations()}")
    rows = diagram.rows
    k, n = diagram.k, diagram.n
    index: Dict[Tuple[int, int], int] = {}
    counters = {'a': 0, 'b': 0}
    for r, row in enumerate(rows):
        for t, letter in enumerate(row):
            index[(r, t)] = counters[letter]
            counters[letter] += 1
    i_rows = [[0] * n for _ in range(k)]
    j_rows = [[0] * k for _ in range(n)]
    for r, row in enumerate(rows):
        for t in range(len(row) - 1):
            if row[t] == 'a':
                i_rows[index[(r, t + 1)]][index[(r, t)]] = 1
            else:
                j_rows[index[(r, t + 1)]][index[(r, t)]] = 1
    i = Mat.from_rows(i_rows, field, cols=n)
    j = Mat.from_rows(j_rows, field, cols=k)

    partner = _partners(rows)
    unknowns: Dict[Tuple[str, int, int], int] = {}
    for r, row in enumerate(rows):
        q, length = partner[r], len(row)
        for t, letter in enumerate(row):
            unknowns[(letter, index[(r, t)], index[(q, length - 1 - t)])] = len(unknowns)

    def entry(letter, x, y) -> Optional[int]:
        return unknowns.get((letter, x, y))

    equations = []
    for (letter, x, y), u in unknowns.items():
        eq = [0] * len(unknowns)
        eq[u] += 1
        eq[unknowns[(letter, y, x)]] -= _SIGN[letter]
        equations.append(eq)
    # G_W j = iᵀ G_V, entry (w, v)
    for w in range(n):
        for v in range(k):
            eq = [0] * len(unknowns)
            for x in range(n):
                u = entry('a', w, x)
                if u is not None and j_rows[x][v]:
                    eq[u] += j_rows[x][v]
            for y in range(k):
                u = entry('b', y, v)
                if u is not None and i_rows[y][w]:
                    eq[u] -= i_rows[y][w]
            if any(eq):
                equations.append(eq)
    system = Mat.from_rows(equations, field, cols=len(unknowns)) if equations \
        else Mat.zeros(0, len(unknowns), field)
    solutions = nullspace(system)
    values = [field.zero] * len(unknowns)
    for weight, vec in enumerate(solutions, start=1):
        for u in range(len(unknowns)):
            values[u] = values[u] + vec[u, 0] * field(weight)
    if any(not x for x in values):
        raise InvariantViolation(f"No nondegenerate forms realize {diagram}")
    g_v = [[0] * k for _ in range(k)]
    g_w = [[0] * n for _ in range(n)]
    for (letter, x, y), u in unknowns.items():
        (g_w if letter == 'a' else g_v)[x][y] = values[u]
    v_space = BilinearSpace(FormKind.SYMPLECTIC, Mat.from_rows(g_v, field, cols=k))
    w_space = BilinearSpace(FormKind.ORTHOGONAL, Mat.from_rows(g_w, field, cols=n))
    if right_adjoint(i, w_space, v_space) != j:
        raise InvariantViolation(f"Realization of {diagram} has j != i*")
    return Realization(diagram, i, j, v_space, w_space)


def _composite_rank(i: Mat, j: Mat, start: str, length: int) -> int:
    """Rank of the alternating word of `length` maps starting on W (start a) or V (start b)."""
    m = Mat.identity(i.cols if start == 'a' else i.rows, i.field)
    letter = start
    for _ in range(length):
        m = (i if letter == 'a' else j) @ m
        letter = _other(letter)
    return rank(m)


def diagram_from_map(i: Mat, v_space: BilinearSpace, w_space: BilinearSpace) -> AbDiagram:
    """
    Diagram of a nilpotent pair (i, i*) from ranks of alternating composites.

    The drop r_y(m) − r_y(m+1) counts rows of length > m whose letter m steps
    from the right end is y; differencing in m gives the rows by (last letter, length).
    """
    j = right_adjoint(i, w_space, v_space)
    top = i.rows + i.cols + 1
    ranks = {y: [_composite_rank(i, j, y, m) for m in range(top + 2)] for y in 'ab'}
    if ranks['a'][top] or ranks['b'][top]:
        raise InvariantViolation("ii* is not nilpotent; the map has no ab-diagram")
    drop = {y: [ranks[y][m] - ranks[y][m + 1] for m in range(top + 1)] for y in 'ab'}

    def longer_than(last: str, m: int) -> int:
        return drop[last if m % 2 == 0 else _other(last)][m]

    rows: List[str] = []
    for last in 'ab':
        for length in range(1, top + 1):
            count = longer_than(last, length - 1) - longer_than(last, length)
            start = last if length % 2 else _other(last)
            rows += [alternating_row(start, length)] * count
    return AbDiagram(tuple(rows))


@dataclass(frozen=True)
class MeasuredDims:
    dim_pair: int
    dim_sp: int
    dim_o: int
    delta: int


def measured_orbit_dims(diagram: AbDiagram, field: Field = QQ) -> MeasuredDims:
    """Ranks of the infinitesimal Sp(V) × O(W) action at a realization of the diagram."""
    real = realize(diagram, field)
    i, j = real.i, real.j
    sp_basis = lie_algebra_basis(real.v_space)
    o_basis = lie_algebra_basis(real.w_space)
    columns = [(xi @ i).flatten() for xi in sp_basis] + [(-(i @ eta)).flatten() for eta in o_basis]
    dim_pair = rank(Mat.from_rows(columns, field)) if columns else 0
    ii_star, i_star_i = i @ j, j @ i
    sp_cols = [commutator(xi, ii_star).flatten() for xi in sp_basis]
    o_cols = [commutator(eta, i_star_i).flatten() for eta in o_basis]
    dim_sp = rank(Mat.from_rows(sp_cols, field)) if sp_cols else 0
    dim_o = rank(Mat.from_rows(o_cols, field)) if o_cols else 0
    delta = diagram.k * diagram.n + dim_sp + dim_o - 2 * dim_pair
    return MeasuredDims(dim_pair, dim_sp, dim_o, delta)


@dataclass(frozen=True)
class OrbitDimensions:
    dim_sp: int
    dim_o: int
    delta: int
    dim_pair: int
    source: str
    validated: bool


def _golden_delta(diagram: AbDiagram, dim_sp: int, dim_o: int) -> int:
    if (diagram.k, diagram.n) != GOLDEN_SHAPE or diagram.label not in GOLDEN_TABLE:
        raise RuleUnavailable(f"No tabulated Δ for {diagram} (k={diagram.k}, N={diagram.n})")
    delta, g_sp, g_o, _ = GOLDEN_TABLE[diagram.label]
    if (g_sp, g_o) != (dim_sp, dim_o):
        raise InvariantViolation(
            f"Orbit formulas give ({dim_sp}, {dim_o}) for {diagram}, table has ({g_sp}, {g_o})"
        )
    return delta


def orbit_dim(diagram: AbDiagram, rule: str = 'golden') -> OrbitDimensions:
    """
    Orbit dimensions of a nilpotent pair from its diagram.

    dim_sp and dim_o come from the classical formulas on the b- and a-partitions;
    Δ comes from the tabulated values ('golden') or from the measured action rank
    ('measured'), and dim_pair = (dim_sp + dim_o + kN − Δ) / 2.
    """
    if not diagram.is_admissible:
        raise InvariantViolation(f"Diagram {diagram} is not admissible")
    dim_sp, dim_o = sp_orbit_dim(diagram.b_partition), o_orbit_dim(diagram.a_partition)
    validated = (diagram.k, diagram.n) == GOLDEN_SHAPE and diagram.label in GOLDEN_TABLE
    if rule == 'golden':
        delta = _golden_delta(diagram, dim_sp, dim_o)
    elif rule == 'measured':
        measured = measured_orbit_dims(diagram)
        if (measured.dim_sp, measured.dim_o) != (dim_sp, dim_o):
            raise InvariantViolation(
                f"Measured ({measured.dim_sp}, {measured.dim_o}) disagrees with the formulas "
                f"({dim_sp}, {dim_o}) for {diagram}"
            )
        delta = measured.delta
    else:
        raise RuleUnavailable(f"Unknown Δ rule {rule!r}")
    if not validated:
        logger.warning(f"Orbit formulas for {diagram} are outside the tabulated range (unvalidated)")
    twice = dim_sp + dim_o + diagram.k * diagram.n - delta
    if twice % 2:
        raise InvariantViolation(f"Odd pair-orbit dimension count for {diagram}")
    return OrbitDimensions(dim_sp, dim_o, delta, twice // 2, rule, validated)


@dataclass(frozen=True)
class AbTableRow:
    diagram: AbDiagram
    dims: OrbitDimensions
    zero_fibre_dim: Optional[int] = None


def ab_table(k: int, n: int, square_zero: bool = True, rule: str = 'golden') -> List[AbTableRow]:
    """
    Orbits of nilpotent pairs with their dimensions, tabulated rows first.

    With the golden rule, diagrams missing from the table fall back to the
    measured Δ. For k = 4 the fibre of μ⁻¹(0) over an orbit adds 8 when ii* = 0
    and 5 otherwise (the commutator fibres on p(V)).
    """
    order = list(GOLDEN_TABLE)
    out = []
    for diagram in enumerate_ab_diagrams(k, n, square_zero):
        try:
            dims = orbit_dim(diagram, rule)
        except RuleUnavailable:
            dims = orbit_dim(diagram, 'measured')
        fibre = None
        if k == 4:
            fibre = dims.dim_pair + (8 if diagram.ii_star_zero else 5)
        out.append(AbTableRow(diagram, dims, fibre))
    out.sort(key=lambda row: (order.index(row.diagram.label) if row.diagram.label in order else len(order),
                              -row.dims.dim_pair, row.diagram.label))
    return out
