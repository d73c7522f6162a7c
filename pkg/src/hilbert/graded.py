import itertools
import logging
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Dict, List, Optional, Tuple

import sympy
from joblib import Parallel, delayed

from src.adhm import AdhmDatum, Flavor, GroupKind, GroupSpec, act, tangent_basis
from src.adhm.moment import Tangent, flatten_tangent, infinitesimal_action
from src.adhm.spectrum import from_sympy_scalar, to_sympy_matrix
from src.forms import orientation_reversing_element
from src.linalg import QQ, ExactScalar, Field, Mat, SparseEchelon, express_in_basis, nullspace
from src.utils.errors import InvariantViolation, MissingComponent, WorkLimit

logger = logging.getLogger('adhmlab.hilbert')

Monomial = Tuple[int, ...]
Polynomial = Dict[Monomial, ExactScalar]


def monomials(n_vars: int, degree: int) -> List[Monomial]:
    """Exponent vectors of total degree `degree`, in a fixed order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(n_vars), degree):
        exps = [0] * n_vars
        for c in combo:
            exps[c] += 1
        out.append(tuple(exps))
    return out


def monomial_count(n_vars: int, degree: int) -> int:
    return comb(n_vars + degree - 1, degree) if degree >= 0 else 0


def _add_exponents(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _accumulate(out: Polynomial, mono: Monomial, value):
    total = out.get(mono, 0) + value
    if total:
        out[mono] = total
    else:
        out.pop(mono, None)


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    out: Polynomial = {}
    for ma, ca in p.items():
        for mb, cb in q.items():
            _accumulate(out, _add_exponents(ma, mb), ca * cb)
    return out


def apply_derivation(a: Mat, poly: Polynomial) -> Polynomial:
    """D(x^α) = Σ_c α_c x^(α − e_c) D(x_c), with D(x_c) = Σ_c' a[c, c'] x_c'."""
    out: Polynomial = {}
    for mono, coeff in poly.items():
        for c, power in enumerate(mono):
            if not power:
                continue
            for c2 in range(a.cols):
                weight = a[c, c2]
                if not weight:
                    continue
                shifted = list(mono)
                shifted[c] -= 1
                shifted[c2] += 1
                _accumulate(out, tuple(shifted), coeff * weight * power)
    return out


def apply_linear_substitution(t: Mat, poly: Polynomial) -> Polynomial:
    """Substitute x_c ↦ Σ_c' t[c, c'] x_c' into poly."""
    n = t.cols
    images = []
    for c in range(t.rows):
        linear: Polynomial = {}
        for c2 in range(n):
            if t[c, c2]:
                linear[tuple(1 if s == c2 else 0 for s in range(n))] = t[c, c2]
        images.append(linear)
    out: Polynomial = {}
    for mono, coeff in poly.items():
        term: Polynomial = {(0,) * n: coeff}
        for c, power in enumerate(mono):
            for _ in range(power):
                term = poly_mul(term, images[c])
        for m, value in term.items():
            _accumulate(out, m, value)
    return out


@dataclass(frozen=True)
class GradedSetup:
    """
    Polynomial ring on the coordinates of N (or M), the quadratic entries of μ,
    and the infinitesimal gauge action as derivation matrices.
    """
    flavor: Flavor
    k: int
    n: int
    ambient_dim: int
    relations: Tuple[Polynomial, ...]
    derivations: Tuple[Mat, ...]
    group_kind: GroupKind
    field: Field = QQ
    extra_component: Optional[Mat] = None

    def __post_init__(self):
        for r in self.relations:
            if any(sum(m) != 2 or len(m) != self.ambient_dim for m in r):
                raise InvariantViolation("Relations must be quadratic forms in the ambient coordinates")
        for a in self.derivations:
            if a.shape != (self.ambient_dim, self.ambient_dim):
                raise InvariantViolation(f"Derivation matrix {a.shape} does not fit {self.ambient_dim} coordinates")


def _point_datum(d: AdhmDatum, t: Tangent) -> AdhmDatum:
    return AdhmDatum(d.flavor, t[0], t[1], t[2], t[3], d.v_space, d.w_space)


def _coordinate_matrix(basis: List[Tangent], field: Field) -> Mat:
    return Mat.from_rows([flatten_tangent(t) for t in basis], field).T


def coordinate_action(d: AdhmDatum, g: Mat) -> Mat:
    """Matrix of x ↦ g·x on the coordinates of tangent_basis(d); column t is g·e_t."""
    basis = tangent_basis(d)
    coords = _coordinate_matrix(basis, d.field)
    images = [Mat.column(flatten_tangent(_as_tangent(act(_point_datum(d, t), g))), d.field) for t in basis]
    return express_in_basis(coords, Mat.hstack(images))


def _as_tangent(d: AdhmDatum) -> Tangent:
    return d.b1, d.b2, d.i, d.j


def _relations(d: AdhmDatum, basis: List[Tangent]) -> List[Polynomial]:
    field = d.field
    xs = sympy.symbols(f'x0:{len(basis)}')
    k, n = d.k, d.n
    parts = [sympy.zeros(k, k), sympy.zeros(k, k), sympy.zeros(k, n), sympy.zeros(n, k)]
    for x, t in zip(xs, basis):
        for slot in range(4):
            if not t[slot].is_zero():
                parts[slot] += x * to_sympy_matrix(t[slot])
    b1, b2, i, j = parts
    mu = b1 * b2 - b2 * b1 + i * j
    if d.flavor.has_forms:
        gram = to_sympy_matrix(d.v_space.gram)
        mu = (mu - to_sympy_matrix(d.v_space.gram_inverse) * mu.T * gram) / 2
    options = {'domain': 'QQ'} if field.is_rational else {'modulus': field.p}
    echelon = SparseEchelon(field)
    index = {m: s for s, m in enumerate(monomials(len(basis), 2))}
    relations = []
    for expr in mu:
        expr = sympy.expand(expr)
        if expr == 0:
            continue
        poly = {tuple(m): from_sympy_scalar(c, field) for m, c in sympy.Poly(expr, *xs, **options).terms() if c}
        if poly and echelon.add({index[m]: c for m, c in poly.items()}) is not None:
            relations.append(poly)
    return relations


def setup_for(flavor, k: int, n: int, field: Field = QQ) -> GradedSetup:
    """Graded setup for μ⁻¹(0) ⊂ N (so/sp data) or M (ordinary data) at charge k, framing N."""
    d = AdhmDatum.zero(flavor, k, n, field)
    basis = tangent_basis(d)
    coords = _coordinate_matrix(basis, field)
    group = GroupSpec.for_datum(d)
    derivations = []
    for xi in group.lie_algebra_basis(field):
        images = [Mat.column(flatten_tangent(infinitesimal_action(_point_datum(d, t), xi)), field) for t in basis]
        derivations.append(express_in_basis(coords, Mat.hstack(images)))
    extra = None
    if group.kind is GroupKind.O and k > 0:
        extra = coordinate_action(d, orientation_reversing_element(d.v_space))
    relations = _relations(d, basis) if basis else []
    logger.debug(f"Setup {d.flavor.value} k={k} N={n}: {len(basis)} coordinates, "
                 f"{len(relations)} relations, {len(derivations)} derivations")
    return GradedSetup(d.flavor, k, n, len(basis), tuple(relations), tuple(derivations), group.kind, field, extra)


@dataclass
class GradedPiece:
    """Degree-d monomials together with an echelon basis of the ideal in that degree."""
    degree: int
    monomials: List[Monomial]
    index: Dict[Monomial, int]
    ideal: SparseEchelon

    @property
    def quotient_basis(self) -> List[Monomial]:
        pivots = set(self.ideal.pivots)
        return [m for s, m in enumerate(self.monomials) if s not in pivots]

    @property
    def quotient_dim(self) -> int:
        return len(self.monomials) - self.ideal.rank

    def reduce(self, poly: Polynomial) -> Dict[int, ExactScalar]:
        return self.ideal.reduce({self.index[m]: c for m, c in poly.items()})


def graded_piece(setup: GradedSetup, d: int, work_limit: Optional[int] = None) -> GradedPiece:
    count = monomial_count(setup.ambient_dim, d)
    if work_limit is not None and count > work_limit:
        raise WorkLimit(f"Degree {d} has {count} monomials, over the limit {work_limit}")
    monos = monomials(setup.ambient_dim, d)
    index = {m: s for s, m in enumerate(monos)}
    ideal = SparseEchelon(setup.field)
    if d >= 2:
        for m in monomials(setup.ambient_dim, d - 2):
            for r in setup.relations:
                ideal.add({index[_add_exponents(m, rm)]: c for rm, c in r.items()})
    return GradedPiece(d, monos, index, ideal)


def graded_quotient_dim(setup: GradedSetup, d: int, work_limit: Optional[int] = None) -> int:
    """dim of the degree-d piece of the coordinate ring of μ⁻¹(0)."""
    return graded_piece(setup, d, work_limit).quotient_dim


def invariant_basis(setup: GradedSetup, d: int, work_limit: Optional[int] = None) -> List[Polynomial]:
    """
    Representatives of the degree-d invariants of the quotient ring.

    Joint kernel of the derivations on the quotient piece; for O(k) also the
    fixed space of the orientation-reversing element.
    """
    if setup.group_kind is GroupKind.O and setup.k > 0 and setup.extra_component is None:
        raise MissingComponent("O(k) invariants need an orientation-reversing element")
    piece = graded_piece(setup, d, work_limit)
    quotient = piece.quotient_basis
    position = {piece.index[m]: s for s, m in enumerate(quotient)}
    if not quotient:
        return []
    field = setup.field
    constraint_rows: List[List] = []

    def append_block(columns: List[Dict[int, ExactScalar]]):
        block = [[field.zero] * len(quotient) for _ in quotient]
        for col, image in enumerate(columns):
            for idx, value in image.items():
                block[position[idx]][col] = value
        constraint_rows.extend(block)

    for a in setup.derivations:
        append_block([piece.reduce(apply_derivation(a, {m: field.one})) for m in quotient])
    if setup.extra_component is not None:
        columns = []
        for m in quotient:
            image = piece.reduce(apply_linear_substitution(setup.extra_component, {m: field.one}))
            _accumulate(image, piece.index[m], -field.one)
            columns.append(image)
        append_block(columns)
    if not constraint_rows:
        return [{m: field.one} for m in quotient]
    kernel = nullspace(Mat.from_rows(constraint_rows, field, cols=len(quotient)))
    return [{m: v[s, 0] for s, m in enumerate(quotient) if v[s, 0]} for v in kernel]


def invariant_dim(setup: GradedSetup, d: int, work_limit: Optional[int] = None) -> int:
    return len(invariant_basis(setup, d, work_limit))


@dataclass
class HilbertTruncation:
    """Coefficients of the Hilbert series up to some degree, index = degree."""
    coeffs: List[int] = dc_field(default_factory=list)
    ring: bool = False

    @property
    def dmax(self) -> int:
        return len(self.coeffs) - 1

    @property
    def constant_term(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def first_difference(self, other: List[int]) -> Optional[int]:
        return compare_series(self.coeffs, other)


def _degree_value(setup: GradedSetup, d: int, ring: bool, work_limit: Optional[int]) -> int:
    if ring:
        return graded_quotient_dim(setup, d, work_limit)
    return invariant_dim(setup, d, work_limit)


def hilbert_truncated(setup: GradedSetup, dmax: int, ring: bool = False, workers: int = 1,
                      backend: str = 'loky', work_limit: Optional[int] = 3000) -> HilbertTruncation:
    """Invariant (or, with ring=True, quotient ring) dimensions for degrees 0..dmax, one job per degree."""
    top = monomial_count(setup.ambient_dim, dmax)
    if work_limit is not None and top > work_limit:
        raise WorkLimit(f"Degree {dmax} needs {top} monomials, over the limit {work_limit}")
    logger.info(f"Hilbert truncation {setup.flavor.value} k={setup.k} N={setup.n} to degree {dmax}"
                f"{' (ring)' if ring else ''} on {workers} worker(s)")
    values = Parallel(n_jobs=workers, backend=backend)(
        delayed(_degree_value)(setup, d, ring, work_limit) for d in range(dmax + 1)
    )
    return HilbertTruncation(list(values), ring)


def complete_intersection_series(n_vars: int, n_relations: int, dmax: int) -> List[int]:
    """Coefficients of (1 − t²)^r / (1 − t)^n."""
    return [sum((-1) ** s * comb(n_relations, s) * monomial_count(n_vars, d - 2 * s)
                for s in range(n_relations + 1) if d - 2 * s >= 0)
            for d in range(dmax + 1)]


def hypersurface_dim(n_vars: int, d: int) -> int:
    """Degree-d piece of a polynomial ring in n variables modulo one quadric."""
    return monomial_count(n_vars, d) - monomial_count(n_vars, d - 2)


def convolve(a: List[int], b: List[int]) -> List[int]:
    size = min(len(a), len(b))
    return [sum(a[s] * b[d - s] for s in range(d + 1)) for d in range(size)]


def usp1_pair_series(n: int, dmax: int, workers: int = 1, backend: str = 'loky',
                     work_limit: Optional[int] = 3000) -> List[int]:
    """Σ over n1 + n2 = n of H(U_n1)·H(U_n2), U_m the USp(1) data of charge m (O(m) gauge group)."""
    cache: Dict[int, List[int]] = {0: [1] + [0] * dmax}

    def series(m: int) -> List[int]:
        if m not in cache:
            setup = setup_for(Flavor.SP_DATA, m, 2)
            cache[m] = hilbert_truncated(setup, dmax, workers=workers, backend=backend,
                                         work_limit=work_limit).coeffs
        return cache[m]

    total = [0] * (dmax + 1)
    for n1 in range(n + 1):
        for d, c in enumerate(convolve(series(n1), series(n - n1))):
            total[d] += c
    return total


def compare_series(a: List[int], b: List[int]) -> Optional[int]:
    """First degree where two truncations differ, or None when they agree on their common range."""
    return next((d for d, (x, y) in enumerate(zip(a, b)) if x != y), None)


def differing_degrees(a: List[int], b: List[int]) -> List[int]:
    return [d for d, (x, y) in enumerate(zip(a, b)) if x != y]
