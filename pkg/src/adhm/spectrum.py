import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

import sympy
from sympy import Poly, Rational, Symbol

from src.linalg import ExactScalar, Field, FpElement, Mat, nullspace
from src.utils.errors import DimMismatch, IrreducibleFactor

logger = logging.getLogger('adhmlab.adhm')

_t = Symbol('t')


@dataclass(frozen=True)
class Divisor:
    """Eigenvalues counted with multiplicity, sorted by value."""
    points: Tuple[Tuple[ExactScalar, int], ...]

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.points)

    @property
    def support(self) -> List[ExactScalar]:
        return [a for a, _ in self.points]

    def multiplicity(self, value) -> int:
        return next((m for a, m in self.points if a == value), 0)

    def disjoint(self, other: 'Divisor') -> bool:
        return not any(a == b for a in self.support for b in other.support)

    def as_dict(self) -> dict:
        return {a: m for a, m in self.points}


def to_sympy_matrix(b: Mat) -> sympy.Matrix:
    if b.field.is_rational:
        return sympy.Matrix(b.rows, b.cols, [Rational(x.numerator, x.denominator) for x in b.entries])
    return sympy.Matrix(b.rows, b.cols, [x.value for x in b.entries])


def characteristic_polynomial(b: Mat) -> Poly:
    """det(t·I − b) as a sympy Poly over QQ or GF(p)."""
    if not b.is_square:
        raise DimMismatch(f"Characteristic polynomial of a {b.shape} matrix")
    if b.rows == 0:
        expr = sympy.Integer(1)
    else:
        expr = to_sympy_matrix(b).charpoly(_t).as_expr()
    if b.field.is_rational:
        return Poly(expr, _t, domain='QQ')
    return Poly(expr, _t, modulus=b.field.p)


def from_sympy_scalar(coeff, field: Field) -> ExactScalar:
    if field.is_rational:
        coeff = Rational(coeff)
        return Fraction(int(coeff.p), int(coeff.q))
    return FpElement(int(coeff), field.p)


def eigenvalue_divisor(b: Mat) -> Divisor:
    """Roots of the characteristic polynomial; every factor must be linear over the base field."""
    poly = characteristic_polynomial(b)
    if b.rows == 0:
        return Divisor(())
    _, factors = poly.factor_list()
    points = {}
    for factor, mult in factors:
        if factor.degree() != 1:
            raise IrreducibleFactor(f"Characteristic polynomial has irreducible factor {factor.as_expr()}")
        lead, const = factor.all_coeffs()
        root = -from_sympy_scalar(const, b.field) / from_sympy_scalar(lead, b.field)
        points[root] = points.get(root, 0) + mult
    logger.debug(f"Eigenvalue divisor of {b.rows}x{b.rows} matrix: {points}")
    return Divisor(tuple(sorted(points.items(), key=lambda kv: kv[0])))


def generalized_eigenspace(b: Mat, value, multiplicity: int) -> Mat:
    """Columns spanning Ker (b − value)^multiplicity."""
    shifted = b - Mat.scalar(b.rows, value, b.field)
    basis = nullspace(shifted.power(multiplicity))
    return Mat.hstack(basis) if basis else Mat.zeros(b.rows, 0, b.field)
