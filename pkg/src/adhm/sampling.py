"""Seeded samplers for exact test data: group elements, self-adjoint maps and small ADHM blocks."""

import logging
import random
from fractions import Fraction
from typing import List, Optional, Tuple

from src.adhm.datum import AdhmDatum, Flavor
from src.forms import (BilinearSpace, FormKind, cayley_transform, lie_algebra_basis, right_adjoint,
                       self_adjoint_basis, standard_space)
from src.linalg import QQ, ExactScalar, Field, Mat, rank
from src.utils.errors import FieldError, SingularSystem

logger = logging.getLogger('adhmlab.adhm')


def random_scalar(rng: random.Random, field: Field = QQ, height: int = 4) -> ExactScalar:
    if field.is_rational:
        return Fraction(rng.randint(-height, height), rng.randint(1, height))
    return field(rng.randrange(field.p))


def random_matrix(rng: random.Random, rows: int, cols: int, field: Field = QQ, height: int = 4) -> Mat:
    return Mat(rows, cols, tuple(random_scalar(rng, field, height) for _ in range(rows * cols)), field)


def random_invertible(rng: random.Random, n: int, field: Field = QQ) -> Mat:
    while True:
        m = random_matrix(rng, n, n, field)
        if rank(m) == n:
            return m


def _combination(rng: random.Random, basis: List[Mat], field: Field, height: int) -> Mat:
    out = basis[0].scale(0)
    for b in basis:
        out = out + b.scale(random_scalar(rng, field, height))
    return out


def random_self_adjoint(rng: random.Random, space: BilinearSpace, height: int = 4) -> Mat:
    basis = self_adjoint_basis(space)
    if not basis:
        return Mat.zeros(space.dim, space.dim, space.field)
    return _combination(rng, basis, space.field, height)


def random_lie_element(rng: random.Random, space: BilinearSpace, height: int = 3) -> Mat:
    basis = lie_algebra_basis(space)
    if not basis:
        return Mat.zeros(space.dim, space.dim, space.field)
    return _combination(rng, basis, space.field, height)


def random_group_element(rng: random.Random, space: BilinearSpace, attempts: int = 50) -> Mat:
    """A form-preserving element from the Cayley transform of a random g(V) element."""
    for _ in range(attempts):
        try:
            return cayley_transform(random_lie_element(rng, space))
        except SingularSystem:
            continue
    raise FieldError(f"No Cayley-invertible element found in {attempts} attempts")


def isotropic_basis_pairs(space: BilinearSpace) -> List[Tuple[int, int]]:
    """Pairs (s, t) of basis vectors spanning a totally isotropic plane."""
    g = space.gram
    iso = [t for t in range(space.dim) if not g[t, t]]
    return [(s, t) for a, s in enumerate(iso) for t in iso[a + 1:] if not g[s, t]]


def random_isotropic_plane(rng: random.Random, w_space: BilinearSpace) -> Mat:
    """N×2 matrix whose columns span a random totally isotropic plane of W."""
    pairs = isotropic_basis_pairs(w_space)
    if not pairs:
        raise FieldError(f"No isotropic plane among the basis vectors of a dim {w_space.dim} space")
    s, t = pairs[0]
    n, field = w_space.dim, w_space.field
    plane = Mat.hstack([Mat.unit(n, 1, s, 0, field), Mat.unit(n, 1, t, 0, field)])
    return random_group_element(rng, w_space) @ plane


def square_zero_so_block(rng: random.Random, w_space: BilinearSpace, eigenvalue,
                         b2_value=None) -> AdhmDatum:
    """
    k=2 SO datum with B1 = λ, B2 = β scalars and ii* = 0, so μ = 0.

    i is the adjoint of a map V → W with isotropic image; it is surjective, so
    the block is regular.
    """
    field = w_space.field
    v_space = standard_space(FormKind.SYMPLECTIC, 2, field)
    j0 = random_isotropic_plane(rng, w_space) @ random_invertible(rng, 2, field)
    i = right_adjoint(j0, v_space, w_space)
    beta = random_scalar(rng, field) if b2_value is None else field(b2_value)
    return AdhmDatum.with_adjoint(Flavor.SO_DATA, Mat.scalar(2, eigenvalue, field), Mat.scalar(2, beta, field),
                                  i, v_space, w_space)


def usp1_block(rng: random.Random, eigenvalue, field: Field = QQ, b2_value=None,
               i: Optional[Mat] = None) -> AdhmDatum:
    """k=1 Sp datum (V orthogonal line, W the symplectic plane); μ vanishes identically."""
    v_space = standard_space(FormKind.ORTHOGONAL, 1, field)
    w_space = standard_space(FormKind.SYMPLECTIC, 2, field)
    if i is None:
        i = random_matrix(rng, 1, 2, field)
    beta = random_scalar(rng, field) if b2_value is None else field(b2_value)
    return AdhmDatum.with_adjoint(Flavor.SP_DATA, Mat.scalar(1, eigenvalue, field), Mat.scalar(1, beta, field),
                                  i, v_space, w_space)


def random_datum(rng: random.Random, flavor, k: int, n: int, field: Field = QQ) -> AdhmDatum:
    """Unconstrained point of N (or M for ordinary data); μ is generally nonzero."""
    flavor = Flavor(flavor)
    if flavor is Flavor.ORDINARY:
        return AdhmDatum(flavor, random_matrix(rng, k, k, field), random_matrix(rng, k, k, field),
                         random_matrix(rng, k, n, field), random_matrix(rng, n, k, field))
    v_space = standard_space(flavor.v_kind, k, field)
    w_space = standard_space(flavor.w_kind, n, field)
    return AdhmDatum.with_adjoint(flavor, random_self_adjoint(rng, v_space), random_self_adjoint(rng, v_space),
                                  random_matrix(rng, k, n, field), v_space, w_space)
