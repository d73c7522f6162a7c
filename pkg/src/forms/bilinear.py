import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import List, Optional, Sequence

from src.linalg import QQ, Field, Mat, inverse, nullspace, rank
from src.utils.errors import DimMismatch, FieldError, InvariantViolation, NotInGroup, OddSymplectic

logger = logging.getLogger('adhmlab.forms')


class FormKind(str, Enum):
    SYMPLECTIC = 'symplectic'
    ORTHOGONAL = 'orthogonal'

    @property
    def sign(self) -> int:
        """+1 when the Gram matrix is symmetric, -1 when antisymmetric."""
        return 1 if self is FormKind.ORTHOGONAL else -1

    @property
    def other(self) -> 'FormKind':
        return FormKind.ORTHOGONAL if self is FormKind.SYMPLECTIC else FormKind.SYMPLECTIC


@dataclass(frozen=True)
class BilinearSpace:
    """A vector space with a nondegenerate symmetric or antisymmetric form."""
    kind: FormKind
    gram: Mat

    def __post_init__(self):
        object.__setattr__(self, 'kind', FormKind(self.kind))
        g = self.gram
        if not g.is_square:
            raise DimMismatch(f"Gram matrix must be square, got {g.shape}")
        if self.kind is FormKind.SYMPLECTIC and g.rows % 2:
            raise OddSymplectic(f"Symplectic space of odd dimension {g.rows}")
        if g.T != g.scale(self.kind.sign):
            raise InvariantViolation(f"Gram matrix is not {'symmetric' if self.kind.sign > 0 else 'antisymmetric'}")
        if rank(g) != g.rows:
            raise InvariantViolation("Gram matrix is degenerate")

    @property
    def dim(self) -> int:
        return self.gram.rows

    @property
    def field(self) -> Field:
        return self.gram.field

    @property
    def sign(self) -> int:
        return self.kind.sign

    @cached_property
    def gram_inverse(self) -> Mat:
        return inverse(self.gram)

    def pair(self, u: Mat, v: Mat):
        """(u, v) = uᵀ G v for column vectors u, v."""
        return (u.T @ self.gram @ v)[0, 0]

    def to_field(self, field: Field) -> 'BilinearSpace':
        return BilinearSpace(self.kind, self.gram.to_field(field))

    def direct_sum(self, *others: 'BilinearSpace') -> 'BilinearSpace':
        if any(o.kind is not self.kind for o in others):
            raise DimMismatch("Direct sums need spaces of one kind")
        return BilinearSpace(self.kind, Mat.block_diag([self.gram] + [o.gram for o in others]))

    def tensor(self, other: 'BilinearSpace') -> 'BilinearSpace':
        kind = FormKind.ORTHOGONAL if self.kind is other.kind else FormKind.SYMPLECTIC
        return BilinearSpace(kind, self.gram.kron(other.gram))

    def zero_subspace(self) -> 'BilinearSpace':
        return BilinearSpace(self.kind, Mat.zeros(0, 0, self.field))


# Fixed reference Grams for sp(4) and o(5); other dimensions use split blocks.
_REFERENCE_GRAMS = {
    (FormKind.SYMPLECTIC, 4): [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
    (FormKind.ORTHOGONAL, 5): [[0, 1, 0, 0, 0], [1, 0, 0, 0, 0], [0, 0, 1, 0, 0],
                               [0, 0, 0, 0, 1], [0, 0, 0, 1, 0]],
}


def standard_space(kind, dim: int, field: Field = QQ) -> BilinearSpace:
    """
    Canonical space of the given kind and dimension.

    Symplectic: hyperbolic blocks [[0,1],[-1,0]]. Orthogonal: split blocks
    [[0,1],[1,0]] with a trailing 1 in odd dimension, except o(5) which puts the
    anisotropic line in the middle.
    """
    kind = FormKind(kind)
    if kind is FormKind.SYMPLECTIC and dim % 2:
        raise OddSymplectic(f"No symplectic form on a space of dimension {dim}")
    if (kind, dim) in _REFERENCE_GRAMS:
        return BilinearSpace(kind, Mat.from_rows(_REFERENCE_GRAMS[(kind, dim)], field))
    rows = [[0] * dim for _ in range(dim)]
    for t in range(0, dim - 1, 2):
        rows[t][t + 1] = 1
        rows[t + 1][t] = kind.sign
    if dim % 2:
        rows[dim - 1][dim - 1] = 1
    return BilinearSpace(kind, Mat.from_rows(rows, field, cols=dim))


def right_adjoint(f: Mat, src: BilinearSpace, dst: BilinearSpace) -> Mat:
    """f* with (v, f*w)_src = (fv, w)_dst, computed as G_src⁻¹ fᵀ G_dst."""
    if f.shape != (dst.dim, src.dim):
        raise DimMismatch(f"Map of shape {f.shape} does not go from dim {src.dim} to dim {dst.dim}")
    if src.dim == 0 or dst.dim == 0:
        return Mat.zeros(src.dim, dst.dim, f.field)
    return src.gram_inverse @ f.T @ dst.gram


def adjoint(a: Mat, space: BilinearSpace) -> Mat:
    return right_adjoint(a, space, space)


def is_self_adjoint(a: Mat, space: BilinearSpace) -> bool:
    return adjoint(a, space) == a


def is_anti_self_adjoint(a: Mat, space: BilinearSpace) -> bool:
    return adjoint(a, space) == -a


@dataclass(frozen=True)
class SplitEndo:
    """Decomposition a = p_part + g_part into self-adjoint and anti-self-adjoint pieces."""
    p_part: Mat
    g_part: Mat


def split_endo(a: Mat, space: BilinearSpace) -> SplitEndo:
    if a.shape != (space.dim, space.dim):
        raise DimMismatch(f"Endomorphism {a.shape} does not act on dim {space.dim}")
    star = adjoint(a, space)
    half = a.field(Fraction(1, 2))
    return SplitEndo(p_part=(a + star).scale(half), g_part=(a - star).scale(half))


def _signed_symmetric_basis(dim: int, sign: int, field: Field) -> List[Mat]:
    """Basis of {S : Sᵀ = sign·S} in lexicographic (row, col) order."""
    basis = []
    for r in range(dim):
        for c in range(r, dim):
            if r == c:
                if sign > 0:
                    basis.append(Mat.unit(dim, dim, r, r, field))
                continue
            basis.append(Mat.unit(dim, dim, r, c, field) + Mat.unit(dim, dim, c, r, field).scale(sign))
    return basis


def self_adjoint_basis(space: BilinearSpace) -> List[Mat]:
    """Basis of p(V): B = G⁻¹S with Sᵀ = ε S, ε the symmetry sign of the Gram matrix."""
    if space.dim == 0:
        return []
    return [space.gram_inverse @ s for s in _signed_symmetric_basis(space.dim, space.sign, space.field)]


def lie_algebra_basis(space: BilinearSpace) -> List[Mat]:
    """Basis of g(V): B = G⁻¹S with Sᵀ = −ε S."""
    if space.dim == 0:
        return []
    return [space.gram_inverse @ s for s in _signed_symmetric_basis(space.dim, -space.sign, space.field)]


def trace_pairing_gram(basis: Sequence[Mat]) -> Mat:
    if not basis:
        return Mat.zeros(0, 0)
    field = basis[0].field
    return Mat.from_rows([[(a @ b).trace() for b in basis] for a in basis], field, cols=len(basis))


def in_group(g: Mat, space: BilinearSpace) -> bool:
    return g.shape == space.gram.shape and g.T @ space.gram @ g == space.gram


def require_in_group(g: Mat, space: Optional[BilinearSpace], dim: int):
    """Raise NotInGroup unless g is in G(V) (or GL when `space` is None)."""
    if g.shape != (dim, dim):
        raise NotInGroup(f"Group element has shape {g.shape}, expected {dim}x{dim}")
    if space is None:
        if rank(g) != dim:
            raise NotInGroup("Matrix is not invertible")
        return
    if not in_group(g, space):
        raise NotInGroup(f"Matrix does not preserve the {space.kind.value} form")


def cayley_transform(xi: Mat) -> Mat:
    """(I − ξ)⁻¹(I + ξ); lands in G(V) for ξ in g(V) whenever I − ξ is invertible."""
    ident = Mat.identity(xi.rows, xi.field)
    return inverse(ident - xi) @ (ident + xi)


def unipotent_exp(xi: Mat) -> Mat:
    """exp(ξ) for nilpotent ξ, as the finite exponential series."""
    n = xi.rows
    result = Mat.identity(n, xi.field)
    term = Mat.identity(n, xi.field)
    for t in range(1, n + 1):
        term = (term @ xi).scale(xi.field(Fraction(1, t)))
        if term.is_zero():
            return result
        result = result + term
    if not term.is_zero():
        raise InvariantViolation("unipotent_exp needs a nilpotent argument")
    return result


def orientation_reversing_element(space: BilinearSpace) -> Mat:
    """A reflection in O(V): det −1 and preserving the symmetric form."""
    if space.kind is not FormKind.ORTHOGONAL:
        raise InvariantViolation("Reflections exist only for orthogonal spaces")
    field, n = space.field, space.dim
    candidates = [Mat.unit(n, 1, t, 0, field) for t in range(n)]
    candidates += [Mat.unit(n, 1, s, 0, field) + Mat.unit(n, 1, t, 0, field)
                   for s in range(n) for t in range(s + 1, n)]
    for u in candidates:
        q = space.pair(u, u)
        if q:
            # s_u(x) = x − 2 (u, x)/(u, u) u
            return Mat.identity(n, field) - (u @ u.T @ space.gram).scale(field(2) / q)
    raise FieldError("No anisotropic vector found")


def residue_space(n: int, field: Field = QQ) -> BilinearSpace:
    """
    T ⊗ k[z]/(zⁿ) with the residue form, T the symplectic plane (e₁, e₂).

    Basis e_t ⊗ zᵃ sits at index 2a + t; (e₁zᵃ, e₂zᵇ) = 1 iff a + b = n − 1.
    """
    if n < 1:
        raise DimMismatch("Residue space needs n >= 1")
    dim = 2 * n
    rows = [[0] * dim for _ in range(dim)]
    for a in range(n):
        b = n - 1 - a
        rows[2 * a][2 * b + 1] = 1
        rows[2 * a + 1][2 * b] = -1
    return BilinearSpace(FormKind.SYMPLECTIC, Mat.from_rows(rows, field))


def z_multiplication(n: int, field: Field = QQ) -> Mat:
    """Multiplication by z on the residue space basis."""
    dim = 2 * n
    rows = [[0] * dim for _ in range(dim)]
    for a in range(n - 1):
        for t in range(2):
            rows[2 * (a + 1) + t][2 * a + t] = 1
    return Mat.from_rows(rows, field, cols=dim)


def isotropic(space: BilinearSpace, vectors: Mat) -> bool:
    """Whether the span of the columns is totally isotropic."""
    return (vectors.T @ space.gram @ vectors).is_zero()


def orthogonal_complement(space: BilinearSpace, vectors: Mat) -> Mat:
    """Columns spanning {v : (u, v) = 0 for all columns u}."""
    if vectors.cols == 0:
        return Mat.identity(space.dim, space.field)
    basis = nullspace(vectors.T @ space.gram)
    return Mat.hstack(basis) if basis else Mat.zeros(space.dim, 0, space.field)
