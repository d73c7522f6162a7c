import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.forms import lie_algebra_basis, residue_space, z_multiplication
from src.linalg import QQ, Field, Mat, nullspace, rank, rref
from src.linalg.matrix import commutator
from src.utils.errors import DimMismatch, InvariantViolation, WrongStratum

logger = logging.getLogger('adhmlab.current')


def sl2_basis(field: Field = QQ) -> List[Mat]:
    """H, X, Y."""
    return [Mat.from_rows([[1, 0], [0, -1]], field),
            Mat.from_rows([[0, 1], [0, 0]], field),
            Mat.from_rows([[0, 0], [1, 0]], field)]


@dataclass(frozen=True)
class CurrentElement:
    """ξ = Σ ξ_m z^m in sl2[z]/(z^n)."""
    n: int
    coeffs: Tuple[Mat, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.n:
            raise DimMismatch(f"Need {self.n} coefficients, got {len(self.coeffs)}")
        for m, c in enumerate(self.coeffs):
            if c.shape != (2, 2):
                raise DimMismatch(f"Coefficient {m} has shape {c.shape}")
            if c.trace():
                raise InvariantViolation(f"Coefficient of z^{m} is not traceless")

    @property
    def field(self) -> Field:
        return self.coeffs[0].field

    @classmethod
    def from_vector(cls, n: int, values: Sequence, field: Field = QQ) -> 'CurrentElement':
        """Coordinates (a, b, c) per degree for a·H + b·X + c·Y."""
        h, x, y = sl2_basis(field)
        coeffs = tuple(h.scale(values[3 * m]) + x.scale(values[3 * m + 1]) + y.scale(values[3 * m + 2])
                       for m in range(n))
        return cls(n, coeffs)

    def to_vector(self) -> list:
        return [x for c in self.coeffs for x in (c[0, 0], c[0, 1], c[1, 0])]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def min_degree(self) -> Optional[int]:
        return next((m for m, c in enumerate(self.coeffs) if not c.is_zero()), None)

    def times_z(self, power: int = 1) -> 'CurrentElement':
        zero = Mat.zeros(2, 2, self.field)
        coeffs = (zero,) * min(power, self.n) + self.coeffs[:max(self.n - power, 0)]
        return CurrentElement(self.n, coeffs)

    def lifted(self, n: int) -> 'CurrentElement':
        """The same polynomial read in sl2[z]/(z^n), n ≥ self.n."""
        if n < self.n:
            raise DimMismatch(f"Cannot lift from order {self.n} to {n}")
        return CurrentElement(n, self.coeffs + (Mat.zeros(2, 2, self.field),) * (n - self.n))

    def act(self, x: 'CurrentVector') -> 'CurrentVector':
        if x.n != self.n:
            raise DimMismatch(f"Truncation orders {self.n} and {x.n} differ")
        out = []
        for d in range(self.n):
            acc = Mat.zeros(2, x.r, x.field)
            for a in range(d + 1):
                acc = acc + self.coeffs[a] @ x.coeffs[d - a]
            out.append(acc)
        return CurrentVector(self.n, x.r, tuple(out))

    def on_residue_space(self) -> Mat:
        """Matrix of ξ acting on T ⊗ k[z]/(z^n), basis index 2a + t."""
        dim = 2 * self.n
        rows = [[0] * dim for _ in range(dim)]
        for m, c in enumerate(self.coeffs):
            for a in range(self.n - m):
                for s in range(2):
                    for t in range(2):
                        rows[2 * (a + m) + s][2 * a + t] += c[s, t]
        return Mat.from_rows(rows, self.field, cols=dim)


@dataclass(frozen=True)
class CurrentVector:
    """x = Σ x_m z^m in L(k^r, T ⊗ k[z]/(z^n)); each x_m is 2×r."""
    n: int
    r: int
    coeffs: Tuple[Mat, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.n:
            raise DimMismatch(f"Need {self.n} coefficients, got {len(self.coeffs)}")
        if any(c.shape != (2, self.r) for c in self.coeffs):
            raise DimMismatch(f"Coefficients must be 2x{self.r}")

    @property
    def field(self) -> Field:
        return self.coeffs[0].field

    @classmethod
    def from_vector(cls, n: int, r: int, values: Sequence, field: Field = QQ) -> 'CurrentVector':
        size = 2 * r
        return cls(n, r, tuple(Mat(2, r, tuple(field(v) for v in values[m * size:(m + 1) * size]), field)
                               for m in range(n)))

    @classmethod
    def zero(cls, n: int, r: int, field: Field = QQ) -> 'CurrentVector':
        return cls(n, r, tuple(Mat.zeros(2, r, field) for _ in range(n)))

    def to_vector(self) -> list:
        return [x for c in self.coeffs for x in c.entries]

    @property
    def x0(self) -> Mat:
        return self.coeffs[0]

    @property
    def rank0(self) -> int:
        """Rank class l of x: the rank of the constant coefficient."""
        return rank(self.x0)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def shifted(self) -> 'CurrentVector':
        """z·x viewed at truncation order n + 1."""
        return CurrentVector(self.n + 1, self.r, (Mat.zeros(2, self.r, self.field),) + self.coeffs)

    def truncated(self) -> 'CurrentVector':
        """x modulo z^(n−1)."""
        if self.n <= 1:
            raise DimMismatch("Cannot truncate below order 1")
        return CurrentVector(self.n - 1, self.r, self.coeffs[:-1])


def action_matrix(x: CurrentVector) -> Mat:
    """(2rn)×(3n) matrix of ξ ↦ ξ·x; column 3m + g is (g z^m)·x for g in (H, X, Y)."""
    basis = sl2_basis(x.field)
    columns = []
    for m in range(x.n):
        for g in basis:
            image = [Mat.zeros(2, x.r, x.field)] * m + [g @ x.coeffs[d - m] for d in range(m, x.n)]
            columns.append([v for c in image for v in c.entries])
    return Mat.from_rows(columns, x.field).T


def stabilizer_basis(x: CurrentVector) -> List[CurrentElement]:
    return [CurrentElement.from_vector(x.n, v.flatten(), x.field) for v in nullspace(action_matrix(x))]


def stabilizer_dim(x: CurrentVector) -> int:
    a = action_matrix(x)
    return a.cols - rank(a)


def cyclic_generator(x: CurrentVector) -> Tuple[int, CurrentElement]:
    """
    Generator ξ of the stabilizer as a k[z]-module, for x with rank(x0) = 1.

    The stabilizer basis is put in echelon form along the degree-major
    coordinates; the first echelon row has the least minimal degree m_x and
    its z-multiples span the whole stabilizer.
    """
    if x.rank0 != 1:
        raise WrongStratum(f"Cyclic generators need rank(x0) = 1, got {x.rank0}")
    basis = stabilizer_basis(x)
    if not basis:
        raise InvariantViolation("Rank-1 vector with trivial stabilizer")
    echelon, pivots = rref(Mat.from_rows([b.to_vector() for b in basis], x.field))
    m_x = pivots[0] // 3
    xi = CurrentElement.from_vector(x.n, echelon.row(0), x.field)
    powers = [xi.times_z(a) for a in range(x.n - m_x)]
    span = rank(Mat.from_rows([p.to_vector() for p in powers], x.field))
    if span != x.n - m_x or len(basis) != x.n - m_x:
        raise InvariantViolation(
            f"Stabilizer of dim {len(basis)} is not cyclic of rank {x.n - m_x} (z-span {span})"
        )
    if not all(p.act(x).is_zero() for p in powers):
        raise InvariantViolation("z-multiples of the generator leave the stabilizer")
    return m_x, xi


def zero_rank_lift(x: CurrentVector) -> int:
    """
    Expected stabilizer dimension of x = z·y, checked against the stabilizer of y.

    Every η in the stabilizer of y in g_(n−1), read at order n, annihilates
    x together with z·η and the free top coefficients; the count is
    dim stab(y) + 3.
    """
    if x.rank0 != 0:
        raise WrongStratum(f"Lifts need rank(x0) = 0, got {x.rank0}")
    if x.n == 1:
        return 3
    y = CurrentVector(x.n - 1, x.r, x.coeffs[1:])
    basis = stabilizer_basis(y)
    top = [CurrentElement.from_vector(x.n, [0] * (3 * x.n - 3) + unit, x.field)
           for unit in ([1, 0, 0], [0, 1, 0], [0, 0, 1])]
    for eta in basis:
        lift = eta.lifted(x.n)
        if not (lift.act(x).is_zero() and lift.times_z().act(x).is_zero()):
            raise InvariantViolation(f"Lifted stabilizer element of z^-1·x does not annihilate x at order {x.n}")
    if not all(t.act(x).is_zero() for t in top):
        raise InvariantViolation("Top coefficients act nontrivially on a vector with x0 = 0")
    return len(basis) + 3


@dataclass(frozen=True)
class ResidueCheck:
    """Comparison of g_n acting on the residue space with the commutant of z in sp."""
    n: int
    image_dim: int
    commutant_dim: int
    joint_dim: int

    @property
    def passed(self) -> bool:
        return self.image_dim == self.commutant_dim == self.joint_dim == 3 * self.n


def residue_commutant_check(n: int, field: Field = QQ) -> ResidueCheck:
    space = residue_space(n, field)
    z = z_multiplication(n, field)
    image = [CurrentElement.from_vector(n, [1 if t == s else 0 for t in range(3 * n)], field).on_residue_space()
             for s in range(3 * n)]
    sp_basis = lie_algebra_basis(space)
    brackets = Mat.from_rows([commutator(b, z).flatten() for b in sp_basis], field).T
    commutant = []
    for v in nullspace(brackets):
        acc = Mat.zeros(2 * n, 2 * n, field)
        for coeff, b in zip(v.flatten(), sp_basis):
            acc = acc + b.scale(coeff)
        commutant.append(acc)
    as_rows = lambda mats: Mat.from_rows([m.flatten() for m in mats], field, cols=4 * n * n)
    check = ResidueCheck(n, rank(as_rows(image)), rank(as_rows(commutant)), rank(as_rows(image + commutant)))
    logger.debug(f"Residue commutant check n={n}: {check}")
    return check
