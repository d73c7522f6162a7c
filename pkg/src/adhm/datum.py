import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional

from src.forms import BilinearSpace, FormKind, is_self_adjoint, lie_algebra_basis, right_adjoint, standard_space
from src.forms.bilinear import require_in_group
from src.linalg import QQ, Field, Mat
from src.utils.errors import DimMismatch, FlavorMismatch, InvariantViolation

logger = logging.getLogger('adhmlab.adhm')


class Flavor(str, Enum):
    ORDINARY = 'ordinary'
    SO_DATA = 'so_data'
    SP_DATA = 'sp_data'

    @classmethod
    def parse(cls, text: str) -> 'Flavor':
        aliases = {'so': cls.SO_DATA, 'sp': cls.SP_DATA, 'gl': cls.ORDINARY, 'sl': cls.ORDINARY}
        text = text.strip().lower()
        return aliases.get(text) or cls(text)

    @property
    def v_kind(self) -> Optional[FormKind]:
        return {Flavor.SO_DATA: FormKind.SYMPLECTIC, Flavor.SP_DATA: FormKind.ORTHOGONAL}.get(self)

    @property
    def w_kind(self) -> Optional[FormKind]:
        return {Flavor.SO_DATA: FormKind.ORTHOGONAL, Flavor.SP_DATA: FormKind.SYMPLECTIC}.get(self)

    @property
    def has_forms(self) -> bool:
        return self is not Flavor.ORDINARY


@dataclass(frozen=True)
class AdhmDatum:
    """Quiver data (B1, B2, i, j) with i: W → V and j: V → W."""
    flavor: Flavor
    b1: Mat
    b2: Mat
    i: Mat
    j: Mat
    v_space: Optional[BilinearSpace] = None
    w_space: Optional[BilinearSpace] = None

    def __post_init__(self):
        object.__setattr__(self, 'flavor', Flavor(self.flavor))
        k, n = self.i.shape
        for name, m, shape in (('B1', self.b1, (k, k)), ('B2', self.b2, (k, k)), ('j', self.j, (n, k))):
            if m.shape != shape:
                raise DimMismatch(f"{name} has shape {m.shape}, expected {shape}")
        fields = {m.field for m in (self.b1, self.b2, self.i, self.j)}
        if len(fields) != 1:
            raise DimMismatch("Datum components live over different fields")
        if self.flavor.has_forms:
            if self.v_space is None or self.w_space is None:
                raise FlavorMismatch(f"{self.flavor.value} data need forms on V and W")
            if self.v_space.dim != k or self.w_space.dim != n:
                raise DimMismatch(f"Spaces of dims ({self.v_space.dim}, {self.w_space.dim}) for k={k}, N={n}")
            if self.v_space.kind is not self.flavor.v_kind or self.w_space.kind is not self.flavor.w_kind:
                raise FlavorMismatch(
                    f"{self.flavor.value} needs V {self.flavor.v_kind.value} and W {self.flavor.w_kind.value}"
                )

    @classmethod
    def with_adjoint(cls, flavor, b1: Mat, b2: Mat, i: Mat,
                     v_space: BilinearSpace, w_space: BilinearSpace) -> 'AdhmDatum':
        """so/sp datum with j = i* filled in."""
        return cls(Flavor(flavor), b1, b2, i, right_adjoint(i, w_space, v_space), v_space, w_space)

    @classmethod
    def zero(cls, flavor, k: int, n: int, field: Field = QQ) -> 'AdhmDatum':
        flavor = Flavor(flavor)
        v_space = w_space = None
        if flavor.has_forms:
            v_space = standard_space(flavor.v_kind, k, field)
            w_space = standard_space(flavor.w_kind, n, field)
        z = Mat.zeros(k, k, field)
        return cls(flavor, z, z, Mat.zeros(k, n, field), Mat.zeros(n, k, field), v_space, w_space)

    @property
    def k(self) -> int:
        return self.i.rows

    @property
    def n(self) -> int:
        """Framing dimension N = dim W."""
        return self.i.cols

    @property
    def field(self) -> Field:
        return self.i.field

    def constraint_violations(self) -> List[str]:
        if not self.flavor.has_forms:
            return []
        problems = []
        if not is_self_adjoint(self.b1, self.v_space):
            problems.append('B1 is not self-adjoint')
        if not is_self_adjoint(self.b2, self.v_space):
            problems.append('B2 is not self-adjoint')
        if right_adjoint(self.i, self.w_space, self.v_space) != self.j:
            problems.append('j differs from i*')
        return problems

    def check_invariants(self):
        problems = self.constraint_violations()
        if problems:
            raise InvariantViolation(f"{self.flavor.value} datum: {', '.join(problems)}")

    def replace(self, **changes) -> 'AdhmDatum':
        return replace(self, **changes)

    def to_field(self, field: Field) -> 'AdhmDatum':
        return AdhmDatum(self.flavor, self.b1.to_field(field), self.b2.to_field(field), self.i.to_field(field),
                         self.j.to_field(field),
                         self.v_space.to_field(field) if self.v_space else None,
                         self.w_space.to_field(field) if self.w_space else None)


class GroupKind(str, Enum):
    GL = 'GL'
    SP = 'Sp'
    O = 'O'


@dataclass(frozen=True)
class GroupSpec:
    """The gauge group acting on V: GL(V), Sp(V) or O(V)."""
    kind: GroupKind
    dim: int
    space: Optional[BilinearSpace] = None

    def __post_init__(self):
        object.__setattr__(self, 'kind', GroupKind(self.kind))
        if self.kind is not GroupKind.GL:
            expected = FormKind.SYMPLECTIC if self.kind is GroupKind.SP else FormKind.ORTHOGONAL
            if self.space is None or self.space.kind is not expected or self.space.dim != self.dim:
                raise FlavorMismatch(f"{self.kind.value}({self.dim}) needs a {expected.value} space of that dim")

    @classmethod
    def for_datum(cls, d: AdhmDatum) -> 'GroupSpec':
        if d.flavor is Flavor.ORDINARY:
            return cls(GroupKind.GL, d.k)
        kind = GroupKind.SP if d.flavor is Flavor.SO_DATA else GroupKind.O
        return cls(kind, d.k, d.v_space)

    @property
    def lie_dim(self) -> int:
        return lie_dim(self.kind, self.dim)

    def lie_algebra_basis(self, field: Field = QQ) -> List[Mat]:
        if self.kind is GroupKind.GL:
            return [Mat.unit(self.dim, self.dim, r, c, field) for r in range(self.dim) for c in range(self.dim)]
        return lie_algebra_basis(self.space)

    def require(self, g: Mat):
        require_in_group(g, self.space if self.kind is not GroupKind.GL else None, self.dim)


def lie_dim(kind, k: int) -> int:
    kind = GroupKind(kind)
    if kind is GroupKind.GL:
        return k * k
    if kind is GroupKind.SP:
        return k * (k + 1) // 2
    return k * (k - 1) // 2
