import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.adhm import eigenvalue_divisor, generalized_eigenspace
from src.forms import BilinearSpace, FormKind, in_group, is_self_adjoint
from src.linalg import QQ, ExactScalar, Field, Mat, express_in_basis, inverse, nullspace, rank
from src.nilpotent.partitions import Partition
from src.utils.errors import (FieldError, InvariantViolation, NotEvenType, NotInGroup, NotNilpotent,
                              NotSelfAdjoint, OutOfRange)

logger = logging.getLogger('adhmlab.nilpotent')


def associated_partitions(b: Mat) -> List[Tuple[ExactScalar, Partition]]:
    """Jordan type of b on each generalized eigenspace, eigenvalues in increasing order."""
    out = []
    for value, mult in eigenvalue_divisor(b).points:
        shifted = b - Mat.scalar(b.rows, value, b.field)
        dims, power = [0], Mat.identity(b.rows, b.field)
        while dims[-1] < mult:
            power = power @ shifted
            dims.append(b.rows - rank(power))
        out.append((value, Partition.from_kernel_growth(dims)))
    return out


@dataclass(frozen=True)
class Chain:
    """
    One Jordan chain of the normal form.

    The chain spans Bᵃ·generator for 0 <= a <= length. Symplectic chains come
    with a partner spanning Bᵃ·partner; orthogonal chains pair with themselves
    through `constant` = (generator, B^length generator).
    """
    generator: Mat
    length: int
    partner: Optional[Mat] = None
    constant: ExactScalar = 1

    @property
    def size(self) -> int:
        return (self.length + 1) * (2 if self.partner is not None else 1)


@dataclass(frozen=True)
class NormalFormBasis:
    chains: Tuple[Chain, ...]
    matrix: Mat
    space: BilinearSpace

    def expected_gram(self) -> Mat:
        """Pairing table of the chain basis: only (Bᵃx, Bᵇy) with a + b = length survives."""
        field = self.space.field
        n = self.matrix.cols
        rows = [[field.zero] * n for _ in range(n)]
        offset = 0
        for chain in self.chains:
            e = chain.length
            if chain.partner is None:
                for a in range(e + 1):
                    rows[offset + a][offset + e - a] = field(chain.constant)
            else:
                for a in range(e + 1):
                    rows[offset + a][offset + e + 1 + e - a] = field.one
                    rows[offset + e + 1 + e - a][offset + a] = -field.one
            offset += chain.size
        return Mat.from_rows(rows, field, cols=n)

    def pairing_table(self) -> Mat:
        return self.matrix.T @ self.space.gram @ self.matrix

    def verify(self):
        if rank(self.matrix) != self.space.dim:
            raise InvariantViolation("Normal form chains do not span V")
        if self.pairing_table() != self.expected_gram():
            raise InvariantViolation("Normal form pairing table is wrong")

    @property
    def lengths(self) -> List[int]:
        return [c.length for c in self.chains]


def _chain_columns(b: Mat, v: Mat, e: int) -> List[Mat]:
    out = [v]
    for _ in range(e):
        out.append(b @ out[-1])
    return out


def _top_exponent(b: Mat, span: Mat) -> int:
    e, image = 0, b @ span
    while not image.is_zero():
        e += 1
        image = b @ image
    return e


def _restricted_complement(space: BilinearSpace, span: Mat, chain: Mat) -> Mat:
    coords = nullspace(chain.T @ space.gram @ span)
    if not coords:
        return Mat.zeros(space.dim, 0, space.field)
    return span @ Mat.hstack(coords)


def _symplectic_chain(b: Mat, space: BilinearSpace, span: Mat, e: int) -> Chain:
    b_e = b.power(e)
    vectors = span.column_vectors()
    for v in vectors:
        for w in vectors:
            c = space.pair(v, b_e @ w)
            if c:
                partner = w.scale(b.field.one / c)
                for m in range(e - 1, -1, -1):
                    h = space.pair(v, b.power(m) @ partner)
                    if h:
                        partner = partner - (b.power(e - m) @ partner).scale(h)
                return Chain(v, e, partner, b.field.one)
    raise InvariantViolation("No pairing found on a nondegenerate invariant subspace")


def _orthogonal_chain(b: Mat, space: BilinearSpace, span: Mat, e: int) -> Chain:
    field = b.field
    if not field.is_rational and field.p == 2:
        raise FieldError("Orthogonal normal forms need odd characteristic")
    b_e = b.power(e)
    vectors = span.column_vectors()
    candidates = vectors + [x + y for s, x in enumerate(vectors) for y in vectors[s + 1:]]
    values = [(u, space.pair(u, b_e @ u)) for u in candidates]
    values = [(u, c) for u, c in values if c]
    if not values:
        raise InvariantViolation("No anisotropic vector found on a nondegenerate invariant subspace")
    # prefer square constants
    u, c = min(values, key=lambda uc: not field.is_square(uc[1]))
    rep = field.square_class(c)
    u = u.scale(field.sqrt(rep / c))
    half = field.one / (field(2) * rep)
    for m in range(e - 1, -1, -1):
        h = space.pair(u, b.power(m) @ u)
        if h:
            u = u - (b.power(e - m) @ u).scale(h * half)
    return Chain(u, e, None, rep)


def normal_form_basis(b: Mat, space: BilinearSpace) -> NormalFormBasis:
    """
    Chains adapted to a nilpotent self-adjoint b.

    The top nonvanishing power Bᵉ on the current invariant subspace picks a
    chain whose pairings are cleared below the top; the recursion continues on
    the orthogonal complement of that chain inside the subspace.
    """
    if b.shape != (space.dim, space.dim):
        raise InvariantViolation(f"Endomorphism {b.shape} does not act on dim {space.dim}")
    if not b.power(max(space.dim, 1)).is_zero():
        raise NotNilpotent("normal_form_basis needs a nilpotent endomorphism")
    if not is_self_adjoint(b, space):
        raise NotSelfAdjoint("normal_form_basis needs a self-adjoint endomorphism")
    chains: List[Chain] = []
    columns: List[Mat] = []
    span = Mat.identity(space.dim, space.field)
    while span.cols:
        e = _top_exponent(b, span)
        if space.kind is FormKind.SYMPLECTIC:
            chain = _symplectic_chain(b, space, span, e)
            block = _chain_columns(b, chain.generator, e) + _chain_columns(b, chain.partner, e)
        else:
            chain = _orthogonal_chain(b, space, span, e)
            block = _chain_columns(b, chain.generator, e)
        chains.append(chain)
        columns += block
        span = _restricted_complement(space, span, Mat.hstack(block))
        logger.debug(f"Normal form chain of length {e}, {span.cols} dimension(s) left")
    matrix = Mat.hstack(columns) if columns else Mat.zeros(space.dim, 0, space.field)
    basis = NormalFormBasis(tuple(chains), matrix, space)
    basis.verify()
    return basis


def _nilpotent_block(partition: Partition, kind: FormKind, field: Field) -> Tuple[Mat, Mat]:
    """Lower shift and Gram matrix on the normal-form basis of one partition."""
    shifts, grams = [], []
    if kind is FormKind.ORTHOGONAL:
        for d in partition.parts:
            shifts.append(Mat.from_rows([[1 if r == c + 1 else 0 for c in range(d)] for r in range(d)], field))
            grams.append(Mat.from_rows([[1 if r + c == d - 1 else 0 for c in range(d)] for r in range(d)], field))
        return Mat.block_diag(shifts, field), Mat.block_diag(grams, field)
    for d, mult in partition.multiplicities():
        for _ in range(mult // 2):
            size = 2 * d
            shift = [[0] * size for _ in range(size)]
            gram = [[0] * size for _ in range(size)]
            for a in range(d - 1):
                shift[a + 1][a] = 1
                shift[d + a + 1][d + a] = 1
            for a in range(d):
                gram[a][d + d - 1 - a] = 1
                gram[d + d - 1 - a][a] = -1
            shifts.append(Mat.from_rows(shift, field))
            grams.append(Mat.from_rows(gram, field))
    return Mat.block_diag(shifts, field), Mat.block_diag(grams, field)


def build_nilpotent(parts: Sequence[Partition], kind, field: Field = None) -> Tuple[Mat, BilinearSpace]:
    """
    A self-adjoint B with the given associated partitions.

    Partition number t sits at eigenvalue t, in a space whose Gram matrix is
    the block sum of the normal-form pairing tables.
    """
    field = field or QQ
    kind = FormKind(kind)
    if not parts:
        raise OutOfRange("build_nilpotent needs at least one partition")
    blocks, grams = [], []
    for value, partition in enumerate(parts):
        if partition.size == 0:
            raise OutOfRange("Partitions must be nonempty")
        if kind is FormKind.SYMPLECTIC and not partition.is_even_type:
            raise NotEvenType(f"Partition {partition} is not of even type")
        shift, gram = _nilpotent_block(partition, kind, field)
        blocks.append(shift + Mat.scalar(shift.rows, value, field))
        grams.append(gram)
    b = Mat.block_diag(blocks, field)
    space = BilinearSpace(kind, Mat.block_diag(grams, field))
    if not is_self_adjoint(b, space):
        raise InvariantViolation("Constructed endomorphism is not self-adjoint")
    logger.debug(f"Built {kind.value} endomorphism of dim {b.rows} from {[str(p) for p in parts]}")
    return b, space


def conjugacy_test(a: Mat, b: Mat, space: BilinearSpace) -> bool:
    """G(V)-conjugacy inside p(V): same eigenvalues with the same associated partitions."""
    for m, name in ((a, 'a'), (b, 'b')):
        if not is_self_adjoint(m, space):
            raise NotSelfAdjoint(f"{name} is not self-adjoint")
    return associated_partitions(a) == associated_partitions(b)


def _restricted(b: Mat, space: BilinearSpace, basis: Mat, value) -> Tuple[Mat, BilinearSpace]:
    """Nilpotent part of b on a generalized eigenspace, in the coordinates of `basis`."""
    shifted = b - Mat.scalar(b.rows, value, b.field)
    images = [express_in_basis(basis, shifted @ col) for col in basis.column_vectors()]
    return Mat.hstack(images), BilinearSpace(space.kind, basis.T @ space.gram @ basis)


@dataclass(frozen=True)
class EigenspaceNormalForm:
    value: ExactScalar
    eigenspace: Mat
    nilpotent: Mat
    basis: NormalFormBasis


def eigenspace_normal_forms(b: Mat, space: BilinearSpace) -> List[EigenspaceNormalForm]:
    """Normal form of the nilpotent part of b on each generalized eigenspace, in eigenspace coordinates."""
    out = []
    for value, mult in eigenvalue_divisor(b).points:
        eigen = generalized_eigenspace(b, value, mult)
        nil, sub = _restricted(b, space, eigen, value)
        out.append(EigenspaceNormalForm(value, eigen, nil, normal_form_basis(nil, sub)))
    return out


def _chain_key(chain: Chain):
    return -chain.length, str(chain.constant)


def _adapted_basis(b: Mat, space: BilinearSpace) -> Tuple[Mat, Mat]:
    """Chain basis of b across all generalized eigenspaces, chains sorted; returns (basis, gram)."""
    columns, grams = [], []
    for form in eigenspace_normal_forms(b, space):
        nf, nil = form.basis, form.nilpotent
        ordered = NormalFormBasis(tuple(sorted(nf.chains, key=_chain_key)), nf.matrix, nf.space)
        for chain in ordered.chains:
            vectors = _chain_columns(nil, chain.generator, chain.length)
            if chain.partner is not None:
                vectors += _chain_columns(nil, chain.partner, chain.length)
            columns += [form.eigenspace @ v for v in vectors]
        grams.append(ordered.expected_gram())
    return Mat.hstack(columns), Mat.block_diag(grams, b.field)


def conjugator(a: Mat, b: Mat, space: BilinearSpace) -> Mat:
    """g in G(V) with g a g⁻¹ = b, assembled from matching normal-form chains."""
    if not conjugacy_test(a, b, space):
        raise NotInGroup("Endomorphisms have different eigenvalue or partition data")
    p_a, gram_a = _adapted_basis(a, space)
    p_b, gram_b = _adapted_basis(b, space)
    if gram_a != gram_b:
        raise NotInGroup("Chain pairing constants differ in square class over this field")
    g = p_b @ inverse(p_a)
    if not in_group(g, space) or g @ a != b @ g:
        raise InvariantViolation("Assembled conjugator failed its checks")
    return g
