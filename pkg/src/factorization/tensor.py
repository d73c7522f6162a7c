import logging
from typing import List, Sequence

from src.adhm import AdhmDatum, Flavor, moment_map
from src.factorization.gluing import BlockList, factorize
from src.forms import is_self_adjoint, right_adjoint
from src.linalg import QQ, Field, Mat, inverse, solve_sylvester
from src.utils.errors import BadShape, InvariantViolation

logger = logging.getLogger('adhmlab.factorization')


def unit_datum(field: Field = QQ) -> AdhmDatum:
    """The charge-zero USp(1) datum (V = 0, W the symplectic plane)."""
    return AdhmDatum.zero(Flavor.SP_DATA, 0, 2, field)


def _require_usp1(d: AdhmDatum, side: str):
    if d.flavor is not Flavor.SP_DATA or d.n != 2:
        raise BadShape(f"{side} factor must be Sp data framed by the symplectic plane")


def tensor_product(d1: AdhmDatum, d2: AdhmDatum) -> AdhmDatum:
    """
    SO(4) datum on V = V1⊗W2 ⊕ W1⊗V2, W = W1⊗W2, from two USp(1) data.

    B1 = B_{1,1}⊗Id ⊕ Id⊗B_{2,1}, the diagonal of B2 likewise, and
    i = (i_1⊗Id ; Id⊗i_2). The off-diagonal B2 blocks solve Sylvester
    equations against the two diagonal B1 blocks.
    """
    _require_usp1(d1, 'Left')
    _require_usp1(d2, 'Right')
    field = d1.field
    w1, w2 = d1.w_space, d2.w_space
    ident = Mat.identity(2, field)
    v_first = d1.v_space.tensor(w2)
    v_second = w1.tensor(d2.v_space)
    v_space = v_first.direct_sum(v_second)
    w_space = w1.tensor(w2)
    a, dd = d1.b1.kron(ident), ident.kron(d2.b1)
    i_first, i_second = d1.i.kron(ident), ident.kron(d2.i)
    j_first = right_adjoint(i_first, w_space, v_first)
    j_second = right_adjoint(i_second, w_space, v_second)
    x = solve_sylvester(a, dd, -(i_first @ j_second))
    y = solve_sylvester(dd, a, -(i_second @ j_first))
    b1 = Mat.block_diag([a, dd], field)
    b2 = Mat.block([[d1.b2.kron(ident), x], [y, ident.kron(d2.b2)]])
    i = Mat.vstack([i_first, i_second])
    out = AdhmDatum(Flavor.SO_DATA, b1, b2, i, right_adjoint(i, w_space, v_space), v_space, w_space)
    if not is_self_adjoint(out.b2, v_space):
        raise InvariantViolation("Off-diagonal B2 blocks are not adjoint to each other")
    out.check_invariants()
    if moment_map(d1).is_zero() and moment_map(d2).is_zero() and not moment_map(out).is_zero():
        raise InvariantViolation("Tensor product left the zero fibre")
    logger.debug(f"Tensor product of charges ({d1.k}, {d2.k}) -> k={out.k}")
    return out


def tensor_block_permutation(left_sizes: Sequence[int], right_sizes: Sequence[int]) -> List[int]:
    """
    Position in T(factorize(L), factorize(R)) of each basis vector of
    factorize([T(l, 0) ...] + [T(0, r) ...]).

    V1⊗W2 is already ordered block by block; W1⊗V2 is indexed w·n2 + m and
    has to be regrouped by the blocks of V2.
    """
    n1, n2 = sum(left_sizes), sum(right_sizes)
    sigma = list(range(2 * n1))
    offset = 0
    for size in right_sizes:
        for w in range(2):
            for m in range(size):
                sigma.append(2 * n1 + w * n2 + offset + m)
        offset += size
    return sigma


def tensor_commutes_with_factorization(left_blocks: Sequence[AdhmDatum],
                                       right_blocks: Sequence[AdhmDatum]) -> bool:
    """Tensor of glued data equals the gluing of blockwise tensors, up to the basis regrouping."""
    field = left_blocks[0].field if left_blocks else right_blocks[0].field
    unit = unit_datum(field)
    lhs = tensor_product(factorize(BlockList.from_blocks(left_blocks)) if left_blocks else unit,
                         factorize(BlockList.from_blocks(right_blocks)) if right_blocks else unit)
    pieces = [tensor_product(b, unit) for b in left_blocks] + [tensor_product(unit, b) for b in right_blocks]
    rhs = factorize(BlockList.from_blocks(pieces))
    p = Mat.permutation(tensor_block_permutation([b.k for b in left_blocks], [b.k for b in right_blocks]), field)
    p_inv = inverse(p)
    return (p_inv @ lhs.b1 @ p == rhs.b1 and p_inv @ lhs.b2 @ p == rhs.b2
            and p_inv @ lhs.i == rhs.i and lhs.j @ p == rhs.j
            and p.T @ lhs.v_space.gram @ p == rhs.v_space.gram and lhs.w_space == rhs.w_space)
