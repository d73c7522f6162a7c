import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from src.adhm import AdhmDatum, Divisor, Flavor, eigenvalue_divisor, is_costable, moment_map
from src.forms import BilinearSpace, is_self_adjoint, right_adjoint
from src.linalg import Mat, solve_sylvester
from src.linalg.matrix import commutator
from src.utils.errors import FlavorMismatch, InvariantViolation, SpectraOverlap

logger = logging.getLogger('adhmlab.factorization')


@dataclass(frozen=True)
class BlockList:
    """Low-charge blocks with pairwise disjoint B1-spectra, glued in list order."""
    blocks: Tuple[AdhmDatum, ...]
    spectra: Tuple[Divisor, ...]

    def __post_init__(self):
        if not self.blocks:
            raise FlavorMismatch("A block list needs at least one block")
        if len(self.spectra) != len(self.blocks):
            raise InvariantViolation("One spectrum per block is required")
        first = self.blocks[0]
        for b in self.blocks[1:]:
            if b.flavor is not first.flavor:
                raise FlavorMismatch(f"Blocks mix {first.flavor.value} and {b.flavor.value}")
            if b.n != first.n or b.w_space != first.w_space or b.field != first.field:
                raise FlavorMismatch("Blocks must share the framing space W")
        for a, sa in enumerate(self.spectra):
            for sb in self.spectra[a + 1:]:
                if not sa.disjoint(sb):
                    raise SpectraOverlap(f"Block spectra {sa.support} and {sb.support} meet")

    @classmethod
    def from_blocks(cls, blocks: Sequence[AdhmDatum]) -> 'BlockList':
        blocks = tuple(blocks)
        return cls(blocks, tuple(eigenvalue_divisor(b.b1) for b in blocks))

    @property
    def sizes(self) -> List[int]:
        return [b.k for b in self.blocks]

    @property
    def flavor(self) -> Flavor:
        return self.blocks[0].flavor

    def offsets(self) -> List[int]:
        out, acc = [], 0
        for size in self.sizes:
            out.append(acc)
            acc += size
        return out


def canonical_order(bl: BlockList) -> BlockList:
    """Blocks sorted by their spectra; factorizations of reorderings agree up to this permutation."""
    order = sorted(range(len(bl.blocks)), key=lambda t: tuple(bl.spectra[t].support))
    return BlockList(tuple(bl.blocks[t] for t in order), tuple(bl.spectra[t] for t in order))


def block_of(m: Mat, row_sizes: Sequence[int], col_sizes: Sequence[int], r: int, c: int) -> Mat:
    r0, c0 = sum(row_sizes[:r]), sum(col_sizes[:c])
    return m.submatrix(r0, r0 + row_sizes[r], c0, c0 + col_sizes[c])


def factorize(bl: BlockList) -> AdhmDatum:
    """
    Glue blocks into one datum on V = ⊕ V_l.

    B1 and the diagonal of B2 are copied block by block; the off-diagonal B2
    block (m, l) is the unique solution of
    B_{m,1} X − X B_{l,1} + i_m j_l = 0.
    """
    blocks = bl.blocks
    if len(blocks) == 1:
        return blocks[0]
    flavor, field = bl.flavor, blocks[0].field
    i = Mat.vstack([b.i for b in blocks])
    b1 = Mat.block_diag([b.b1 for b in blocks])
    v_space = w_space = None
    if flavor.has_forms:
        v_space = BilinearSpace(flavor.v_kind, Mat.block_diag([b.v_space.gram for b in blocks]))
        w_space = blocks[0].w_space
        j = right_adjoint(i, w_space, v_space)
    else:
        j = Mat.hstack([b.j for b in blocks])
    grid = []
    for m, bm in enumerate(blocks):
        row = []
        for l, bk in enumerate(blocks):
            if m == l:
                row.append(bm.b2)
            else:
                row.append(solve_sylvester(bm.b1, bk.b1, -(bm.i @ bk.j)))
        grid.append(row)
    b2 = Mat.block(grid)
    glued = AdhmDatum(flavor, b1, b2, i, j, v_space, w_space)
    _verify_glued(bl, glued)
    logger.info(f"Factorized {len(blocks)} blocks of sizes {bl.sizes} into k={glued.k}")
    return glued


def _verify_glued(bl: BlockList, glued: AdhmDatum):
    if glued.flavor.has_forms and not is_self_adjoint(glued.b2, glued.v_space):
        raise InvariantViolation("Glued B2 is not self-adjoint")
    raw = commutator(glued.b1, glued.b2) + glued.i @ glued.j
    sizes = bl.sizes
    for m in range(len(sizes)):
        for l in range(len(sizes)):
            if m != l and not block_of(raw, sizes, sizes, m, l).is_zero():
                raise InvariantViolation(f"Moment map block ({m}, {l}) does not vanish")
    if all(moment_map(b).is_zero() for b in bl.blocks) and not moment_map(glued).is_zero():
        raise InvariantViolation("Blocks lie in the zero fibre but the glued datum does not")


def gluing_residuals(bl: BlockList, glued: AdhmDatum) -> Dict[str, Mat]:
    """
    The generating relations of the gluing: B2^(l,l) − B_{l,2} and the
    Sylvester expressions B_{m,1}X − XB_{l,1} + i_m j_l; all vanish on factorize's output.
    """
    sizes = bl.sizes
    residuals = {}
    for m, bm in enumerate(bl.blocks):
        for l, bk in enumerate(bl.blocks):
            x = block_of(glued.b2, sizes, sizes, m, l)
            if m == l:
                residuals[f"diag({l})"] = x - bm.b2
            else:
                residuals[f"sylvester({m},{l})"] = bm.b1 @ x - x @ bk.b1 + bm.i @ bk.j
            if m != l:
                residuals[f"b1({m},{l})"] = block_of(glued.b1, sizes, sizes, m, l)
    return residuals


def factorize_preserves_costability(bl: BlockList) -> bool:
    return is_costable(factorize(bl))


def blockwise_element(elements: Sequence[Mat]) -> Mat:
    """h = (h_1, ..., h_e) as a block-diagonal element of G(V)."""
    return Mat.block_diag(list(elements))
