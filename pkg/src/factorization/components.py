import itertools
import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Optional

from src.adhm import AdhmDatum, Flavor
from src.adhm.sampling import usp1_block
from src.factorization.tensor import tensor_product, unit_datum
from src.forms import BilinearSpace, FormKind, orientation_reversing_element, right_adjoint, standard_space
from src.linalg import QQ, Field, Mat, column_space_basis, rank
from src.utils.errors import BadShape

logger = logging.getLogger('adhmlab.factorization')


def tensor_framing(field_: Field = QQ) -> BilinearSpace:
    """W = W1⊗W2 for two symplectic planes: the framing of the SO(4) data."""
    plane = standard_space(FormKind.SYMPLECTIC, 2, field_)
    return plane.tensor(plane)


def reference_plane(field_: Field = QQ) -> Mat:
    """Im(i*) for the image of the (1, 0) tensor map at i_1 = (1, 0); it labels component 0."""
    block = usp1_block(random.Random(0), 0, field_, b2_value=0, i=Mat.from_rows([[1, 0]], field_))
    return column_space_basis(tensor_product(block, unit_datum(field_)).j)


def component_index(d: AdhmDatum, reference: Optional[Mat] = None) -> int:
    """
    Which of the two components of {i : ii* = 0, rank i = 2} (k=2, N=4) holds d.

    Im(i*) is a totally isotropic plane of W; two such planes lie in the same
    family iff their intersection has even dimension.
    """
    if d.flavor is not Flavor.SO_DATA or d.k != 2 or d.n != 4:
        raise BadShape("Component labels are defined for SO data with k=2, N=4")
    if rank(d.i) != 2 or not (d.i @ d.j).is_zero():
        raise BadShape("Component labels need a surjective i with ii* = 0")
    if reference is None:
        if d.w_space != tensor_framing(d.field):
            raise BadShape("Pass a reference plane when W is not the tensor framing")
        reference = reference_plane(d.field)
    plane = column_space_basis(d.j)
    meet = 4 - rank(Mat.hstack([plane, reference]))
    return meet % 2


@dataclass
class ComponentCensus:
    p: int
    by_rank: Dict[int, int] = field(default_factory=dict)
    by_component: Dict[int, int] = field(default_factory=dict)
    swap_failures: int = 0

    @property
    def balanced(self) -> bool:
        return len(self.by_component) == 2 and len(set(self.by_component.values())) == 1


def component_census(p: int) -> ComponentCensus:
    """
    Enumerate ρ⁻¹(0) = {i ∈ L(W, V) : ii* = 0} for k=2, N=4 over F_p.

    Rank-2 points are labelled by component; composing with a reflection of W
    must swap the label.
    """
    f = Field.prime(p)
    v_space = standard_space(FormKind.SYMPLECTIC, 2, f)
    w_space = tensor_framing(f)
    reference = reference_plane(f)
    tau = orientation_reversing_element(w_space)
    ranks: Counter = Counter()
    components: Counter = Counter()
    failures = 0
    for values in itertools.product(range(p), repeat=8):
        i = Mat(2, 4, tuple(f(v) for v in values), f)
        j = right_adjoint(i, w_space, v_space)
        if not (i @ j).is_zero():
            continue
        r = rank(i)
        ranks[r] += 1
        if r != 2:
            continue
        d = AdhmDatum(Flavor.SO_DATA, Mat.zeros(2, 2, f), Mat.zeros(2, 2, f), i, j, v_space, w_space)
        label = component_index(d, reference)
        components[label] += 1
        twisted = d.replace(i=i @ tau, j=right_adjoint(i @ tau, w_space, v_space))
        if component_index(twisted, reference) == label:
            failures += 1
    census = ComponentCensus(p, dict(sorted(ranks.items())), dict(sorted(components.items())), failures)
    logger.info(f"Component census over F_{p}: ranks {census.by_rank}, components {census.by_component}")
    return census
