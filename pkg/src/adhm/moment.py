import logging
from typing import List, Optional, Tuple

from src.adhm.datum import AdhmDatum, Flavor, GroupSpec
from src.forms import right_adjoint, self_adjoint_basis, split_endo
from src.linalg import Mat, column_space_basis, inverse, nullspace, rank, row_space_basis
from src.linalg.matrix import commutator
from src.utils.errors import DimMismatch

logger = logging.getLogger('adhmlab.adhm')

Tangent = Tuple[Mat, Mat, Mat, Mat]


def moment_map(d: AdhmDatum) -> Mat:
    """[B1, B2] + ij, projected to g(V) for so/sp data."""
    d.check_invariants()
    mu = commutator(d.b1, d.b2) + d.i @ d.j
    if d.flavor is Flavor.ORDINARY:
        return mu
    return split_endo(mu, d.v_space).g_part


def is_stable(d: AdhmDatum) -> bool:
    """No proper B1, B2-invariant subspace contains Im(i)."""
    if d.k == 0:
        return True
    span = column_space_basis(d.i)
    while True:
        grown = column_space_basis(Mat.hstack([span, d.b1 @ span, d.b2 @ span]))
        logger.debug(f"Stability closure: dim {span.cols} -> {grown.cols}")
        if grown.cols == span.cols:
            return span.cols == d.k
        span = grown


def is_costable(d: AdhmDatum) -> bool:
    """
    No nonzero B1, B2-invariant subspace lies in Ker(j).

    The largest invariant subspace of Ker(j) is the common kernel of the row
    space closure of j under right multiplication by B1 and B2.
    """
    if d.k == 0:
        return True
    rows = row_space_basis(d.j)
    while True:
        grown = row_space_basis(Mat.vstack([rows, rows @ d.b1, rows @ d.b2]))
        logger.debug(f"Costability closure: codim {rows.rows} -> {grown.rows}")
        if grown.rows == rows.rows:
            return rows.rows == d.k
        rows = grown


def is_regular(d: AdhmDatum) -> bool:
    return is_stable(d) and is_costable(d)


def act(d: AdhmDatum, g: Mat) -> AdhmDatum:
    """g·(B1, B2, i, j) = (gB1g⁻¹, gB2g⁻¹, gi, jg⁻¹)."""
    if g.shape != (d.k, d.k):
        raise DimMismatch(f"Group element {g.shape} does not act on V of dim {d.k}")
    g_inv = inverse(g)
    return d.replace(b1=g @ d.b1 @ g_inv, b2=g @ d.b2 @ g_inv, i=g @ d.i, j=d.j @ g_inv)


def flatten_tangent(t: Tangent) -> List:
    return [x for m in t for x in m.entries]


def tangent_basis(d: AdhmDatum) -> List[Tangent]:
    """
    Coordinate basis of N (so/sp data) or M (ordinary data).

    For so/sp data the B-directions run over a basis of p(V) and each
    i-direction E_ab carries its adjoint in the j slot.
    """
    k, n, field = d.k, d.n, d.field
    zk, zi, zj = Mat.zeros(k, k, field), Mat.zeros(k, n, field), Mat.zeros(n, k, field)
    i_units = [Mat.unit(k, n, r, c, field) for r in range(k) for c in range(n)]
    if d.flavor is Flavor.ORDINARY:
        b_units = [Mat.unit(k, k, r, c, field) for r in range(k) for c in range(k)]
        j_units = [Mat.unit(n, k, r, c, field) for r in range(n) for c in range(k)]
        return ([(e, zk, zi, zj) for e in b_units] + [(zk, e, zi, zj) for e in b_units]
                + [(zk, zk, e, zj) for e in i_units] + [(zk, zk, zi, e) for e in j_units])
    p_basis = self_adjoint_basis(d.v_space)
    return ([(e, zk, zi, zj) for e in p_basis] + [(zk, e, zi, zj) for e in p_basis]
            + [(zk, zk, e, right_adjoint(e, d.w_space, d.v_space)) for e in i_units])


def differential(d: AdhmDatum) -> Mat:
    """Matrix of dμ at d: columns indexed by tangent_basis, rows by the k² entries of μ."""
    columns = []
    for db1, db2, di, dj in tangent_basis(d):
        delta = commutator(db1, d.b2) + commutator(d.b1, db2) + di @ d.j + d.i @ dj
        if d.flavor is not Flavor.ORDINARY:
            delta = split_endo(delta, d.v_space).g_part
        columns.append(delta.flatten())
    if not columns:
        return Mat.zeros(d.k * d.k, 0, d.field)
    return Mat.from_rows(columns, d.field).T


def infinitesimal_action(d: AdhmDatum, xi: Mat) -> Tangent:
    return commutator(xi, d.b1), commutator(xi, d.b2), xi @ d.i, -(d.j @ xi)


def action_matrix(group: GroupSpec, d: AdhmDatum) -> Mat:
    """Columns ξ·d for ξ in a basis of g, in M coordinates (2k² + 2kN rows)."""
    if group.dim != d.k:
        raise DimMismatch(f"{group.kind.value}({group.dim}) does not act on V of dim {d.k}")
    columns = [flatten_tangent(infinitesimal_action(d, xi)) for xi in group.lie_algebra_basis(d.field)]
    rows = 2 * d.k * d.k + 2 * d.k * d.n
    if not columns:
        return Mat.zeros(rows, 0, d.field)
    return Mat.from_rows(columns, d.field).T


def stabilizer_dim(group: GroupSpec, d: AdhmDatum) -> int:
    return len(nullspace(action_matrix(group, d)))


def orbit_dim(group: GroupSpec, d: AdhmDatum) -> int:
    return rank(action_matrix(group, d))


def check_equivariance(d: AdhmDatum, g_elem: Mat, group: Optional[GroupSpec] = None) -> bool:
    """μ(g·d) = g μ(d) g⁻¹, after checking g lies in the gauge group."""
    group = group or GroupSpec.for_datum(d)
    group.require(g_elem)
    lhs = moment_map(act(d, g_elem))
    rhs = g_elem @ moment_map(d) @ inverse(g_elem)
    return lhs == rhs
