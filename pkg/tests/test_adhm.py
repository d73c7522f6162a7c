from fractions import Fraction

import pytest

from src.adhm import (AdhmDatum, Flavor, GroupKind, GroupSpec, act, action_matrix, check_equivariance, differential,
                      dim_m, dim_n, eigenvalue_divisor, fibre_dim_over_base, gauge_lie_dim, generalized_eigenspace,
                      is_costable, is_regular, is_stable, lie_dim, moment_map, orbit_dim, stabilizer_dim,
                      stratum_dim, tangent_basis)
from src.adhm.sampling import (random_datum, random_group_element, random_matrix, random_self_adjoint,
                               square_zero_so_block, usp1_block)
from src.forms import FormKind, standard_space
from src.linalg import QQ, Field, Mat, nullspace, rank, same_column_span
from src.utils.errors import DimMismatch, FlavorMismatch, InvariantViolation, IrreducibleFactor, NotInGroup, OutOfRange


def test_reference_datum_lies_in_the_zero_fibre(reference_datum):
    assert reference_datum.k == 4 and reference_datum.n == 5
    assert reference_datum.constraint_violations() == []
    assert moment_map(reference_datum).is_zero()


def test_reference_datum_is_regular(reference_datum):
    assert is_costable(reference_datum)
    assert is_stable(reference_datum)
    assert is_regular(reference_datum)


def test_reference_differential_has_full_rank(reference_datum):
    dmu = differential(reference_datum)
    assert dmu.shape == (16, dim_n(Flavor.SO_DATA, 4, 5))
    assert dmu.shape == (16, 32)
    assert rank(dmu) == lie_dim(GroupKind.SP, 4) == 10


def test_reference_gauge_action_is_free(reference_datum):
    group = GroupSpec.for_datum(reference_datum)
    assert action_matrix(group, reference_datum).shape == (72, 10)
    assert stabilizer_dim(group, reference_datum) == 0
    assert orbit_dim(group, reference_datum) == 10


def test_reference_spectrum_and_kernel(reference_datum):
    divisor = eigenvalue_divisor(reference_datum.b1)
    assert divisor.as_dict() == {Fraction(-1, 2): 2, Fraction(1, 2): 2}
    assert divisor.degree == 4
    kernel = nullspace(reference_datum.j)
    assert same_column_span(Mat.hstack(kernel), Mat.column([0, 1, 1, 0]))


def test_equivariance_under_random_gauge(rng, reference_datum):
    g = random_group_element(rng, reference_datum.v_space)
    assert check_equivariance(reference_datum, g)
    moved = act(reference_datum, g)
    assert moved.constraint_violations() == []
    assert moment_map(moved).is_zero()


def test_equivariance_off_the_zero_fibre(rng):
    for flavor in (Flavor.ORDINARY, Flavor.SO_DATA, Flavor.SP_DATA):
        d = random_datum(rng, flavor, 2, 2)
        group = GroupSpec.for_datum(d)
        g = random_group_element(rng, d.v_space) if d.v_space else Mat.from_rows([[1, 2], [1, 3]])
        assert check_equivariance(d, g, group)


def test_equivariance_rejects_non_group_elements(reference_datum):
    with pytest.raises(NotInGroup):
        check_equivariance(reference_datum, Mat.scalar(4, 2))


def test_moment_map_requires_flavor_constraints(reference_datum):
    broken = reference_datum.replace(b1=reference_datum.b1 + Mat.unit(4, 4, 0, 1))
    assert broken.constraint_violations()
    with pytest.raises(InvariantViolation):
        moment_map(broken)


def test_datum_shape_validation():
    z = Mat.zeros(2, 2)
    with pytest.raises(DimMismatch):
        AdhmDatum(Flavor.ORDINARY, z, Mat.zeros(3, 3), Mat.zeros(2, 1), Mat.zeros(1, 2))
    with pytest.raises(FlavorMismatch):
        AdhmDatum(Flavor.SO_DATA, z, z, Mat.zeros(2, 1), Mat.zeros(1, 2))
    with pytest.raises(FlavorMismatch):
        AdhmDatum(Flavor.SO_DATA, z, z, Mat.zeros(2, 2), Mat.zeros(2, 2),
                  standard_space(FormKind.ORTHOGONAL, 2), standard_space(FormKind.ORTHOGONAL, 2))


def test_flavor_aliases():
    assert Flavor.parse('so') is Flavor.SO_DATA
    assert Flavor.parse('SP') is Flavor.SP_DATA
    assert Flavor.parse('gl') is Flavor.ORDINARY
    assert Flavor.SO_DATA.v_kind is FormKind.SYMPLECTIC
    assert Flavor.SP_DATA.w_kind is FormKind.SYMPLECTIC


def test_ordinary_stability():
    one = Mat.identity(1)
    zero = Mat.zeros(1, 1)
    d = AdhmDatum(Flavor.ORDINARY, zero, zero, one, zero)
    assert moment_map(d).is_zero()
    assert is_stable(d)
    assert not is_costable(d)
    assert not is_stable(AdhmDatum.zero(Flavor.ORDINARY, 2, 1))
    assert is_stable(AdhmDatum.zero(Flavor.ORDINARY, 0, 3))


def test_stability_matches_costability_for_so_data(rng):
    for _ in range(3):
        d = random_datum(rng, Flavor.SO_DATA, 2, 3)
        assert is_stable(d) == is_costable(d)


def _sampled_datum(rng, flavor, k, n):
    """Random so/sp datum, degenerate in about half the draws (i of rank ≤ 1, B2 a multiple of B1)."""
    v_space = standard_space(flavor.v_kind, k)
    w_space = standard_space(flavor.w_kind, n)
    b1 = random_self_adjoint(rng, v_space)
    b2 = b1.scale(rng.randint(-2, 2)) if rng.random() < 0.5 else random_self_adjoint(rng, v_space)
    if rng.random() < 0.5:
        i = random_matrix(rng, k, 1) @ random_matrix(rng, 1, n)
    else:
        i = random_matrix(rng, k, n)
    return AdhmDatum.with_adjoint(flavor, b1, b2, i, v_space, w_space)


@pytest.mark.slow
def test_stability_matches_costability_on_many_samples(rng):
    outcomes = set()
    for t in range(500):
        flavor, k, n = (Flavor.SO_DATA, 2, 3) if t % 2 else (Flavor.SP_DATA, 2, 2)
        d = _sampled_datum(rng, flavor, k, n)
        stable = is_stable(d)
        assert stable == is_costable(d)
        outcomes.add(stable)
    assert outcomes == {True, False}


def test_tangent_basis_dimensions():
    assert len(tangent_basis(AdhmDatum.zero(Flavor.ORDINARY, 2, 3))) == dim_m(2, 3) == 20
    assert len(tangent_basis(AdhmDatum.zero(Flavor.SO_DATA, 2, 4))) == dim_n(Flavor.SO_DATA, 2, 4) == 10
    assert len(tangent_basis(AdhmDatum.zero(Flavor.SP_DATA, 1, 2))) == dim_n(Flavor.SP_DATA, 1, 2) == 4


def test_gauge_dimensions():
    assert gauge_lie_dim(Flavor.ORDINARY, 3) == 9
    assert gauge_lie_dim(Flavor.SO_DATA, 4) == 10
    assert gauge_lie_dim(Flavor.SP_DATA, 3) == 3


@pytest.mark.parametrize('k, n, l, expected', [(4, 4, 2, 18), (4, 4, 1, 17), (2, 5, 1, 9), (4, 5, 2, 22)])
def test_stratum_dims(k, n, l, expected):
    assert stratum_dim(k, n, l) == expected


def test_stratum_dim_ranges():
    with pytest.raises(OutOfRange):
        stratum_dim(3, 4, 1)
    with pytest.raises(OutOfRange):
        stratum_dim(4, 4, 3)
    with pytest.raises(OutOfRange):
        stratum_dim(4, 4, 0)


def test_fibre_dims():
    assert fibre_dim_over_base(5, 18) == 13
    assert fibre_dim_over_base(6, 18) == 12
    with pytest.raises(OutOfRange):
        fibre_dim_over_base(19, 18)


def test_square_zero_block_is_regular(rng):
    w_space = standard_space(FormKind.ORTHOGONAL, 4)
    block = square_zero_so_block(rng, w_space, 3)
    assert block.k == 2
    assert (block.i @ block.j).is_zero()
    assert moment_map(block).is_zero()
    assert is_regular(block)
    assert eigenvalue_divisor(block.b1).as_dict() == {Fraction(3): 2}


def test_usp1_block_has_vanishing_moment_map(rng):
    block = usp1_block(rng, -1)
    assert block.flavor is Flavor.SP_DATA
    assert moment_map(block).is_zero()


def test_eigenvalues_must_be_rational():
    rotation = Mat.from_rows([[0, -1], [1, 0]])
    with pytest.raises(IrreducibleFactor):
        eigenvalue_divisor(rotation)
    f5 = Field.prime(5)
    divisor = eigenvalue_divisor(rotation.to_field(f5))
    assert sorted(int(a) for a in divisor.support) == [2, 3]


def test_generalized_eigenspace():
    b = Mat.from_rows([[2, 1, 0], [0, 2, 0], [0, 0, 5]])
    assert generalized_eigenspace(b, 2, 2).cols == 2
    assert generalized_eigenspace(b, 2, 1).cols == 1
    assert generalized_eigenspace(b, 5, 1).cols == 1
