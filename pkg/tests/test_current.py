import pytest

from src.adhm.sampling import random_matrix
from src.current import (CurrentElement, CurrentVector, action_matrix, cyclic_generator, ff_census,
                         flatness_criterion, mark_attained, regular_nilpotent_strata, residue_commutant_check,
                         stabilizer_basis, stabilizer_dim, strata_dims, zero_rank_lift)
from src.current.census import _check_point
from src.linalg import QQ, Mat
from src.utils.errors import BadRank, DimMismatch, InvariantViolation, TooLarge, WrongStratum


def _vector(n, r, values, field=QQ):
    return CurrentVector.from_vector(n, r, values, field)


def test_current_element_rejects_trace():
    with pytest.raises(InvariantViolation):
        CurrentElement(1, (Mat.identity(2),))
    with pytest.raises(DimMismatch):
        CurrentElement(2, (Mat.zeros(2, 2),))


def test_times_z_shifts_coefficients():
    xi = CurrentElement.from_vector(3, [1, 0, 0, 0, 1, 0, 0, 0, 1])
    shifted = xi.times_z()
    assert shifted.min_degree() == 1
    assert shifted.coeffs[1] == xi.coeffs[0]
    assert xi.times_z(3).is_zero()


def test_action_matrix_matches_action(rng):
    n, r = 3, 2
    x = _vector(n, r, random_matrix(rng, 1, 2 * r * n).flatten())
    values = random_matrix(rng, 1, 3 * n).flatten()
    xi = CurrentElement.from_vector(n, values)
    assert action_matrix(x) @ Mat.column(values) == Mat.column(xi.act(x).to_vector())


def test_full_rank_points_have_trivial_stabilizer():
    x = _vector(2, 2, [1, 0, 0, 1, 5, 6, 7, 8])
    assert x.rank0 == 2
    assert stabilizer_dim(x) == 0


def test_zero_point_is_fixed_by_everything():
    assert stabilizer_dim(CurrentVector.zero(3, 2)) == 9


@pytest.mark.parametrize('n', [1, 2, 3])
def test_cyclic_generator_of_rank_one_point(n):
    x = _vector(n, 2, [1, 0, 0, 0] + [0] * (4 * (n - 1)))
    m_x, xi = cyclic_generator(x)
    assert m_x == 0
    assert stabilizer_dim(x) == n
    assert xi.act(x).is_zero()


def test_cyclic_generator_with_positive_minimal_degree():
    # x0 = e1 in column one, x1 = e2 in column two
    x = _vector(2, 2, [1, 0, 0, 0, 0, 0, 0, 1])
    m_x, xi = cyclic_generator(x)
    assert stabilizer_dim(x) == 2 - m_x
    assert xi.min_degree() == m_x
    assert xi.act(x).is_zero()


def test_cyclic_generator_needs_rank_one():
    with pytest.raises(WrongStratum):
        cyclic_generator(_vector(1, 2, [1, 0, 0, 1]))


def test_shift_and_truncate():
    x = _vector(2, 2, [1, 0, 0, 0, 0, 1, 0, 0])
    assert x.shifted().rank0 == 0
    assert x.shifted().coeffs[1:] == x.coeffs
    assert x.truncated().n == 1
    with pytest.raises(DimMismatch):
        _vector(1, 2, [0, 0, 0, 0]).truncated()


def test_lifted_pads_the_top_coefficient():
    xi = CurrentElement.from_vector(1, [1, 0, 0])
    lift = xi.lifted(3)
    assert lift.n == 3
    assert lift.coeffs[0] == xi.coeffs[0]
    assert lift.coeffs[1].is_zero() and lift.coeffs[2].is_zero()
    with pytest.raises(DimMismatch):
        lift.lifted(2)


@pytest.mark.parametrize('n, values, expected', [
    (2, [0, 0, 0, 0, 1, 0, 0, 0], 4),
    (3, [0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0], 3),
    (3, [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0], 7),
])
def test_zero_rank_points_lift_from_lower_order(n, values, expected):
    x = _vector(n, 2, values)
    assert x.rank0 == 0 and not x.is_zero()
    assert zero_rank_lift(x) == expected
    assert stabilizer_dim(x) == expected
    y = CurrentVector(n - 1, 2, x.coeffs[1:])
    assert stabilizer_dim(y) + 3 == expected
    for eta in stabilizer_basis(y):
        assert eta.lifted(n).times_z().act(x).is_zero()


def test_zero_rank_lift_needs_rank_zero():
    with pytest.raises(WrongStratum):
        zero_rank_lift(_vector(2, 2, [1, 0, 0, 0, 0, 0, 0, 0]))


def test_census_point_check_on_nonzero_rank_zero_point():
    x = _vector(2, 2, [0, 0, 0, 0, 1, 0, 0, 0])
    assert _check_point(x, 4)
    assert not _check_point(x, 99)
    assert not _check_point(x, 3)
    assert _check_point(CurrentVector.zero(2, 2), 6)


def test_base_case_strata():
    table = strata_dims(2, 1)
    assert [(e.rank_class, e.stabilizer_dim, e.dim) for e in table.entries] == [(2, 0, 4), (1, 1, 3), (0, 3, 0)]
    assert table.modality == 1


def test_modality_attained_at_the_open_stratum():
    table = strata_dims(3, 1)
    assert table.modality == 3
    assert [(e.rank_class, e.stabilizer_dim) for e in table.modality_attained_by()] == [(2, 0)]


@pytest.mark.parametrize('r, n', [(2, 1), (3, 1), (4, 1), (2, 2), (3, 2), (2, 3), (4, 3)])
def test_modality_formula(r, n):
    table = strata_dims(r, n)
    assert table.modality == (2 * r - 3) * n
    assert table.satisfies_flatness()
    assert table.modality == table.space_dim - table.group_dim


def test_strata_need_two_columns():
    with pytest.raises(BadRank):
        strata_dims(1, 2)


def test_flatness_criterion():
    assert flatness_criterion(1, 4, 3)
    assert not flatness_criterion(2, 4, 3)


def test_regular_nilpotent_strata():
    strata = regular_nilpotent_strata(2, 3)
    assert strata.entries == [(0, 0), (1, 3), (2, 6)]
    assert strata.modality == 2 * 3 - 2


@pytest.mark.parametrize('n', [1, 2, 3])
def test_residue_form_commutant(n):
    check = residue_commutant_check(n)
    assert check.passed
    assert check.image_dim == 3 * n


@pytest.mark.parametrize('p, full_rank, rank_one', [(3, 48, 32), (5, 480, 144)])
def test_census_level_one(p, full_rank, rank_one):
    census = ff_census(2, 1, p)
    assert census.violations == 0
    assert census.total == p ** 4
    assert census.by_class == {(0, 3): 1, (1, 1): rank_one, (2, 0): full_rank}
    assert full_rank == (p ** 2 - 1) * (p ** 2 - p)


def test_census_marks_attained_strata():
    census = ff_census(2, 1, 3)
    table = mark_attained(strata_dims(2, 1), census.by_class, 3)
    assert all(e.attained for e in table.entries)


def test_census_budget():
    with pytest.raises(TooLarge):
        ff_census(2, 2, 3, max_points=1000)


@pytest.mark.slow
def test_census_level_two():
    census = ff_census(2, 2, 3, workers=2)
    assert census.violations == 0
    assert census.by_class == {(0, 3): 48, (0, 4): 32, (0, 6): 1, (1, 1): 1728, (1, 2): 864, (2, 0): 3888}


def test_census_by_stabilizer():
    census = ff_census(2, 1, 3)
    assert census.by_stabilizer == {0: 48, 1: 32, 3: 1}
