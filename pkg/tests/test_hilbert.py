import dataclasses

import pytest

from src.adhm import Flavor
from src.hilbert import (apply_derivation, apply_linear_substitution, compare_series, complete_intersection_series,
                         differing_degrees, graded_piece, hilbert_truncated, hypersurface_dim, invariant_basis,
                         invariant_dim, monomial_count, monomials, setup_for, usp1_pair_series)
from src.linalg import Mat
from src.utils.errors import MissingComponent, WorkLimit


def test_monomial_enumeration():
    assert monomials(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert monomial_count(10, 2) == len(monomials(10, 2)) == 55
    assert monomial_count(3, -1) == 0


def test_closed_form_series():
    assert complete_intersection_series(3, 1, 3) == [1, 3, 5, 7]
    assert hypersurface_dim(3, 2) == 5
    assert [hypersurface_dim(4, d) for d in range(4)] == [1, 4, 9, 16]


def test_compare_series():
    assert compare_series([1, 2, 3], [1, 2, 4]) == 2
    assert compare_series([1, 2], [1, 2, 5]) is None
    assert differing_degrees([1, 2, 3, 4], [2, 2, 4]) == [0, 2]


def test_derivation_on_monomials():
    a = Mat.from_rows([[0, 1], [0, 0]])
    assert apply_derivation(a, {(2, 0): 1}) == {(1, 1): 2}
    assert apply_derivation(a, {(0, 3): 1}) == {}


def test_linear_substitution_swaps_variables():
    swap = Mat.from_rows([[0, 1], [1, 0]])
    assert apply_linear_substitution(swap, {(2, 1): 3}) == {(1, 2): 3}


def test_so_data_setup():
    setup = setup_for(Flavor.SO_DATA, 2, 4)
    assert setup.ambient_dim == 10
    assert len(setup.relations) == 3
    assert invariant_dim(setup, 0) == 1
    assert invariant_dim(setup, 1) == 2


def test_ordinary_invariants_in_degree_two():
    setup = setup_for(Flavor.ORDINARY, 1, 1)
    assert setup.ambient_dim == 4
    assert invariant_dim(setup, 2) == 3


def test_ordinary_quotient_ring_is_a_hypersurface():
    setup = setup_for(Flavor.ORDINARY, 1, 2)
    series = hilbert_truncated(setup, 2, ring=True)
    assert series.ring
    assert series.coeffs == [1, 6, 20]
    assert series.coeffs == [hypersurface_dim(6, d) for d in range(3)]


def test_ordinary_charge_one_ring_is_a_hypersurface_through_degree_six():
    series = hilbert_truncated(setup_for(Flavor.ORDINARY, 1, 1), 6, ring=True)
    assert series.coeffs == [hypersurface_dim(4, d) for d in range(7)]
    assert series.coeffs == [1, 4, 9, 16, 25, 36, 49]


def test_o_invariants_need_the_second_component():
    setup = dataclasses.replace(setup_for(Flavor.SP_DATA, 1, 2), extra_component=None)
    with pytest.raises(MissingComponent):
        invariant_basis(setup, 1)


def test_work_limit():
    setup = setup_for(Flavor.SO_DATA, 2, 4)
    with pytest.raises(WorkLimit):
        graded_piece(setup, 3, work_limit=100)
    with pytest.raises(WorkLimit):
        hilbert_truncated(setup, 3, work_limit=100)


def test_usp1_pair_model_constant_term():
    assert usp1_pair_series(1, 0) == [2]


def test_usp1_pair_model_differs_from_so4_data():
    so = hilbert_truncated(setup_for(Flavor.SO_DATA, 2, 4), 1)
    model = usp1_pair_series(1, 1)
    assert so.coeffs == [1, 2]
    assert model == [2, 4]
    assert so.first_difference(model) == 0
    assert differing_degrees(so.coeffs, model) == [0, 1]


@pytest.mark.slow
def test_usp1_pair_model_through_degree_four():
    so = hilbert_truncated(setup_for(Flavor.SO_DATA, 2, 4), 4, workers=2)
    model = usp1_pair_series(1, 4, workers=2)
    assert model == [2, 4, 12, 20, 38]
    assert so.dmax == 4 and so.coeffs[:2] == [1, 2]
    degrees = differing_degrees(so.coeffs, model)
    assert degrees[:2] == [0, 1]
    assert so.first_difference(model) == degrees[0]


@pytest.mark.slow
def test_so_data_ring_is_a_complete_intersection():
    setup = setup_for(Flavor.SO_DATA, 2, 4)
    series = hilbert_truncated(setup, 4, ring=True, workers=2)
    assert series.coeffs == complete_intersection_series(10, 3, 4)
    assert series.coeffs[4] == 715 - 3 * 55 + 3
