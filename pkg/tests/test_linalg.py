from fractions import Fraction

import pytest

from src.linalg import (QQ, Field, FpElement, Mat, SparseEchelon, column_space_basis, express_in_basis, inverse,
                        nullspace, rank, rref, same_column_span, solve, solve_sylvester)
from src.utils.errors import DimMismatch, FieldError, MixedField, SingularSystem, SpectraOverlap

F5 = Field.prime(5)
F7 = Field.prime(7)


def test_rank_and_nullspace_of_singular_matrix():
    m = Mat.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(m) == 2
    kernel = nullspace(m)
    assert len(kernel) == 1
    assert (m @ kernel[0]).is_zero()


def test_rank_depends_on_the_field():
    rows = [[1, 2], [3, 1]]
    assert rank(Mat.from_rows(rows, QQ)) == 2
    assert rank(Mat.from_rows(rows, F5)) == 1


def test_rref_pivots_are_first_nonzero_columns():
    reduced, pivots = rref(Mat.from_rows([[0, 2, 4], [0, 1, 3]]))
    assert pivots == [1, 2]
    assert reduced == Mat.from_rows([[0, 1, 0], [0, 0, 1]])


def test_inverse_and_solve():
    a = Mat.from_rows([[2, 1], [1, 1]])
    assert a @ inverse(a) == Mat.identity(2)
    b = Mat.column([3, 2])
    assert a @ solve(a, b) == b


def test_solve_rejects_singular_and_inconsistent_systems():
    a = Mat.from_rows([[1, 2], [2, 4]])
    with pytest.raises(SingularSystem):
        solve(a, Mat.column([1, 0]))
    with pytest.raises(DimMismatch):
        solve(a, Mat.column([1, 0, 0]))


def test_inverse_over_prime_field():
    a = Mat.from_rows([[1, 2], [3, 4]], F7)
    assert a @ inverse(a) == Mat.identity(2, F7)


def test_sylvester_solution():
    a = Mat.diag([1, 2])
    b = Mat.diag([3, 4])
    c = Mat.from_rows([[1, 2], [3, 4]])
    x = solve_sylvester(a, b, c)
    assert a @ x - x @ b == c


def test_sylvester_with_nondiagonal_blocks():
    a = Mat.from_rows([[1, 1], [0, 1]])
    b = Mat.from_rows([[Fraction(1, 2)]])
    c = Mat.column([1, -1])
    x = solve_sylvester(a, b, c)
    assert a @ x - x @ b == c


def test_sylvester_overlapping_spectra():
    with pytest.raises(SpectraOverlap):
        solve_sylvester(Mat.diag([1, 2]), Mat.diag([2]), Mat.zeros(2, 1))


def test_column_spans():
    m = Mat.from_rows([[1, 2, 3], [0, 1, 1], [1, 3, 4]])
    basis = column_space_basis(m)
    assert basis.cols == rank(m) == 2
    assert same_column_span(basis, m)
    coords = express_in_basis(basis, m)
    assert basis @ coords == m


def test_mixed_fields_do_not_combine():
    with pytest.raises(MixedField):
        Mat.identity(2, QQ) + Mat.identity(2, F5)


def test_field_tags():
    assert Field.from_tag('q') == QQ
    assert Field.from_tag('fp:7') == F7
    assert F7.tag == 'fp:7'
    with pytest.raises(FieldError):
        Field.from_tag('reals')
    for bad in (2, 4, 9):
        with pytest.raises(FieldError):
            Field.prime(bad)


def test_parse_scalars():
    assert QQ.parse('1/2') == Fraction(1, 2)
    assert QQ.parse(-3) == Fraction(-3)
    assert F7.parse('3 mod 7') == FpElement(3, 7)
    assert F7.parse('1/2') == FpElement(4, 7)
    with pytest.raises(MixedField):
        F7.parse('3 mod 5')
    with pytest.raises(FieldError):
        QQ.parse('x')


def test_fp_arithmetic():
    x = FpElement(3, 7)
    assert x * x.inverse() == 1
    assert x / 2 == FpElement(5, 7)
    assert -x == FpElement(4, 7)
    with pytest.raises(FieldError):
        FpElement(0, 7).inverse()


def test_square_classes():
    assert QQ.square_class(Fraction(8, 3)) == 6
    assert QQ.square_class(Fraction(-4)) == -1
    assert QQ.square_class(Fraction(9, 4)) == 1
    assert F5.square_class(F5(4)) == 1
    assert F5.square_class(F5(2)) == F5(2)
    assert F7.square_class(F7(5)) == F7(3)
    with pytest.raises(FieldError):
        QQ.square_class(QQ.zero)


def test_square_roots():
    assert QQ.sqrt(Fraction(9, 4)) == Fraction(3, 2)
    root = F7.sqrt(F7(2))
    assert root * root == 2
    with pytest.raises(FieldError):
        QQ.sqrt(Fraction(2))


def test_sparse_echelon():
    echelon = SparseEchelon(QQ)
    assert echelon.add({0: Fraction(1), 1: Fraction(1)}) == 0
    assert echelon.add({0: Fraction(2), 1: Fraction(2)}) is None
    assert echelon.add({0: Fraction(1), 2: Fraction(1)}) == 1
    assert echelon.rank == 2
    assert echelon.pivots == [0, 1]
    assert not echelon.reduce({1: Fraction(1), 2: Fraction(-1)})


def test_kron_and_block_diag():
    a = Mat.from_rows([[1, 2], [3, 4]])
    assert a.kron(Mat.identity(2)).shape == (4, 4)
    assert a.kron(Mat.identity(2))[2, 0] == 3
    d = Mat.block_diag([a, Mat.identity(1)])
    assert d.shape == (3, 3) and d[2, 2] == 1 and d[0, 2] == 0


@pytest.mark.parametrize('p', [101, 10007])
def test_rank_over_q_agrees_with_reduction_mod_p(rng, p):
    fp = Field.prime(p)
    agree = 0
    for _ in range(200):
        r = rng.randint(1, 6)
        left = Mat.from_rows([[rng.randint(-9, 9) for _ in range(r)] for _ in range(6)])
        right = Mat.from_rows([[rng.randint(-9, 9) for _ in range(6)] for _ in range(r)])
        m = left @ right
        agree += rank(m) == rank(m.to_field(fp))
    assert agree >= 190
