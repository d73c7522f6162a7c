import pytest

from src.adhm.sampling import random_group_element, random_matrix, random_self_adjoint
from src.forms import (BilinearSpace, FormKind, adjoint, cayley_transform, in_group, is_anti_self_adjoint,
                       is_self_adjoint, lie_algebra_basis, orientation_reversing_element, orthogonal_complement,
                       residue_space, right_adjoint, self_adjoint_basis, split_endo, standard_space,
                       unipotent_exp, z_multiplication)
from src.linalg import QQ, Field, Mat, rank
from src.linalg.matrix import commutator
from src.utils.errors import InvariantViolation, OddSymplectic


def test_odd_symplectic_is_rejected():
    with pytest.raises(OddSymplectic):
        standard_space(FormKind.SYMPLECTIC, 3)


def test_gram_matrix_validation():
    with pytest.raises(InvariantViolation):
        BilinearSpace(FormKind.ORTHOGONAL, Mat.from_rows([[1, 1], [0, 1]]))
    with pytest.raises(InvariantViolation):
        BilinearSpace(FormKind.ORTHOGONAL, Mat.from_rows([[1, 1], [1, 1]]))
    with pytest.raises(InvariantViolation):
        BilinearSpace(FormKind.SYMPLECTIC, Mat.from_rows([[0, 1], [1, 0]]))


@pytest.mark.parametrize('kind, dim, p_dim, g_dim', [
    (FormKind.SYMPLECTIC, 4, 6, 10),
    (FormKind.SYMPLECTIC, 2, 1, 3),
    (FormKind.ORTHOGONAL, 5, 15, 10),
    (FormKind.ORTHOGONAL, 4, 10, 6),
])
def test_basis_dimensions(kind, dim, p_dim, g_dim):
    space = standard_space(kind, dim)
    p_basis = self_adjoint_basis(space)
    g_basis = lie_algebra_basis(space)
    assert len(p_basis) == p_dim
    assert len(g_basis) == g_dim
    assert all(is_self_adjoint(b, space) for b in p_basis)
    assert all(is_anti_self_adjoint(b, space) for b in g_basis)


def test_right_adjoint_identity(rng, sp4, o5):
    f = random_matrix(rng, 4, 5)
    f_star = right_adjoint(f, o5, sp4)
    for s in range(5):
        for t in range(4):
            v = Mat.unit(5, 1, s, 0)
            w = Mat.unit(4, 1, t, 0)
            assert o5.pair(v, f_star @ w) == sp4.pair(f @ v, w)


def test_adjoint_is_an_involution(rng, sp4):
    a = random_matrix(rng, 4, 4)
    assert adjoint(adjoint(a, sp4), sp4) == a


def test_split_endo(rng, o5):
    a = random_matrix(rng, 5, 5)
    parts = split_endo(a, o5)
    assert parts.p_part + parts.g_part == a
    assert is_self_adjoint(parts.p_part, o5)
    assert is_anti_self_adjoint(parts.g_part, o5)


def test_commutator_of_self_adjoint_maps_is_in_the_lie_algebra(rng, sp4):
    a = random_self_adjoint(rng, sp4)
    b = random_self_adjoint(rng, sp4)
    assert is_anti_self_adjoint(commutator(a, b), sp4)


def test_cayley_transform_preserves_the_form(o5):
    xi = Mat.unit(5, 5, 1, 2) - Mat.unit(5, 5, 2, 0)
    assert is_anti_self_adjoint(xi, o5)
    assert in_group(cayley_transform(xi), o5)


@pytest.mark.parametrize('kind, dim', [(FormKind.SYMPLECTIC, 4), (FormKind.ORTHOGONAL, 3)])
def test_random_group_elements(rng, kind, dim):
    space = standard_space(kind, dim, Field.prime(7))
    assert in_group(random_group_element(rng, space), space)


def test_unipotent_exp():
    xi = Mat.from_rows([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    g = unipotent_exp(xi)
    assert g[0, 2] == QQ.parse('1/2')
    with pytest.raises(InvariantViolation):
        unipotent_exp(Mat.identity(2))


def test_reflection_reverses_orientation(o5):
    tau = orientation_reversing_element(o5)
    assert in_group(tau, o5)
    assert tau @ tau == Mat.identity(5)
    assert rank(tau - Mat.identity(5)) == 1


def test_direct_sum_and_tensor():
    plane = standard_space(FormKind.SYMPLECTIC, 2)
    assert plane.tensor(plane).kind is FormKind.ORTHOGONAL
    assert plane.tensor(standard_space(FormKind.ORTHOGONAL, 1)).kind is FormKind.SYMPLECTIC
    assert plane.direct_sum(plane).dim == 4


def test_orthogonal_complement(sp4):
    line = Mat.unit(4, 1, 0, 0)
    complement = orthogonal_complement(sp4, line)
    assert complement.cols == 3
    assert (line.T @ sp4.gram @ complement).is_zero()


def test_residue_space_multiplication_is_self_adjoint():
    for n in (1, 2, 3):
        space = residue_space(n)
        assert space.kind is FormKind.SYMPLECTIC
        assert is_self_adjoint(z_multiplication(n), space)
