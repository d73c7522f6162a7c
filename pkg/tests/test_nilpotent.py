import pytest

from src.adhm.sampling import random_group_element
from src.forms import FormKind, in_group, is_self_adjoint
from src.linalg import Mat, inverse, rank
from src.nilpotent import (GOLDEN_TABLE, AbDiagram, Partition, ab_table, associated_partitions, build_nilpotent,
                           conjugacy_test, conjugator, diagram_from_map, eigenspace_normal_forms, enumerate_ab_diagrams,
                           even_type_partitions, measured_orbit_dims, normal_form_basis, o_orbit_dim, orbit_dim,
                           partition_lists, partitions, realize, sp_orbit_dim)
from src.utils.errors import (InvariantViolation, NotEvenType, NotInGroup, NotNilpotent, NotSelfAdjoint,
                              ParseError, RuleUnavailable)
from src.utils.serialization import read_document


def test_partition_dual_and_kernel_growth():
    assert Partition.of(2, 1, 1).dual() == Partition.of(3, 1)
    assert Partition.from_kernel_growth([0, 2, 3]) == Partition.of(2, 1)
    assert Partition.of(1, 3, 1).parts == (3, 1, 1)


def test_even_type():
    assert Partition.of(2, 2).is_even_type
    assert Partition.of(1, 1).is_even_type
    assert not Partition.of(2, 1).is_even_type
    assert list(even_type_partitions(4)) == [Partition.of(2, 2), Partition.of(1, 1, 1, 1)]


def test_partition_enumeration():
    assert len(list(partitions(4))) == 5
    assert len(list(partition_lists(2))) == 3
    assert Partition.of(2, 2, 1).label() == '2^2 1'


def test_associated_partitions_of_built_endomorphisms():
    parts = (Partition.of(2, 1), Partition.of(1))
    b, space = build_nilpotent(parts, FormKind.ORTHOGONAL)
    assert is_self_adjoint(b, space)
    assert [p for _, p in associated_partitions(b)] == list(parts)
    assert [value for value, _ in associated_partitions(b)] == [0, 1]


def _expected_lengths(partition, kind):
    parts = partition.parts if kind is FormKind.ORTHOGONAL else partition.parts[::2]
    return sorted(d - 1 for d in parts)


def _check_partition_list(parts, kind):
    b, space = build_nilpotent(parts, kind)
    assert is_self_adjoint(b, space)
    found = associated_partitions(b)
    assert [p for _, p in found] == list(parts)
    assert [value for value, _ in found] == list(range(len(parts)))
    forms = eigenspace_normal_forms(b, space)
    assert [f.value for f in forms] == list(range(len(parts)))
    for form, partition in zip(forms, parts):
        nf = form.basis
        assert rank(nf.matrix) == partition.size
        assert nf.pairing_table() == nf.expected_gram()
        assert sorted(nf.lengths) == _expected_lengths(partition, kind)


@pytest.mark.parametrize('total', [2, 4, 6, pytest.param(8, marks=pytest.mark.slow)])
def test_every_even_type_list_round_trips(total):
    lists = list(partition_lists(total, even_type=True))
    assert lists
    for parts in lists:
        _check_partition_list(parts, FormKind.SYMPLECTIC)


@pytest.mark.parametrize('total', [1, 2, 3, 4, 5, pytest.param(6, marks=pytest.mark.slow)])
def test_every_orthogonal_list_round_trips(total):
    for parts in partition_lists(total):
        _check_partition_list(parts, FormKind.ORTHOGONAL)


def test_symplectic_build_needs_even_type():
    with pytest.raises(NotEvenType):
        build_nilpotent([Partition.of(2, 1)], FormKind.SYMPLECTIC)


@pytest.mark.parametrize('parts, kind, lengths', [
    ((3,), FormKind.ORTHOGONAL, [2]),
    ((3, 1), FormKind.ORTHOGONAL, [2, 0]),
    ((2, 2), FormKind.SYMPLECTIC, [1]),
    ((2, 2, 1, 1), FormKind.SYMPLECTIC, [1, 0]),
])
def test_normal_form_pairing_table(parts, kind, lengths):
    b, space = build_nilpotent([Partition(parts)], kind)
    basis = normal_form_basis(b, space)
    assert basis.lengths == lengths
    assert basis.pairing_table() == basis.expected_gram()


def test_normal_form_preconditions(sp4):
    with pytest.raises(NotNilpotent):
        normal_form_basis(Mat.identity(4), sp4)
    with pytest.raises(NotSelfAdjoint):
        normal_form_basis(Mat.unit(4, 4, 0, 1) + Mat.unit(4, 4, 2, 3), sp4)


@pytest.mark.parametrize('parts, kind', [
    ((Partition.of(2, 2),), FormKind.SYMPLECTIC),
    ((Partition.of(2, 2), Partition.of(1, 1)), FormKind.SYMPLECTIC),
    ((Partition.of(3),), FormKind.ORTHOGONAL),
    ((Partition.of(2), Partition.of(1)), FormKind.ORTHOGONAL),
])
def test_conjugator(rng, parts, kind):
    b, space = build_nilpotent(parts, kind)
    g = random_group_element(rng, space)
    target = g @ b @ inverse(g)
    assert conjugacy_test(b, target, space)
    h = conjugator(b, target, space)
    assert in_group(h, space)
    assert h @ b == target @ h


def test_non_conjugate_endomorphisms():
    a, space = build_nilpotent([Partition.of(2, 2)], FormKind.SYMPLECTIC)
    zero = Mat.zeros(4, 4)
    assert not conjugacy_test(a, zero, space)
    with pytest.raises(NotInGroup):
        conjugator(a, zero, space)


def test_diagram_labels():
    d = AbDiagram.parse('bab/b^2/a^4')
    assert d.label == 'bab/b²/a⁴'
    assert AbDiagram.parse(d.label) == d
    assert (d.k, d.n) == (4, 5)
    assert d.is_square_zero and not d.ii_star_zero
    with pytest.raises(ParseError):
        AbDiagram.parse('aab')


def test_admissibility():
    assert AbDiagram.parse('ab/ba').is_admissible
    assert not AbDiagram.parse('ab/a').is_admissible
    assert not AbDiagram.parse('aba/a').is_admissible
    assert AbDiagram.parse('bab/a').is_admissible
    assert AbDiagram.parse('bab/bab/a').is_admissible


def test_classical_orbit_formulas():
    assert sp_orbit_dim(Partition.of(2, 2)) == 6
    assert sp_orbit_dim(Partition.of(1, 1, 1, 1)) == 0
    assert o_orbit_dim(Partition.of(3, 1, 1)) == 6
    assert o_orbit_dim(Partition.of(1, 1, 1, 1, 1)) == 0


def test_golden_diagrams_are_the_square_zero_ones():
    labels = {d.label for d in enumerate_ab_diagrams(4, 5, square_zero=True)}
    assert set(GOLDEN_TABLE) <= labels
    assert labels - set(GOLDEN_TABLE) == {'ab/ab/ba/ba/a'}


@pytest.mark.parametrize('label', sorted(GOLDEN_TABLE))
def test_realizations_round_trip(label):
    diagram = AbDiagram.parse(label)
    real = realize(diagram)
    assert diagram_from_map(real.i, real.v_space, real.w_space) == diagram


def test_measured_dims_at_the_dense_orbit():
    measured = measured_orbit_dims(AbDiagram.parse('ababa/bab/a'))
    assert measured.dim_pair == 16
    assert measured.delta == 0


def test_golden_rule_outside_the_table():
    with pytest.raises(RuleUnavailable):
        orbit_dim(AbDiagram.parse('ab/ba'), 'golden')
    with pytest.raises(RuleUnavailable):
        orbit_dim(AbDiagram.parse('ab/ba'), 'guess')
    with pytest.raises(InvariantViolation):
        orbit_dim(AbDiagram.parse('ab/a'))


def test_ab_table_matches_the_fixture(fixtures_dir):
    golden = read_document(fixtures_dir / 'square_zero_k4_n5.json')
    rows = {row.diagram.label: row for row in ab_table(4, 5, square_zero=True)}
    for expected in golden['rows']:
        row = rows[expected['diagram']]
        assert row.dims.source == 'golden'
        assert (row.dims.delta, row.dims.dim_sp, row.dims.dim_o, row.dims.dim_pair) == \
            (expected['delta'], expected['dim_sp'], expected['dim_o'], expected['dim_pair'])
        assert row.zero_fibre_dim == expected['zero_fibre_dim']
    extra = rows['ab/ab/ba/ba/a']
    assert extra.dims.source == 'measured'
    assert not extra.dims.validated
    assert (extra.dims.dim_pair, extra.dims.delta) == (10, 0)


def test_dense_orbit_leads_the_table():
    rows = ab_table(4, 5, square_zero=True)
    assert rows[0].diagram.label == 'ababa/bab/a'
    assert max(row.dims.dim_pair for row in rows) == 16
