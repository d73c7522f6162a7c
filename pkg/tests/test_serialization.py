from fractions import Fraction

import orjson
import pytest
from rich.console import Console

from src.adhm import AdhmDatum, Flavor
from src.linalg import QQ, Field, Mat
from src.utils.errors import ParseError
from src.utils.report import Report, render_markdown
from src.utils.serialization import (datum_from_json, datum_to_json, dumps, fixture_roundtrip, loads, mat_from_json,
                                     mat_to_json, read_document)


def test_dumps_is_sorted_and_newline_terminated():
    out = dumps({'b': 1, 'a': Fraction(1, 2)})
    assert out.endswith(b'\n')
    assert out.index(b'"a"') < out.index(b'"b"')
    assert orjson.loads(out) == {'a': '1/2', 'b': 1}


@pytest.mark.parametrize('name', ['regular_sp4_o5.json', 'square_zero_k4_n5.json'])
def test_fixtures_are_canonical(fixtures_dir, name):
    assert fixture_roundtrip(fixtures_dir / name)


def test_float_entries_are_rejected():
    with pytest.raises(ParseError) as info:
        mat_from_json({'rows': 1, 'cols': 2, 'entries': [[1, 0.5]]}, QQ, '$.m')
    assert info.value.location == '$.m.entries[0][1]'


def test_ragged_matrices_are_rejected():
    with pytest.raises(ParseError):
        mat_from_json({'rows': 2, 'cols': 2, 'entries': [[1, 0]]}, QQ)
    with pytest.raises(ParseError):
        mat_from_json({'rows': 1, 'entries': [[1]]}, QQ)


def test_invalid_json():
    with pytest.raises(ParseError):
        loads(b'{"rows": ', 'broken.json')


def test_missing_fixture(tmp_path):
    with pytest.raises(ParseError):
        read_document(tmp_path / 'absent.json')


def test_prime_field_entries():
    f7 = Field.prime(7)
    m = Mat.from_rows([[3, 9]], f7)
    assert mat_to_json(m)['entries'] == [['3 mod 7', '2 mod 7']]
    assert mat_from_json(mat_to_json(m), f7) == m


def test_datum_round_trip(reference_datum):
    assert datum_from_json(datum_to_json(reference_datum)) == reference_datum
    ordinary = AdhmDatum.zero(Flavor.ORDINARY, 2, 1)
    doc = datum_to_json(ordinary)
    assert 'j' in doc
    assert datum_from_json(doc) == ordinary


def test_unknown_flavor(reference_doc):
    doc = dict(reference_doc['datum'], flavor='e8')
    with pytest.raises(ParseError):
        datum_from_json(doc)


def test_report_needs_a_passing_check():
    report = Report('moment', 'μ vanishes', 'abc')
    assert not report.passed
    report.check('zero', True)
    assert report.passed
    report.check('regular', False, 'rank 9')
    assert not report.passed


def test_report_timing_is_opt_in():
    report = Report('moment', 'μ vanishes', 'abc', timing_ms=12.3456)
    report.check('zero', True)
    assert 'timing_ms' not in report.to_json()
    assert report.to_json(include_timing=True)['timing_ms'] == 12.346
    assert orjson.loads(report.dumps())['passed'] is True


def test_markdown_rendering():
    report = Report('ab-table', 'orbit table', 'abc', outputs={'table': [{'diagram': 'ab/ba', 'dense': True}]})
    report.check('admissible', True)
    console = Console(record=True, width=120)
    render_markdown(report, console)
    text = console.export_text()
    assert 'ab-table: PASS' in text
    assert 'ab/ba' in text


def test_report_carries_its_anchor():
    report = Report('moment', 'μ vanishes', 'abc', anchor='[B_1,B_2]+ij')
    report.check('zero', True)
    assert report.to_json()['anchor'] == '[B_1,B_2]+ij'
    assert Report('moment', 'μ vanishes', 'abc').to_json()['anchor'] == ''
    console = Console(record=True, width=120)
    render_markdown(report, console)
    assert 'anchor: [B_1,B_2]+ij' in console.export_text()
