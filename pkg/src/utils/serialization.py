"""Canonical JSON for exact matrices, bilinear spaces and ADHM data."""

import hashlib
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Union

import orjson

from src.adhm import AdhmDatum, Flavor
from src.forms import BilinearSpace, FormKind
from src.linalg import ExactScalar, Field, FpElement, Mat
from src.utils.errors import AdhmLabError, ParseError

logger = logging.getLogger('adhmlab.cli')

JSON_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2 | orjson.OPT_PASSTHROUGH_DATACLASS


def dumps(obj: Any) -> bytes:
    """Sorted keys, two-space indent, trailing newline: byte-stable output."""
    return orjson.dumps(obj, option=JSON_OPTIONS, default=_default) + b'\n'


def loads(data: Union[bytes, str], source: str = '<input>') -> Any:
    try:
        return orjson.loads(data)
    except orjson.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON: {e.msg}", location=f"{source}:{e.lineno}:{e.colno}")


def digest(obj: Any) -> str:
    return hashlib.sha256(dumps(obj)).hexdigest()


def _default(value):
    if isinstance(value, (Fraction, FpElement)):
        return format_scalar(value)
    if isinstance(value, Mat):
        return mat_to_json(value)
    if isinstance(value, BilinearSpace):
        return space_to_json(value)
    if isinstance(value, AdhmDatum):
        return datum_to_json(value)
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def format_scalar(x: ExactScalar) -> str:
    if isinstance(x, FpElement):
        return f"{x.value} mod {x.p}"
    return str(x)


def parse_scalar(value, field: Field, location: str) -> ExactScalar:
    if isinstance(value, float):
        raise ParseError("Floating point entries are not exact", location=location)
    try:
        return field.parse(value)
    except AdhmLabError as e:
        raise ParseError(str(e), location=location)


def _require(obj: Dict, key: str, location: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"Missing key '{key}'", location=location)
    return obj[key]


def mat_to_json(m: Mat) -> Dict:
    return {'rows': m.rows, 'cols': m.cols, 'entries': [[format_scalar(x) for x in row] for row in m.to_rows()]}


def mat_from_json(obj, field: Field, location: str = '$') -> Mat:
    rows = _require(obj, 'rows', location)
    cols = _require(obj, 'cols', location)
    entries = _require(obj, 'entries', location)
    if not isinstance(entries, list) or len(entries) != rows:
        raise ParseError(f"Expected {rows} rows of entries", location=f"{location}.entries")
    out = []
    for r, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(f"Expected {cols} entries", location=f"{location}.entries[{r}]")
        out.append([parse_scalar(x, field, f"{location}.entries[{r}][{c}]") for c, x in enumerate(row)])
    return Mat.from_rows(out, field, cols=cols) if rows else Mat.zeros(0, cols, field)


def space_to_json(space: BilinearSpace) -> Dict:
    return {'dim': space.dim, 'kind': space.kind.value, 'gram': mat_to_json(space.gram)}


def space_from_json(obj, field: Field, location: str = '$') -> BilinearSpace:
    kind = _require(obj, 'kind', location)
    try:
        kind = FormKind(kind)
    except ValueError:
        raise ParseError(f"Unknown form kind {kind!r}", location=f"{location}.kind")
    gram = mat_from_json(_require(obj, 'gram', location), field, f"{location}.gram")
    if gram.rows != _require(obj, 'dim', location):
        raise ParseError("Gram matrix size differs from 'dim'", location=f"{location}.dim")
    try:
        return BilinearSpace(kind, gram)
    except AdhmLabError as e:
        raise ParseError(str(e), location=location)


def datum_to_json(d: AdhmDatum) -> Dict:
    out = {
        'field': d.field.tag,
        'flavor': d.flavor.value,
        'B1': mat_to_json(d.b1),
        'B2': mat_to_json(d.b2),
        'i': mat_to_json(d.i),
    }
    if d.flavor.has_forms:
        out['V'] = space_to_json(d.v_space)
        out['W'] = space_to_json(d.w_space)
        out['auto_adjoint'] = True
    else:
        out['V'] = {'dim': d.k}
        out['W'] = {'dim': d.n}
        out['j'] = mat_to_json(d.j)
    return out


def field_from_json(obj, location: str = '$') -> Field:
    tag = obj.get('field', 'q') if isinstance(obj, dict) else 'q'
    try:
        return Field.from_tag(tag)
    except AdhmLabError as e:
        raise ParseError(str(e), location=f"{location}.field")


def datum_from_json(obj, location: str = '$', field: Optional[Field] = None) -> AdhmDatum:
    """
    Read a datum. so/sp data carry V and W as bilinear spaces; j is either given
    or, with "auto_adjoint": true, computed as i*.
    """
    field = field or field_from_json(obj, location)
    try:
        flavor = Flavor.parse(_require(obj, 'flavor', location))
    except ValueError:
        raise ParseError(f"Unknown flavor {obj.get('flavor')!r}", location=f"{location}.flavor")
    b1 = mat_from_json(_require(obj, 'B1', location), field, f"{location}.B1")
    b2 = mat_from_json(_require(obj, 'B2', location), field, f"{location}.B2")
    i = mat_from_json(_require(obj, 'i', location), field, f"{location}.i")
    try:
        if flavor.has_forms:
            v_space = space_from_json(_require(obj, 'V', location), field, f"{location}.V")
            w_space = space_from_json(_require(obj, 'W', location), field, f"{location}.W")
            if obj.get('auto_adjoint'):
                return AdhmDatum.with_adjoint(flavor, b1, b2, i, v_space, w_space)
            j = mat_from_json(_require(obj, 'j', location), field, f"{location}.j")
            return AdhmDatum(flavor, b1, b2, i, j, v_space, w_space)
        j = mat_from_json(_require(obj, 'j', location), field, f"{location}.j")
        return AdhmDatum(flavor, b1, b2, i, j)
    except ParseError:
        raise
    except AdhmLabError as e:
        raise ParseError(str(e), location=location)


def read_document(path: Path) -> Dict:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise ParseError(f"Cannot read fixture: {e.strerror}", location=str(path))
    doc = loads(raw, str(path))
    if not isinstance(doc, dict):
        raise ParseError("Fixture must be a JSON object", location=f"{path}:$")
    return doc


def canonicalize(doc: Dict, source: str = '$') -> Dict:
    """Re-serialize the exact objects inside a fixture document; other keys pass through."""
    out = dict(doc)
    if 'datum' in doc:
        out['datum'] = datum_to_json(datum_from_json(doc['datum'], f"{source}.datum"))
    if 'matrix' in doc:
        field = field_from_json(doc, source)
        out['matrix'] = mat_to_json(mat_from_json(doc['matrix'], field, f"{source}.matrix"))
    if 'space' in doc:
        field = field_from_json(doc, source)
        out['space'] = space_to_json(space_from_json(doc['space'], field, f"{source}.space"))
    return out


def fixture_roundtrip(path: Path) -> bool:
    """parse → serialize → parse is the identity on the canonical form."""
    first = dumps(canonicalize(read_document(path), str(path)))
    second = dumps(canonicalize(loads(first, str(path)), str(path)))
    if first != second:
        logger.warning(f"Fixture {path} is not stable under a second canonical pass")
    return first == second
