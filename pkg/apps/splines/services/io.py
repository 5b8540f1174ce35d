"""
File formats shared by the management commands.

CSV and triplet files start with ``# key: value`` metadata lines; JSON files
carry the same metadata under ``"meta"``. Floats are written with 17
significant digits so values survive a round trip bit for bit.
"""
import io
import json
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np
from django.conf import settings

from apps.splines.exceptions import InvalidArgumentError
from apps.splines.services.knots import KnotVector

TOOL_NAME = 'psplines'
TOOL_VERSION = '1.0.0'


def float_format():
    return f'%.{getattr(settings, "PSPLINES_CSV_DIGITS", 17)}g'


def build_meta(seed=None, **config):
    meta = {'tool': TOOL_NAME, 'version': TOOL_VERSION}
    if seed is not None:
        meta['seed'] = int(seed)
    if config:
        meta['config'] = config
    return meta


def header_lines(meta):
    lines = []
    for key, value in (meta or {}).items():
        if not isinstance(value, str):
            value = json.dumps(value, sort_keys=True, default=_json_default)
        lines.append(f'# {key}: {value}')
    return lines


def _json_default(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f'{type(value).__name__} is not JSON serializable')


@contextmanager
def open_output(target):
    """Path, '-' for stdout, or an already open text stream"""
    if hasattr(target, 'write'):
        yield target
    elif str(target) == '-':
        yield sys.stdout
    else:
        path = Path(target)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('w', encoding='utf-8', newline='\n') as handle:
            yield handle


@contextmanager
def open_input(source):
    if hasattr(source, 'read'):
        yield source
    elif str(source) == '-':
        yield sys.stdin
    else:
        path = Path(source)
        if not path.exists():
            raise InvalidArgumentError(f'input file {path} does not exist')
        with path.open('r', encoding='utf-8') as handle:
            yield handle


def read_meta(lines):
    """Parse leading ``# key: value`` lines"""
    meta = {}
    for line in lines:
        if not line.startswith('#'):
            break
        key, sep, value = line[1:].strip().partition(':')
        if not sep:
            continue
        value = value.strip()
        try:
            meta[key.strip()] = json.loads(value)
        except json.JSONDecodeError:
            meta[key.strip()] = value
    return meta


def write_csv(target, matrix, meta=None, columns=None):
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    buffer = io.StringIO()
    for line in header_lines(meta):
        buffer.write(line + '\n')
    if columns:
        buffer.write(','.join(columns) + '\n')
    np.savetxt(buffer, matrix, fmt=float_format(), delimiter=',')
    with open_output(target) as handle:
        handle.write(buffer.getvalue())


def write_triplets(target, band, meta=None):
    """Coordinate triplets (row, col, value) of the stored band, zero-based"""
    rows, cols, values = band.triplets()
    fmt = float_format()
    with open_output(target) as handle:
        for line in header_lines(meta):
            handle.write(line + '\n')
        handle.write('row,col,value\n')
        for i, j, value in zip(rows, cols, values):
            handle.write(f'{int(i)},{int(j)},{fmt % value}\n')


def read_csv(source, min_columns=1):
    """Numeric CSV, skipping metadata comments and an optional header row"""
    with open_input(source) as handle:
        text = handle.read()
    lines = text.splitlines()
    meta = read_meta(lines)
    body = [line for line in lines if line.strip() and not line.startswith('#')]
    if body and not _is_numeric_row(body[0]):
        body = body[1:]
    if not body:
        raise InvalidArgumentError('input contains no numeric rows')
    try:
        data = np.loadtxt(io.StringIO('\n'.join(body)), delimiter=',', ndmin=2)
    except ValueError as exc:
        raise InvalidArgumentError(f'could not parse numeric CSV: {exc}') from exc
    if data.shape[1] < min_columns:
        raise InvalidArgumentError(f'expected at least {min_columns} columns, got {data.shape[1]}')
    return data, meta


def _is_numeric_row(line):
    try:
        [float(cell) for cell in line.split(',')]
    except ValueError:
        return False
    return True


def read_xy(source):
    data, meta = read_csv(source, min_columns=2)
    return data[:, 0], data[:, 1]


def write_knots_csv(target, kv, meta=None):
    meta = dict(meta or build_meta())
    meta['d'] = kv.d
    write_csv(target, kv.t[:, None], meta=meta)


def knots_to_dict(kv):
    return {'d': kv.d, 't': kv.t.tolist()}


def write_json(target, payload, meta=None):
    document = dict(payload)
    if meta is not None:
        document = {'meta': meta, **document}
    with open_output(target) as handle:
        json.dump(document, handle, indent=2, sort_keys=False, default=_json_default)
        handle.write('\n')


def read_knots(source, d=None):
    """
    Knot vector from a one-column CSV or a JSON object ``{"d": ..., "t": [...]}``.

    An explicit ``d`` wins over the one stored in the file.
    """
    with open_input(source) as handle:
        text = handle.read()
    stripped = text.lstrip()
    if stripped.startswith('{'):
        try:
            document = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InvalidArgumentError(f'could not parse knot JSON: {exc}') from exc
        if 't' not in document:
            raise InvalidArgumentError('knot JSON must contain a "t" array')
        order = d if d is not None else document.get('d')
        knots = document['t']
    else:
        data, meta = read_csv(io.StringIO(text))
        order = d if d is not None else meta.get('d')
        knots = data[:, 0]
    if order is None:
        raise InvalidArgumentError('spline order d is neither given nor stored in the knot file')
    return KnotVector(knots, int(order))
