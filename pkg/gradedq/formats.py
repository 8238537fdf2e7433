"""
Plain-text formats for grid maps, paths and complexes.

All three are line oriented; blank lines and ``#`` comments are ignored.

grid map::

    grid N1 N2
    i j q0 q1 q2 q3        (one line per node)
    i j omega              (one line per cell)

path::

    dim D [base M]
    t a_11 a_12 ... a_DD [g_1 ... g_M]

complex::

    complex N              (pairing degree, optional)
    dims 0:2 1:2
    d K                    (followed by dims[K+1] rows)
    pairing K              (followed by dims[K] rows)
"""
import logging
from fractions import Fraction

import numpy as np

from gradedq.apath import APath
from gradedq.complexes import GradedComplex, SymplecticComplex, closed
from gradedq.exceptions import DomainError
from gradedq.gridmap import GridMap

logger = logging.getLogger(__name__)


def _lines(text):
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if line:
            yield number, line.split()


def _floats(fields, number):
    try:
        return [float(x) for x in fields]
    except ValueError:
        raise DomainError('line %d: expected numbers, got %s' % (number, ' '.join(fields)))


def _int(token, number, low=0, high=None, what='integer'):
    """``token`` as an int in ``[low, high)``; a bound of None is left open."""
    try:
        value = int(token)
    except ValueError:
        raise DomainError('line %d: %s %r is not an integer' % (number, what, token))
    if (low is not None and value < low) or (high is not None and value >= high):
        bound = '>= %d' % low if high is None else 'in [%d, %d)' % (low, high)
        raise DomainError('line %d: %s %d must be %s' % (number, what, value, bound))
    return value


def _field(fields, i, number, what):
    if i >= len(fields):
        raise DomainError('line %d: missing %s' % (number, what))
    return fields[i]


def read_grid(text):
    lines = list(_lines(text))
    if not lines or lines[0][1][0] != 'grid' or len(lines[0][1]) != 3:
        raise DomainError('grid file must start with "grid N1 N2"')
    number, header = lines[0]
    n1 = _int(header[1], number, 2, what='grid size')
    n2 = _int(header[2], number, 2, what='grid size')
    f = np.full((n1, n2, 4), np.nan)
    omega = np.zeros((n1 - 1, n2 - 1))
    for number, fields in lines[1:]:
        if len(fields) == 6:
            i = _int(fields[0], number, 0, n1, 'node index')
            j = _int(fields[1], number, 0, n2, 'node index')
            f[i, j] = _floats(fields[2:], number)
        elif len(fields) == 3:
            i = _int(fields[0], number, 0, n1 - 1, 'cell index')
            j = _int(fields[1], number, 0, n2 - 1, 'cell index')
            omega[i, j] = _floats(fields[2:], number)[0]
        else:
            raise DomainError('line %d: expected a node or a cell' % number)
    if np.isnan(f).any():
        raise DomainError('grid file leaves nodes undefined')
    return GridMap(f, omega)


def write_grid(grid):
    n1, n2 = grid.shape
    out = ['grid %d %d' % (n1, n2)]
    for i in range(n1):
        for j in range(n2):
            out.append('%d %d %s' % (i, j, ' '.join(repr(float(x)) for x in grid.f[i, j])))
    for i in range(n1 - 1):
        for j in range(n2 - 1):
            out.append('%d %d %r' % (i, j, float(grid.omega[i, j])))
    return '\n'.join(out) + '\n'


def read_path(text):
    lines = list(_lines(text))
    if not lines or lines[0][1][0] != 'dim':
        raise DomainError('path file must start with "dim D"')
    number, header = lines[0]
    dim = _int(_field(header, 1, number, 'dimension'), number, 1, what='dimension')
    base = 0
    if len(header) > 2:
        if header[2] != 'base' or len(header) != 4:
            raise DomainError('line %d: expected "dim D [base M]"' % number)
        base = _int(header[3], number, 1, what='base dimension')
    times, values, points = [], [], []
    for number, fields in lines[1:]:
        row = _floats(fields, number)
        if len(row) != 1 + dim * dim + base:
            raise DomainError('line %d: expected %d numbers' % (number, 1 + dim * dim + base))
        times.append(row[0])
        values.append(np.array(row[1:1 + dim * dim]).reshape(dim, dim))
        if base:
            points.append(row[1 + dim * dim:])
    return APath(times, values, points if base else None)


def write_path(p):
    header = 'dim %d' % p.dim
    if p.base is not None:
        header += ' base %d' % p.base.shape[1]
    out = [header]
    for j, t in enumerate(p.times):
        row = [t] + list(p.values[j].ravel())
        if p.base is not None:
            row += list(p.base[j])
        out.append(' '.join(repr(float(x)) for x in row))
    return '\n'.join(out) + '\n'


def _rational(token, number):
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise DomainError('line %d: %r is not a rational' % (number, token))


def read_complex(text):
    """A closed relative complex, or a plain complex when no pairing is given."""
    lines = list(_lines(text))
    n, dims, diffs, pairing = None, {}, {}, {}
    pos = 0
    while pos < len(lines):
        number, fields = lines[pos]
        pos += 1
        head = fields[0]
        if head == 'complex':
            n = _int(fields[1], number, what='pairing degree') if len(fields) > 1 else None
        elif head == 'dims':
            for item in fields[1:]:
                k, sep, v = item.partition(':')
                if not sep:
                    raise DomainError('line %d: expected DEGREE:DIM, got %r' % (number, item))
                degree = _int(k, number, None, what='degree')
                dims[degree] = _int(v, number, what='dimension')
        elif head in ('d', 'pairing'):
            k = _int(_field(fields, 1, number, 'degree'), number, None, what='degree')
            if head == 'd':
                rows, cols, target = dims.get(k + 1, 0), dims.get(k, 0), diffs
            else:
                if n is None:
                    raise DomainError('line %d: pairing needs "complex N" first' % number)
                rows, cols, target = dims.get(k, 0), dims.get(n - k, 0), pairing
            block = []
            for _ in range(rows):
                if pos >= len(lines):
                    raise DomainError('line %d: matrix is cut short' % number)
                row_number, row = lines[pos]
                pos += 1
                if len(row) != cols:
                    raise DomainError('line %d: expected %d entries, got %d'
                                      % (row_number, cols, len(row)))
                block.append([_rational(x, row_number) for x in row])
            target[k] = block
        else:
            raise DomainError('line %d: unknown section %r' % (number, head))
    C = GradedComplex(dims, diffs)
    if n is None:
        return C
    return closed(SymplecticComplex(C, pairing, n))


def _rows(M):
    return [' '.join(str(x) for x in M.row(i)) for i in range(M.rows)]


def write_complex(obj):
    """Emit a GradedComplex, SymplecticComplex or closed RelativeComplex."""
    S = getattr(obj, 'total', obj)
    C = getattr(S, 'complex', S)
    out = []
    if S is not C:
        out.append('complex %d' % S.n)
    out.append('dims ' + ' '.join('%d:%d' % (k, v) for k, v in sorted(C.dims.items())))
    for k, M in sorted(C.differentials.items()):
        out.append('d %d' % k)
        out.extend(_rows(M))
    if S is not C:
        for k, M in sorted(S.pairing.items()):
            out.append('pairing %d' % k)
            out.extend(_rows(M))
    return '\n'.join(out) + '\n'
