import os

import numpy as np
import pytest

from gradedq.apath import APath, so3_hat
from gradedq.complexes import GradedComplex, RelativeComplex
from gradedq.exceptions import DomainError
from gradedq.formats import (read_complex, read_grid, read_path, write_complex, write_grid,
                             write_path)
from gradedq.gridmap import smooth_grid

DATA = os.path.join(os.path.dirname(__file__), os.pardir, os.pardir, 'suite', 'data')


def data(name):
    with open(os.path.join(DATA, name)) as fh:
        return fh.read()


class TestPaths:

    def test_write_then_read(self):
        X = so3_hat([0.1, 0.2, 0.3])
        p = APath([0.0, 0.5, 1.0], [X, 2 * X, X], [[1.0, 0.0, 0.0]] * 3)
        q = read_path(write_path(p))
        assert np.array_equal(q.times, p.times)
        assert np.array_equal(q.values, p.values)
        assert np.array_equal(q.base, p.base)

    def test_header(self):
        with pytest.raises(DomainError):
            read_path('0 1 2 3 4\n')

    def test_row_length(self):
        with pytest.raises(DomainError):
            read_path('dim 2\n0 0 1 -1\n1 0 1\n')

    def test_rotation_data(self):
        p = read_path(data('rotation.path'))
        assert p.dim == 3
        assert len(p) == 5
        assert np.allclose(p.values, -np.transpose(p.values, (0, 2, 1)))

    def test_shear_data_has_base(self):
        p = read_path(data('shear.path'))
        assert p.base.shape == (len(p), 3)


class TestGrids:

    def test_write_then_read(self):
        W = smooth_grid(4, 0.5)
        V = read_grid(write_grid(W))
        assert np.array_equal(V.f, W.f)
        assert np.array_equal(V.omega, W.omega)

    def test_missing_nodes(self):
        with pytest.raises(DomainError):
            read_grid('grid 2 2\n0 0 1 0 0 0\n')

    def test_quarter_data(self):
        W = read_grid(data('quarter.grid'))
        assert W.shape == (3, 3)
        assert W.omega[1, 1] == 0.125


class TestComplexes:

    def test_plain(self):
        C = read_complex(data('torus.complex'))
        assert isinstance(C, GradedComplex)
        assert C.betti() == {0: 1, 1: 2, 2: 1}

    def test_paired(self):
        R = read_complex(data('torus-paired.complex'))
        assert isinstance(R, RelativeComplex)
        assert R.is_closed()
        assert R.n == 2

    def test_write_then_read(self):
        text = 'dims 0:2 1:1\nd 0\n-1 1\n'
        C = read_complex(text)
        assert write_complex(C) == text

    def test_pairing_needs_degree(self):
        with pytest.raises(DomainError):
            read_complex('dims 0:1\npairing 0\n1\n')

    def test_unknown_section(self):
        with pytest.raises(DomainError) as e:
            read_complex('dims 0:1\nboundary 0\n')
        assert 'line 2' in str(e.value)

    def test_cut_short(self):
        with pytest.raises(DomainError):
            read_complex('dims 0:1 1:2\nd 0\n1\n')


NODES = '0 0 1 0 0 0\n0 1 1 0 0 0\n1 0 1 0 0 0\n1 1 1 0 0 0\n'


class TestMalformed:

    @pytest.mark.parametrize('text, where', [
        ('grid 2 2\n' + NODES + '5 0 0.5\n', 'line 6'),
        ('grid 2 2\n' + NODES + '0 -1 0.5\n', 'line 6'),
        ('grid 2 2\n' + NODES + '-1 0 1 0 0 0\n', 'line 6'),
        ('grid 2 2\n0 2 1 0 0 0\n', 'line 2'),
        ('grid x 2\n', 'line 1'),
        ('grid 1 2\n0 0 1 0 0 0\n0 1 1 0 0 0\n', 'line 1'),
    ])
    def test_grid(self, text, where):
        with pytest.raises(DomainError) as e:
            read_grid(text)
        assert where in str(e.value)

    def test_negative_node_does_not_overwrite(self):
        # without the range check -1 would land on the last row
        with pytest.raises(DomainError):
            read_grid('grid 2 2\n' + NODES + '-1 1 0 1 0 0\n')

    @pytest.mark.parametrize('text', [
        'dim x\n0 1\n1 1\n',
        'dim\n',
        'dim 0\n0\n1\n',
        'dim 1 base\n0 1\n1 1\n',
        'dim 1 base -2\n0 1\n1 1\n',
        'dim 1 span 2\n0 1\n1 1\n',
    ])
    def test_path_header(self, text):
        with pytest.raises(DomainError) as e:
            read_path(text)
        assert 'line 1' in str(e.value)

    @pytest.mark.parametrize('text, where', [
        ('dims 0:a\n', 'line 1'),
        ('dims 0\n', 'line 1'),
        ('dims 0:-1\n', 'line 1'),
        ('dims 0:1 1:1\nd\n', 'line 2'),
        ('dims 0:1 1:1\nd 0\n1/0\n', 'line 3'),
        ('dims 0:2 1:1\nd 0\n1\n', 'line 3'),
        ('complex two\ndims 0:1\n', 'line 1'),
    ])
    def test_complex(self, text, where):
        with pytest.raises(DomainError) as e:
            read_complex(text)
        assert where in str(e.value)
