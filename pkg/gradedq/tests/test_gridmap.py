import numpy as np
import pytest

from gradedq.exceptions import DomainError
from gradedq.gridmap import (GridMap, associativity_defect, identity_grid, inverse, qexp, qinv,
                             qlog, qmul, smooth_grid)


class TestQuaternions:

    def test_exp_and_log(self):
        v = np.array([[0.1, -0.2, 0.3], [0.0, 0.0, 0.0]])
        assert np.allclose(qlog(qexp(v)), v, atol=1e-14)

    def test_inverse(self):
        q = qexp([0.3, 0.4, -0.5])
        assert np.allclose(qmul(q, qinv(q)), [1.0, 0.0, 0.0, 0.0], atol=1e-15)

    def test_product_is_not_commutative(self):
        i, j = [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]
        assert np.allclose(qmul(i, j), [0.0, 0.0, 0.0, 1.0])
        assert np.allclose(qmul(j, i), [0.0, 0.0, 0.0, -1.0])


class TestGridMap:

    def test_nodes_must_be_unit(self):
        f = np.zeros((2, 2, 4))
        f[..., 0] = 2.0
        with pytest.raises(DomainError):
            GridMap(f)

    def test_cell_shape(self):
        with pytest.raises(DomainError):
            GridMap(identity_grid(3, 3).f, np.zeros((3, 3)))

    def test_shapes_must_agree(self):
        with pytest.raises(DomainError):
            identity_grid(3, 3) * identity_grid(3, 4)

    def test_identity(self):
        W = smooth_grid(9, 0.5)
        same = W * identity_grid(9, 9)
        assert np.allclose(same.f, W.f, atol=1e-14)
        assert np.allclose(same.omega, 0.0)

    def test_left_inverse(self):
        W = smooth_grid(9, 0.5, 1.0)
        unit = inverse(W) * W
        assert np.allclose(unit.f, identity_grid(9, 9).f, atol=1e-12)
        assert np.abs(unit.omega).max() < 1e-12

    def test_associativity_defect_shrinks(self):
        coarse = associativity_defect(*[smooth_grid(9, 0.5, k) for k in range(3)])
        fine = associativity_defect(*[smooth_grid(33, 0.5, k) for k in range(3)])
        assert fine < coarse / 8.0
