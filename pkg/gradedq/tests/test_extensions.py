from fractions import Fraction

import numpy as np
import pytest

from gradedq.exceptions import DomainError, PreconditionError, StructureError
from gradedq.extensions import (QuadraticLieAlgebra, SymmetryPair, TwistData, abelian,
                                affine_cocycle_check, affine_cocycle_witness, cartan_3form,
                                cartan_closed, central_extension, contract,
                                derived_symmetry_bracket, find_nonskew_witness, gauge_change,
                                gauge_consistent, iota_square, jacobi_defects,
                                random_constants, sl2, so3, symmetry_bracket, twisted_q)
from gradedq.nq import q_square


class TestTwists:

    def test_closed_twist(self):
        T = TwistData(3, 2)
        xi1, xi2, xi3 = T.chart.gens('xi1', 'xi2', 'xi3')
        T.eta = T.chart.gen('x1') * xi1 * xi2 * xi3
        assert q_square(twisted_q(T)).is_zero()

    def test_twist_that_is_not_closed(self):
        T = TwistData(4, 2)
        xi2, xi3, xi4 = T.chart.gens('xi2', 'xi3', 'xi4')
        T.eta = T.chart.gen('x1') * xi2 * xi3 * xi4
        square = q_square(twisted_q(T))
        assert square['t'] == T.chart.gen('xi1') * xi2 * xi3 * xi4
        assert square['x1'].is_zero()

    def test_eta_weight(self):
        T = TwistData(2, 2)
        with pytest.raises(PreconditionError):
            T.eta = T.chart.gen('xi1')

    def test_eta_ignores_fiber(self):
        T = TwistData(2, 1)
        with pytest.raises(DomainError):
            T.eta = T.chart.gen('t') * T.chart.gen('xi1')

    def test_gauge_change(self):
        T = TwistData(3, 2)
        x2, xi1, xi3 = T.chart.gens('x2', 'xi1', 'xi3')
        alpha = x2 * xi1 * xi3
        changed = gauge_change(T, alpha)
        assert changed.eta == T.chart.gen('xi2') * xi1 * xi3
        assert gauge_consistent(T, alpha)

    def test_gauge_needs_n_form(self):
        T = TwistData(3, 2)
        with pytest.raises(PreconditionError):
            gauge_change(T, T.chart.gen('xi1'))


class TestQuadraticAlgebras:

    @pytest.mark.parametrize('make', [so3, sl2, lambda: abelian(2)])
    def test_builtin(self, make):
        g = make()
        assert not jacobi_defects(g.constants)
        assert cartan_closed(g)

    def test_so3_cartan_form(self):
        eta = cartan_3form(so3())
        assert str(eta) == 'xi1*xi2*xi3'

    def test_abelian_cartan_form_vanishes(self):
        assert cartan_3form(abelian(3)).is_zero()
        assert abelian(3).is_abelian()

    def test_degenerate_metric(self):
        with pytest.raises(StructureError):
            QuadraticLieAlgebra(so3().constants, [[1, 0, 0], [0, 1, 0], [0, 0, 0]])

    def test_metric_not_invariant(self):
        with pytest.raises(StructureError):
            QuadraticLieAlgebra(so3().constants, [[1, 0, 0], [0, 2, 0], [0, 0, 3]])

    def test_bracket_failing_jacobi(self):
        c = [[[Fraction(0)] * 3 for _ in range(3)] for _ in range(3)]
        c[1][1][2], c[1][2][1] = 1, -1
        c[2][2][0], c[2][0][2] = 1, -1
        assert jacobi_defects(c)
        with pytest.raises(StructureError):
            QuadraticLieAlgebra(c, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    @pytest.mark.parametrize('seed', range(5))
    def test_symmetric_random_constants(self, seed):
        rng = np.random.default_rng(seed)
        assert not jacobi_defects(random_constants(rng, symmetric=True))


class TestCentralExtension:

    @pytest.mark.parametrize('make', [so3, sl2])
    def test_differential_graded_lie_algebra(self, make):
        ext = central_extension(make())
        assert len(ext.basis) == 7
        assert not any(ext.verify().values())

    def test_bracket_of_shifted_elements(self):
        ext = central_extension(sl2())
        # <e, f> = 1 in the trace form
        assert ext.bracket(ext.unit(('s', 1)), ext.unit(('s', 2))) == {('c',): 1}

    def test_affine_cocycle(self):
        assert affine_cocycle_check(so3(), 4)
        assert affine_cocycle_check(sl2(), 3)

    def test_broken_cocycle(self):
        assert not affine_cocycle_check(so3(), 2, broken=True)
        assert affine_cocycle_witness(so3(), 2, broken=True) is not None

    def test_cutoff(self):
        with pytest.raises(PreconditionError):
            affine_cocycle_check(so3(), 0)


@pytest.fixture
def pairs():
    m, n = 2, 2
    chart = SymmetryPair(m, n, [0, 0], 0).chart
    x1, x2, xi1, xi2 = chart.gens('x1', 'x2', 'xi1', 'xi2')
    A = SymmetryPair(m, n, [x2, 0], x1 * xi1)
    B = SymmetryPair(m, n, [1, x1], xi2)
    C = SymmetryPair(m, n, [0, x2], x2 * xi1 + xi2)
    return A, B, C


class TestSymmetryPairs:

    def test_iota_square_is_contraction(self, pairs):
        for s in pairs:
            assert iota_square(s)['t'] == contract(s.v, s.alpha)

    def test_derived_bracket(self, pairs):
        for s1 in pairs:
            for s2 in pairs:
                assert derived_symmetry_bracket(s1, s2) == symmetry_bracket(s1, s2)

    def test_leibniz(self, pairs):
        a, b, c = pairs
        br = symmetry_bracket
        assert br(a, br(b, c)) == br(br(a, b), c) + br(b, br(a, c))

    def test_bracket_is_not_skew(self, pairs):
        A, B, _ = pairs
        assert not (symmetry_bracket(A, B) + symmetry_bracket(B, A)).is_zero()
        assert find_nonskew_witness() is not None

    def test_alpha_degree(self):
        chart = SymmetryPair(2, 2, [0, 0], 0).chart
        with pytest.raises(PreconditionError):
            SymmetryPair(2, 2, [0, 0], chart.gen('xi1') * chart.gen('xi2'))

    def test_vector_field_on_base(self):
        chart = SymmetryPair(2, 2, [0, 0], 0).chart
        with pytest.raises(DomainError):
            SymmetryPair(2, 2, [chart.gen('xi1'), 0], 0)
