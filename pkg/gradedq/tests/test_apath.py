import numpy as np
import pytest
from scipy.linalg import expm

from gradedq.apath import (APath, action_integrate, action_path, anchor_residual, concatenate,
                           constant_path, convergence_order, integrate, random_sl2_path,
                           random_so3_path, reparametrize, reparametrize_check, reverse,
                           so3_hat)
from gradedq.exceptions import CompositionError, DomainError, InconsistentPathError

X = so3_hat([0.5, -0.3, 0.2])


@pytest.fixture
def rng():
    return np.random.default_rng(0)


class TestAPath:

    def test_times_span_unit_interval(self):
        with pytest.raises(DomainError):
            APath([0.0, 0.5], [X, X])

    def test_square_values(self):
        with pytest.raises(DomainError):
            APath([0.0, 1.0], np.zeros((2, 2, 3)))

    def test_linear_interpolation(self):
        p = APath([0.0, 1.0], [np.zeros((3, 3)), X])
        assert np.allclose(p.at(0.25), 0.25 * X)

    def test_reverse_twice(self):
        p = APath([0.0, 0.3, 1.0], [X, 2 * X, -X])
        back = reverse(reverse(p))
        assert np.allclose(back.times, p.times)
        assert np.allclose(back.values, p.values)


class TestHolonomy:

    def test_constant_path(self):
        g = integrate(constant_path(X), 1000).holonomy
        assert np.allclose(g, expm(X), atol=1e-10)

    def test_so3_stays_in_group(self, rng):
        G = integrate(random_so3_path(rng), 2000)
        assert G.in_group(orthogonal=True)

    def test_sl2_determinant(self, rng):
        G = integrate(random_sl2_path(rng), 2000)
        assert G.determinant_residual() < 1e-9

    def test_path_and_reverse_cancel(self, rng):
        p = random_so3_path(rng)
        g = integrate(concatenate(p, reverse(p)), 2000).holonomy
        assert np.abs(g - np.eye(3)).max() < 1e-9

    def test_concatenation_multiplies(self, rng):
        p, q = random_so3_path(rng), random_so3_path(rng)
        gp = integrate(p, 2000).holonomy
        gq = integrate(q, 2000).holonomy
        gpq = integrate(concatenate(p, q), 2000).holonomy
        assert np.abs(gpq - gp @ gq).max() < 1e-9

    def test_sl2_concatenation_multiplies(self, rng):
        for _ in range(5):
            p, q = random_sl2_path(rng), random_sl2_path(rng)
            gp = integrate(p, 2000).holonomy
            gq = integrate(q, 2000).holonomy
            gpq = integrate(concatenate(p, q), 2000).holonomy
            assert np.abs(gpq - gp @ gq).max() < 1e-9

    @pytest.mark.parametrize('sample, orthogonal, doublings', [(random_so3_path, True, 4),
                                                               (random_sl2_path, False, 2)])
    def test_long_integration_stays_in_group(self, rng, sample, orthogonal, doublings):
        p = sample(rng)
        long = p
        for _ in range(doublings):
            long = concatenate(long, long)
        copies = 2 ** doublings
        G = integrate(long, copies * 2000)
        assert G.in_group(orthogonal=orthogonal)
        g = integrate(p, 2000).holonomy
        assert np.allclose(G.holonomy, np.linalg.matrix_power(g, copies), rtol=1e-9, atol=1e-9)

    def test_reparametrization_invariance(self):
        s = np.linspace(0.0, 1.0, 2001)
        residual = reparametrize_check(constant_path(X), s, s * s, 2000)
        assert residual < 1e-6

    def test_reparametrization_must_fix_endpoints(self):
        s = np.linspace(0.0, 1.0, 5)
        with pytest.raises(DomainError):
            reparametrize(constant_path(X), s, s * 0.5)

    def test_fourth_order(self):
        assert abs(convergence_order(constant_path(X)) - 4.0) < 0.3


class TestActionPaths:

    def test_transport_matches_holonomy(self):
        N = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
        p = action_path(N, [1.0, 0.0, 0.0])
        assert anchor_residual(p) < 1e-3
        G = action_integrate(p, steps=1000)
        assert np.allclose(G.target, [1.0, 1.0, 0.5])
        assert np.allclose(G.transported, G.target, atol=1e-12)

    def test_inconsistent_base(self):
        N = np.array([[0.0, 1.0], [0.0, 0.0]])
        p = APath([0.0, 0.5, 1.0], [N, N, N], [[1.0, 0.0], [1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(InconsistentPathError) as e:
            action_integrate(p)
        assert e.value.residual == pytest.approx(1.0)

    def test_composition_needs_matching_ends(self):
        N = np.array([[0.0, 1.0], [0.0, 0.0]])
        p = action_path(N, [1.0, 0.0], samples=11)
        q = action_path(N, [2.0, 0.0], samples=11)
        with pytest.raises(CompositionError):
            concatenate(p, q)

    def test_composition(self):
        N = np.array([[0.0, 1.0], [0.0, 0.0]])
        p = action_path(N, [1.0, 0.0], samples=11)
        q = action_path(N, [1.0, 1.0], samples=11)
        G = action_integrate(concatenate(p, q), steps=1000)
        assert np.allclose(G.target, [1.0, 2.0])
