import pytest

from gradedq.complexes import (GradedComplex, SymplecticComplex, boundary_lagrangian, closed,
                               cohomology_pairing, double, homotopy_type_check,
                               lemma3_orthogonality, nmap_space, omega_degree, tensor)
from gradedq.exceptions import PreconditionError, StructureError
from gradedq.sigma import courant_chart, poisson_chart


@pytest.fixture
def circle():
    # one vertex, one edge
    return GradedComplex({0: 1, 1: 1})


@pytest.fixture
def segment():
    # two vertices joined by an edge
    return GradedComplex({0: 2, 1: 1}, {0: [[-1, 1]]})


class TestGradedComplex:

    def test_acyclic(self):
        assert GradedComplex({0: 1, 1: 1}, {0: [[1]]}).betti() == {0: 0, 1: 0}

    def test_differential_must_square_to_zero(self):
        with pytest.raises(StructureError):
            GradedComplex({0: 1, 1: 1, 2: 1}, {0: [[1]], 1: [[1]]})

    def test_segment(self, segment):
        assert segment.betti() == {0: 1, 1: 0}
        assert segment.euler_characteristic() == 1

    def test_shift(self, segment):
        shifted = segment.shift(3)
        assert shifted.dims == {3: 2, 4: 1}
        assert shifted.betti() == {3: 1, 4: 0}
        assert shifted.d(3) == -segment.d(0)

    def test_tensor_follows_kunneth(self, circle, segment):
        assert tensor(circle, circle).betti() == {0: 1, 1: 2, 2: 1}
        assert tensor(segment, circle).betti() == {0: 1, 1: 1, 2: 0}

    def test_tensor_differential_squares_to_zero(self, segment):
        T = tensor(segment, segment)
        for k in T.degrees:
            assert not any(T.d(k + 1) * T.d(k))


class TestPairings:

    def test_incompatible_pairing(self):
        C = GradedComplex({0: 1, 1: 1}, {0: [[1]]})
        with pytest.raises(StructureError):
            SymplecticComplex(C, {0: [[1]], 1: [[1]]}, 1)

    def test_compatible_pairing(self):
        C = GradedComplex({0: 1, 1: 1}, {0: [[1]]})
        S = SymplecticComplex(C, {0: [[1]], 1: [[-1]]}, 1)
        assert S.is_compatible()
        assert S.is_nondegenerate()

    @pytest.mark.parametrize('n', [1, 2, 3])
    def test_double(self, segment, n):
        D = double(segment, n)
        assert D.is_nondegenerate()
        induced = cohomology_pairing(D)
        assert induced.nondegenerate
        assert sum(induced.dims.values()) == 2

    def test_double_of_circle(self, circle):
        induced = cohomology_pairing(double(circle, 1))
        assert induced.dims == {0: 2, 1: 2}
        assert induced.nondegenerate


class TestRelative:

    @pytest.mark.parametrize('n', [1, 2])
    def test_closed_double_passes(self, segment, circle, n):
        for C in (segment, circle):
            R = closed(double(C, n))
            assert R.stokes_failure() is None
            assert lemma3_orthogonality(R).verdict == 'pass'

    def test_closed_has_no_boundary(self, circle):
        R = closed(double(circle, 1))
        res = boundary_lagrangian(R)
        assert (res.image_dim, res.boundary_dim) == (0, 0)
        assert res.lagrangian


class TestMisc:

    def test_homotopy_type(self, segment):
        assert homotopy_type_check(segment, 1)
        with pytest.raises(PreconditionError):
            homotopy_type_check(segment.shift(-2), 2)

    def test_omega_degree(self):
        assert omega_degree(2, 1) == 1
        assert omega_degree(3, 3) == 0


class TestNMaps:

    @pytest.mark.parametrize('m', [1, 2, 3])
    def test_cotangent_target(self, m):
        space = nmap_space(poisson_chart(m), 1)
        assert space.total_dim == 2 * m
        assert space.is_nondegenerate()

    def test_courant_target(self):
        space = nmap_space(courant_chart(2), 2)
        # x: 1, p: 1, theta: 2, chi: 2, for each of two pairs
        assert space.total_dim == 12
        assert space.dims['theta1'] == 2
        assert space.is_nondegenerate()

    def test_weights_above_source_dimension(self):
        space = nmap_space(courant_chart(1), 1)
        assert space.dims == {'x1': 1, 'p1': 0, 'theta1': 1, 'chi1': 1}
        assert not space.is_nondegenerate()

