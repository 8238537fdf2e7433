import pytest

from gradedq.complexes import boundary_lagrangian, cohomology_pairing, lemma3_orthogonality
from gradedq.exceptions import PreconditionError
from gradedq.extensions import so3
from gradedq.lattice import (Fiber, circle, cochain_complex, cube, cylinder, disk, interval,
                             lattice_model, relative_cochains, suspension_check, torus)


class TestManifolds:

    def test_torus(self):
        M = torus(3, 3)
        assert [M.complex.size(k) for k in range(3)] == [9, 27, 18]
        assert M.euler_characteristic() == 0
        assert M.boundary is None

    @pytest.mark.parametrize('make, betti', [
        (lambda: circle(3), {0: 1, 1: 1}),
        (lambda: interval(4), {0: 1, 1: 0}),
        (lambda: disk(2), {0: 1, 1: 0, 2: 0}),
        (lambda: cylinder(3, 1), {0: 1, 1: 1, 2: 0}),
        (lambda: torus(3, 4), {0: 1, 1: 2, 2: 1}),
    ])
    def test_betti_numbers(self, make, betti):
        assert cochain_complex(make().complex).betti() == betti

    def test_fundamental_chain_is_a_cycle_on_closed_surfaces(self):
        assert not torus(3, 3).boundary_cycle
        assert cylinder(3, 1).boundary is not None

    def test_too_few_cells(self):
        with pytest.raises(PreconditionError):
            torus(2, 3)

    @pytest.mark.parametrize('n', [1, 2, 3])
    def test_relative_cochains_of_a_ball(self, n):
        betti = relative_cochains(cube(n, 1)).betti()
        assert betti[n] == 1
        assert sum(betti.values()) == 1


class TestSuspension:

    @pytest.mark.parametrize('n', [1, 2, 3])
    def test_circle(self, n):
        ok, shifted, expected = suspension_check(cochain_complex(circle(3).complex), n)
        assert ok
        assert expected == {n: 1, n + 1: 1}

    def test_degree(self):
        with pytest.raises(PreconditionError):
            suspension_check(cochain_complex(circle(3).complex), 0)


class TestLatticeModels:

    def test_torus_with_so3(self):
        R = lattice_model(torus(3, 3), so3())
        assert R.is_closed()
        assert R.stokes_failure() is None
        induced = cohomology_pairing(R.total)
        assert [induced.dims[k] for k in sorted(induced.dims)] == [3, 6, 3]
        assert induced.nondegenerate

    def test_scalar_torus_passes_with_degenerate_chains(self):
        R = lattice_model(torus(3, 3), Fiber.scalar())
        res = lemma3_orthogonality(R)
        assert res.verdict == 'degraded-mode'
        assert res.quotient_nondegenerate
        assert not res.chain_nondegenerate

    def test_cylinder_boundary_is_lagrangian(self):
        R = lattice_model(cylinder(3, 1), so3())
        assert R.stokes_failure() is None
        res = boundary_lagrangian(R)
        assert (res.image_dim, res.boundary_dim) == (6, 12)
        assert res.isotropic
        assert res.lagrangian

    def test_interval_with_pair_fiber(self):
        R = lattice_model(interval(4), Fiber.symplectic_pair(1))
        assert not R.is_closed()
        assert R.stokes_failure() is None
        assert lemma3_orthogonality(R).verdict == 'degraded-mode'

    def test_pair_fiber_degree(self):
        with pytest.raises(PreconditionError):
            Fiber.symplectic_pair(0)
