from fractions import Fraction

import pytest

from gradedq.exceptions import DomainError, PreconditionError, UnsupportedInputError
from gradedq.nq import is_nq, q_square
from gradedq.sigma import (AlgebroidData, DarbouxChart, algebroid_to_q, courant_chart,
                           courant_hamiltonian, derived_bracket, dorfman_oracle,
                           hamiltonian_to_q, lambda_check, lambda_failure, master_equation,
                           poisson_bracket, poisson_chart, poisson_hamiltonian, q_to_algebroid,
                           q_to_hamiltonian, schouten_jacobi, section, split_section)


@pytest.fixture
def lie_poisson():
    S = poisson_chart(3)
    x1, x2, x3 = S.chart.gens('x1', 'x2', 'x3')
    zero = S.chart.zero()
    pi = [[zero, x3, -x2], [-x3, zero, x1], [x2, -x1, zero]]
    return S, pi


class TestDarbouxChart:

    def test_weights_bounded_by_degree(self):
        with pytest.raises(DomainError):
            DarbouxChart(1, [(('x', 0), ('p', 2))])

    def test_pair_weights_add_up(self):
        with pytest.raises(DomainError):
            DarbouxChart(2, [(('x', 0), ('p', 1))])

    def test_partner(self):
        S = courant_chart(2)
        assert S.partner('theta2') == 'chi2'
        assert S.partner('p1') == 'x1'


class TestBracket:

    def test_canonical_pairs(self):
        P = poisson_chart(1)
        x1, p1 = P.chart.gens()
        assert poisson_bracket(P, x1, p1) == 1
        assert poisson_bracket(P, p1, x1) == -1
        S = courant_chart(1)
        x1, p1, theta1, chi1 = S.chart.gens()
        assert poisson_bracket(S, p1, x1) == 1
        assert poisson_bracket(S, x1, p1) == -1
        assert poisson_bracket(S, theta1, chi1) == 1
        assert poisson_bracket(S, chi1, theta1) == 1
        assert poisson_bracket(S, x1, theta1).is_zero()

    def test_coefficient_scales_pair(self):
        S = DarbouxChart(1, [(('x', 0), ('p', 1))], [2])
        x, p = S.chart.gens()
        assert poisson_bracket(S, x, p) == Fraction(1, 2)

    def test_courant_q_is_de_rham(self):
        S = courant_chart(2)
        Q = hamiltonian_to_q(S, courant_hamiltonian(S))
        for a in (1, 2):
            assert Q['x%d' % a] == S.chart.gen('theta%d' % a)

    def test_unit_pairs_flip_the_courant_differential(self):
        S = DarbouxChart(2, [(('x1', 0), ('p1', 2)), (('theta1', 1), ('chi1', 1))])
        Q = hamiltonian_to_q(S, S.chart.gen('theta1') * S.chart.gen('p1'))
        assert Q['x1'] == -S.chart.gen('theta1')

    def test_lowers_weight_by_degree(self):
        S = courant_chart(2)
        x1, x2, p1, p2, theta1, theta2, chi1, chi2 = [S.chart.gen(n) for n in (
            'x1', 'x2', 'p1', 'p2', 'theta1', 'theta2', 'chi1', 'chi2')]
        f = x2 * theta1 * p2
        g = chi1 * x1
        assert poisson_bracket(S, f, g).weight == f.weight + g.weight - 2


class TestHamiltonians:

    def test_courant_master_equation(self):
        S = courant_chart(2)
        assert master_equation(S, courant_hamiltonian(S)).is_zero()
        assert is_nq(hamiltonian_to_q(S, courant_hamiltonian(S)))

    def test_closed_twist(self):
        S = courant_chart(4)
        theta = [S.chart.gen('theta%d' % a) for a in range(1, 5)]
        eta = theta[0] * theta[1] * theta[2]
        assert master_equation(S, courant_hamiltonian(S, eta)).is_zero()

    def test_twist_that_is_not_closed(self):
        S = courant_chart(4)
        theta = [S.chart.gen('theta%d' % a) for a in range(1, 5)]
        eta = S.chart.gen('x1') * theta[1] * theta[2] * theta[3]
        value = master_equation(S, courant_hamiltonian(S, eta))
        assert not value.is_zero()
        assert not q_square(hamiltonian_to_q(S, courant_hamiltonian(S, eta))).is_zero()

    def test_wrong_weight(self):
        S = poisson_chart(2)
        with pytest.raises(PreconditionError):
            hamiltonian_to_q(S, S.chart.gen('p1'))

    def test_q_to_hamiltonian_inverts(self):
        S = courant_chart(2)
        theta = courant_hamiltonian(S)
        assert q_to_hamiltonian(S, hamiltonian_to_q(S, theta)) == theta

    def test_q_to_hamiltonian_inverts_on_poisson_charts(self, lie_poisson):
        S, pi = lie_poisson
        theta = poisson_hamiltonian(S, pi)
        assert q_to_hamiltonian(S, hamiltonian_to_q(S, theta)) == theta


class TestPoisson:

    def test_derived_bracket_recovers_bivector(self, lie_poisson):
        S, pi = lie_poisson
        theta = poisson_hamiltonian(S, pi)
        names = ['x1', 'x2', 'x3']
        for a, xa in enumerate(names):
            for b, xb in enumerate(names):
                got = derived_bracket(S, theta, S.chart.gen(xa), S.chart.gen(xb))
                assert got == pi[a][b]

    def test_lie_poisson_is_poisson(self, lie_poisson):
        S, pi = lie_poisson
        assert master_equation(S, poisson_hamiltonian(S, pi)).is_zero()
        assert not schouten_jacobi(pi, ['x1', 'x2', 'x3'])

    def test_bivector_failing_jacobi(self):
        S = poisson_chart(3)
        x2 = S.chart.gen('x2')
        zero, one = S.chart.zero(), S.chart.one()
        pi = [[zero, one, zero], [-one, zero, x2], [zero, -x2, zero]]
        assert schouten_jacobi(pi, ['x1', 'x2', 'x3'])
        assert not master_equation(S, poisson_hamiltonian(S, pi)).is_zero()


class TestDorfman:

    def test_derived_bracket_is_dorfman(self):
        S = courant_chart(2)
        x1, x2 = S.chart.gens('x1', 'x2')
        zero = S.chart.zero()
        X, xi = [x2, zero], [zero, x1 * x1]
        Y, zeta = [S.chart.one(), x1], [x2, x1 * x2]
        got = split_section(S, derived_bracket(S, courant_hamiltonian(S), section(S, X, xi),
                                               section(S, Y, zeta)))
        want = dorfman_oracle(['x1', 'x2'], X, xi, Y, zeta)
        assert [list(part) for part in got] == [list(part) for part in want]


class TestLagrangian:

    def test_coordinate_constraints(self):
        S = poisson_chart(2)
        Q = hamiltonian_to_q(S, S.chart.zero())
        assert lambda_check(S, Q, ['x2', 'p1'])
        assert 'has 2 constrained members' in lambda_failure(S, Q, ['x1', 'p1'])
        assert lambda_check(S, Q, ['x1', 'x2'])

    def test_tangent_and_cotangent_bundles_are_dirac(self):
        S = courant_chart(2)
        Q = hamiltonian_to_q(S, courant_hamiltonian(S))
        assert lambda_check(S, Q, ['p1', 'p2', 'theta1', 'theta2'])
        assert lambda_check(S, Q, ['p1', 'p2', 'chi1', 'chi2'])
        assert 'leaves the constraint ideal' in lambda_failure(S, Q, ['x1', 'x2', 'chi1', 'chi2'])

    def test_only_coordinates(self):
        S = poisson_chart(1)
        x1, p1 = S.chart.gens()
        with pytest.raises(UnsupportedInputError):
            lambda_check(S, hamiltonian_to_q(S, S.chart.zero()), [x1 + p1])


class TestAlgebroids:

    def test_rotation_algebroid(self):
        chart = AlgebroidData(['x', 'y'], ['e']).chart
        x, y = chart.gens('x', 'y')
        A = AlgebroidData(['x', 'y'], ['e'], anchor={('e', 'x'): -y, ('e', 'y'): x})
        Q = algebroid_to_q(A)
        assert is_nq(Q)
        assert q_to_algebroid(Q) == A

    def test_structure_functions_antisymmetric(self):
        with pytest.raises(DomainError):
            AlgebroidData(['x'], ['e', 'f'], structure={('e', 'e', 'f'): 1, ('e', 'f', 'e'): 1})

    def test_functions_of_the_base_only(self):
        A = AlgebroidData(['x'], ['e'])
        with pytest.raises(DomainError):
            AlgebroidData(['x'], ['e'], anchor={('e', 'x'): A.chart.gen('e')})
