"""
Symplectic N-manifolds of degree n in Darboux charts.

Sign conventions, fixed once:

* the bracket has degree -n and ``{q_i, p_i} = 1 / c_i`` for every conjugate
  pair listed as ``(q, p)`` with coefficient ``c_i``, so ``{q, p} = 1`` on a
  chart with unit coefficients;
* a Hamiltonian gives ``Q = {Theta, .}``;
* the derived bracket of two functions is ``{{Theta, e1}, e2}``.

With these choices the derived bracket of ``poisson_hamiltonian(pi)`` on base
coordinates is ``pi^{ab}``.  ``courant_chart`` gives its even pairs the
coefficient -1, i.e. ``{p_a, x_a} = 1``; then ``theta^a p_a`` generates the de
Rham differential and its derived bracket is the Dorfman bracket.

    >>> P = poisson_chart(1)
    >>> print(poisson_bracket(P, *P.chart.gens()))
    1
    >>> S = courant_chart(1)
    >>> x1, p1, theta1, chi1 = S.chart.gens()
    >>> print(poisson_bracket(S, theta1, chi1))
    1
    >>> Q = hamiltonian_to_q(S, theta1 * p1)
    >>> print(Q['x1'])
    theta1
"""
import logging
from fractions import Fraction

from gradedq.algebra import Chart, GPoly, GVar, _right_derivative, exact, left_derivative
from gradedq.exceptions import (DomainError, PreconditionError, StructureError,
                                UnsupportedInputError)
from gradedq.nq import Derivation, apply

logger = logging.getLogger(__name__)


class DarbouxChart:
    """Degree-n symplectic chart built from conjugate pairs.

    ``pairs`` is a sequence of ``((q, k), (p, n - k))``; every weight must lie
    in ``[0, n]``, which is how ``deg X <= n`` holds for Sigma_n charts.
    ``coefficients`` scales each pair of ``omega = sum c_i dp_i dq_i``.
    """

    def __init__(self, n, pairs, coefficients=None):
        if n < 0:
            raise DomainError('symplectic degree must be non-negative, got %d' % n)
        self.n = n
        qp = []
        for (q, k), (p, w) in pairs:
            for name, weight in ((q, k), (p, w)):
                if not 0 <= weight <= n:
                    raise DomainError('weight %d of %s outside [0, %d]' % (weight, name, n))
            if k + w != n:
                raise DomainError('pair (%s, %s) has weights %d + %d != %d' % (q, p, k, w, n))
            qp.append((GVar(q, k), GVar(p, w)))
        self.pairs = tuple(qp)
        self.coefficients = tuple(exact(c) for c in (coefficients or [1] * len(qp)))
        if len(self.coefficients) != len(self.pairs) or not all(self.coefficients):
            raise DomainError('one nonzero coefficient per pair is required')
        self.chart = Chart([v for pair in qp for v in pair])

    def __repr__(self):
        return 'DarbouxChart(n=%d, %s)' % (self.n, '; '.join(
            '(%s, %s)' % (q, p) for q, p in self.pairs))

    def __eq__(self, other):
        return (isinstance(other, DarbouxChart) and self.n == other.n
                and self.pairs == other.pairs and self.coefficients == other.coefficients)

    def __hash__(self):
        return hash((self.n, self.pairs))

    def sign(self, i):
        q, p = self.pairs[i]
        return -1 if (q.weight * p.weight) % 2 else 1

    def partner(self, name):
        for q, p in self.pairs:
            if q.name == name:
                return p.name
            if p.name == name:
                return q.name
        raise DomainError('%s is not a Darboux coordinate' % name)


def poisson_bracket(chart, f, g):
    """Graded Poisson bracket of degree ``-n``."""
    if f.chart != chart.chart or g.chart != chart.chart:
        raise DomainError('bracket arguments must live on the Darboux chart')
    result = chart.chart.zero()
    for i, (q, p) in enumerate(chart.pairs):
        c = 1 / chart.coefficients[i]
        fq = _right_derivative(f, q.name)
        if fq:
            result = result + fq * left_derivative(g, p.name) * c
        fp = _right_derivative(f, p.name)
        if fp:
            result = result - fp * left_derivative(g, q.name) * (c * chart.sign(i))
    return result


def hamiltonian_vector_field(chart, f):
    """``{f, .}`` as a derivation of degree ``weight(f) - n``."""
    w = f.weight
    if w is None:
        raise PreconditionError('Hamiltonian must be weight-homogeneous: %s' % f)
    comps = {}
    for i, (q, p) in enumerate(chart.pairs):
        c = 1 / chart.coefficients[i]
        comps[p.name] = _right_derivative(f, q.name) * c
        comps[q.name] = -_right_derivative(f, p.name) * (c * chart.sign(i))
    return Derivation(chart.chart, w - chart.n, comps, check=False)


def hamiltonian_to_q(chart, theta):
    if not theta.is_homogeneous(chart.n + 1):
        raise PreconditionError('Hamiltonian must have weight %d, got %s' % (chart.n + 1, theta))
    Q = hamiltonian_vector_field(chart, theta)
    Q.degree = 1
    return Q


def q_to_hamiltonian(chart, Q):
    """Recover the weight n+1 Hamiltonian of a symplectic degree-1 field.

    The candidate comes from the weighted Euler identity
    ``(n+1) Theta = sum_v weight(v) (Theta d<-_v) v``; it is accepted only
    if its Hamiltonian field is ``Q`` again, which on a Darboux chart is the
    same as ``L_Q omega = 0``.
    """
    if chart.n < 1:
        raise PreconditionError('Hamiltonians need n >= 1')
    if Q.chart != chart.chart:
        raise DomainError('Q lives on another chart')
    if Q.degree != 1 and not Q.is_zero():
        raise PreconditionError('Q must have degree 1')
    theta = chart.chart.zero()
    for i, (q, p) in enumerate(chart.pairs):
        c = chart.coefficients[i]
        by_q = Q[p.name] * c
        by_p = -Q[q.name] * (c * chart.sign(i))
        theta = theta + by_q * chart.chart.gen(q.name) * q.weight
        theta = theta + by_p * chart.chart.gen(p.name) * p.weight
    theta = theta * Fraction(1, chart.n + 1)
    back = hamiltonian_vector_field(chart, theta)
    diff = dict((v.name, back[v.name] - Q[v.name]) for v in chart.chart.vars
                if back[v.name] != Q[v.name])
    if diff:
        raise StructureError('Q does not preserve the symplectic form', witness=diff)
    return theta


def master_equation(chart, theta):
    """``{Theta, Theta}``; zero exactly when ``{Theta, .}`` squares to zero."""
    if not theta.is_homogeneous(chart.n + 1):
        raise PreconditionError('Hamiltonian must have weight %d' % (chart.n + 1))
    return poisson_bracket(chart, theta, theta)


def derived_bracket(chart, theta, e1, e2):
    for e in (e1, e2):
        if e.weight is None:
            raise PreconditionError('derived bracket needs homogeneous arguments: %s' % e)
    return poisson_bracket(chart, poisson_bracket(chart, theta, e1), e2)


def lambda_failure(chart, Q, constraints):
    """Reason the coordinate locus ``constraints = 0`` is not a Lambda-structure, or None."""
    names = []
    for c in constraints:
        if isinstance(c, GPoly):
            vs = c.variables()
            if len(c.terms) != 1 or len(vs) != 1 or c != c.chart.gen(vs[0].name):
                raise UnsupportedInputError('only coordinate constraints are supported: %s' % c)
            c = vs[0].name
        if c not in chart.chart:
            raise UnsupportedInputError('%s is not a Darboux coordinate' % c)
        names.append(c)
    chosen = set(names)
    for q, p in chart.pairs:
        hits = (q.name in chosen) + (p.name in chosen)
        if hits != 1:
            return 'pair (%s, %s) has %d constrained members' % (q.name, p.name, hits)
    positions = [chart.chart.index(n) for n in chosen]
    for name in sorted(chosen):
        image = Q[name]
        for key in image.terms:
            if not any(key[i] for i in positions):
                return 'Q(%s) = %s leaves the constraint ideal' % (name, image)
    return None


def lambda_check(chart, Q, constraints):
    """Lagrangian and Q-invariant coordinate submanifold?

        >>> S = poisson_chart(2)
        >>> Q = hamiltonian_to_q(S, S.chart.zero())
        >>> lambda_check(S, Q, ['x2', 'p1'])
        True
        >>> lambda_check(S, Q, ['x1', 'p1'])
        False
    """
    return lambda_failure(chart, Q, constraints) is None


# standard charts and Hamiltonians

def poisson_chart(m):
    """T*[1]R^m with pairs (x_a, p_a)."""
    return DarbouxChart(1, [(('x%d' % a, 0), ('p%d' % a, 1)) for a in range(1, m + 1)])


def courant_chart(m):
    """T*[2]T[1]R^m with pairs (x_a, p_a) then (theta^a, chi_a).

    The (x_a, p_a) pairs carry the coefficient -1, so ``{p_a, x_a} = 1``.
    """
    return DarbouxChart(2, [(('x%d' % a, 0), ('p%d' % a, 2)) for a in range(1, m + 1)]
                        + [(('theta%d' % a, 1), ('chi%d' % a, 1)) for a in range(1, m + 1)],
                        [-1] * m + [1] * m)


def base_names(chart):
    return [q.name for q, p in chart.pairs if q.weight == 0 and p.weight == chart.n]


def poisson_hamiltonian(chart, pi):
    """``1/2 pi^{ab} p_b p_a`` for a bivector given as a matrix of polynomials."""
    m = len(pi)
    p = chart.chart.gens(*['p%d' % a for a in range(1, m + 1)])
    theta = chart.chart.zero()
    for a in range(m):
        for b in range(m):
            entry = pi[a][b]
            if not isinstance(entry, GPoly):
                entry = chart.chart.const(entry)
            if entry:
                theta = theta + entry * p[b] * p[a] * Fraction(1, 2)
    return theta


def courant_hamiltonian(chart, eta=None):
    """``theta^a p_a`` plus an optional weight-3 twist in the thetas."""
    m = len(base_names(chart))
    theta = chart.chart.zero()
    for a in range(1, m + 1):
        theta = theta + chart.chart.gen('theta%d' % a) * chart.chart.gen('p%d' % a)
    if eta is not None:
        theta = theta + eta
    return theta


def section(chart, vector, form):
    """Weight-1 function ``X^a chi_a + xi_a theta^a``."""
    e = chart.chart.zero()
    for a, (X, xi) in enumerate(zip(vector, form), 1):
        e = e + chart.chart.gen('chi%d' % a) * X + chart.chart.gen('theta%d' % a) * xi
    return e


def split_section(chart, e):
    m = len(base_names(chart))
    vector = [left_derivative(e, 'chi%d' % a) for a in range(1, m + 1)]
    form = [left_derivative(e, 'theta%d' % a) for a in range(1, m + 1)]
    return vector, form


# independent oracles

def _partial(f, name):
    # ordinary partial derivative in an even coordinate
    return left_derivative(f, name)


def schouten_jacobi(pi, names):
    """Cyclic sums ``pi^{as} d_s pi^{bc} + ...``; all zero iff pi is Poisson."""
    m = len(names)
    defects = {}
    for a in range(m):
        for b in range(m):
            for c in range(m):
                total = None
                for (i, j, k) in ((a, b, c), (b, c, a), (c, a, b)):
                    for s in range(m):
                        term = pi[i][s] * _partial(pi[j][k], names[s])
                        total = term if total is None else total + term
                if total:
                    defects[(a, b, c)] = total
    return defects


def dorfman_oracle(names, X, xi, Y, zeta):
    """``[X + xi, Y + zeta] = [X, Y] + L_X zeta - i_Y d xi`` on polynomial data."""
    m = len(names)
    vector = []
    form = []
    for a in range(m):
        v = X[a] * 0
        for b in range(m):
            v = v + X[b] * _partial(Y[a], names[b]) - Y[b] * _partial(X[a], names[b])
        vector.append(v)
        w = X[a] * 0
        for b in range(m):
            w = w + X[b] * _partial(zeta[a], names[b]) + zeta[b] * _partial(X[b], names[a])
            w = w - Y[b] * (_partial(xi[a], names[b]) - _partial(xi[b], names[a]))
        form.append(w)
    return vector, form


class AlgebroidData:
    """Anchor and structure functions of a Lie algebroid over a coordinate patch.

    ``anchor[(i, a)]`` is rho^a_i and ``structure[(k, i, j)]`` is c^k_ij, keyed
    by fiber and base names.  Missing entries are zero; c is completed by
    antisymmetry.
    """

    def __init__(self, base, fibers, anchor=None, structure=None):
        self.base = tuple(base)
        self.fibers = tuple(fibers)
        self.chart = Chart([(x, 0) for x in self.base] + [(e, 1) for e in self.fibers])
        self.anchor = {}
        for (i, a), value in (anchor or {}).items():
            self.anchor[(i, a)] = self._function(value)
        self.structure = {}
        for (k, i, j), value in (structure or {}).items():
            value = self._function(value)
            other = self.structure.get((k, j, i))
            if other is not None and other != -value:
                raise DomainError('structure functions not antisymmetric in (%s, %s)' % (i, j))
            if i == j and value:
                raise DomainError('c^%s_%s%s must vanish' % (k, i, i))
            self.structure[(k, i, j)] = value
            self.structure[(k, j, i)] = -value
        self.anchor = dict((k, v) for k, v in self.anchor.items() if v)
        self.structure = dict((k, v) for k, v in self.structure.items() if v)

    def _function(self, value):
        if not isinstance(value, GPoly):
            value = self.chart.const(value)
        if value.chart != self.chart:
            value = value.substitute({}, target=self.chart)
        if not value.depends_only_on(self.base) or not value.is_homogeneous(0):
            raise DomainError('anchor and structure functions depend on base coordinates only')
        return value

    def rho(self, i, a):
        return self.anchor.get((i, a), self.chart.zero())

    def c(self, k, i, j):
        return self.structure.get((k, i, j), self.chart.zero())

    def __eq__(self, other):
        return (isinstance(other, AlgebroidData) and self.base == other.base
                and self.fibers == other.fibers and self.anchor == other.anchor
                and self.structure == other.structure)

    def __repr__(self):
        return 'AlgebroidData(base=%s, fibers=%s)' % (self.base, self.fibers)


def algebroid_to_q(A):
    chart = A.chart
    comps = {}
    for a in A.base:
        comps[a] = sum((chart.gen(i) * A.rho(i, a) for i in A.fibers), chart.zero())
    for k in A.fibers:
        value = chart.zero()
        for i in A.fibers:
            for j in A.fibers:
                c = A.c(k, i, j)
                if c:
                    value = value + chart.gen(i) * chart.gen(j) * c * Fraction(-1, 2)
        comps[k] = value
    return Derivation(chart, 1, comps)


def q_to_algebroid(Q):
    chart = Q.chart
    if any(v.weight > 1 for v in chart.vars):
        raise PreconditionError('algebroids come from charts of degree <= 1')
    if Q.degree != 1:
        raise PreconditionError('Q must have degree 1')
    base = [v.name for v in chart.vars if v.weight == 0]
    fibers = [v.name for v in chart.vars if v.weight == 1]
    anchor = {}
    for a in base:
        for i in fibers:
            anchor[(i, a)] = left_derivative(Q[a], i)
    structure = {}
    for k in fibers:
        for n, i in enumerate(fibers):
            for j in fibers[n + 1:]:
                structure[(k, i, j)] = -left_derivative(left_derivative(Q[k], i), j)
    return AlgebroidData(base, fibers, anchor, structure)
