"""
Twists, quadratic Lie algebras and symmetry pairs.

The local model of an R[n]-bundle over T[1]R^m is the chart
``x1..xm, xi1..xim, t`` with ``Q = xi^a d/dx^a + eta d/dt``:

    >>> T = TwistData(3, 2)
    >>> T.eta = T.chart.gen('xi1') * T.chart.gen('xi2') * T.chart.gen('xi3')
    >>> q_square(twisted_q(T)).is_zero()
    True
"""
import itertools
import logging
from fractions import Fraction

import sympy

from gradedq.algebra import GPoly, exact, left_derivative
from gradedq.exceptions import DomainError, PreconditionError, StructureError
from gradedq.nq import (Derivation, apply, base_chart, chevalley_eilenberg, commutator, conjugate,
                        d, odd_chart, q_square)

logger = logging.getLogger(__name__)


def twist_chart(m, n):
    return base_chart(m, extra=[('t', n)])


def _lift(value, chart):
    if not isinstance(value, GPoly):
        return chart.const(value)
    if value.chart != chart:
        return value.substitute({}, target=chart)
    return value


def _base_only(p, m):
    names = ['x%d' % a for a in range(1, m + 1)] + ['xi%d' % a for a in range(1, m + 1)]
    return p.depends_only_on(names)


class TwistData:
    """Trivialized R[n]-bundle over T[1]R^m with connection form eta."""

    def __init__(self, m, n, eta=None):
        if n < 1:
            raise DomainError('fiber degree must be positive')
        self.m = m
        self.n = n
        self.chart = twist_chart(m, n)
        self.eta = self.chart.zero() if eta is None else eta

    @property
    def eta(self):
        return self._eta

    @eta.setter
    def eta(self, value):
        value = _lift(value, self.chart)
        if not _base_only(value, self.m):
            raise DomainError('eta must not involve the fiber coordinate')
        if not value.is_homogeneous(self.n + 1):
            raise PreconditionError('eta must be an (n+1)-form, got %s' % value)
        self._eta = value

    def __repr__(self):
        return 'TwistData(m=%d, n=%d, eta=%s)' % (self.m, self.n, self.eta)


def twisted_q(T):
    comps = dict(('x%d' % a, T.chart.gen('xi%d' % a)) for a in range(1, T.m + 1))
    comps['t'] = T.eta
    return Derivation(T.chart, 1, comps)


def gauge_change(T, alpha):
    """Same bundle in the coordinate ``t + alpha``: eta becomes ``eta + d alpha``."""
    alpha = _lift(alpha, T.chart)
    if not _base_only(alpha, T.m) or not alpha.is_homogeneous(T.n):
        raise PreconditionError('alpha must be a base n-form, got %s' % alpha)
    return TwistData(T.m, T.n, T.eta + d(alpha, T.m))


def gauge_consistent(T, alpha):
    """Conjugating Q by ``t -> t + alpha`` gives the Q of the gauge-changed twist."""
    alpha = _lift(alpha, T.chart)
    return conjugate(twisted_q(T), 't', alpha) == twisted_q(gauge_change(T, alpha))


# quadratic Lie algebras

def jacobi_defects(constants):
    """Nonzero components of ``[[e_i, e_j], e_l] + cyclic``, keyed by (i, j, l, m)."""
    dim = len(constants)
    out = {}
    for i, j, l in itertools.product(range(dim), repeat=3):
        for m in range(dim):
            total = Fraction(0)
            for k in range(dim):
                total += (exact(constants[k][i][j]) * exact(constants[m][k][l])
                          + exact(constants[k][j][l]) * exact(constants[m][k][i])
                          + exact(constants[k][l][i]) * exact(constants[m][k][j]))
            if total:
                out[(i, j, l, m)] = total
    return out


class QuadraticLieAlgebra:
    """Lie algebra with an invariant nondegenerate symmetric form.

    ``constants[k][i][j]`` is c^k_ij of ``[e_i, e_j] = c^k_ij e_k``.
    """

    def __init__(self, constants, metric, name=None):
        self.dim = len(constants)
        self.constants = [[[exact(c) for c in row] for row in block] for block in constants]
        self.metric = [[exact(c) for c in row] for row in metric]
        self.name = name or 'g%d' % self.dim
        for k, i, j in itertools.product(range(self.dim), repeat=3):
            if self.constants[k][i][j] != -self.constants[k][j][i]:
                raise StructureError('structure constants not antisymmetric', witness=(k, i, j))
        defects = jacobi_defects(self.constants)
        if defects:
            raise StructureError('Jacobi identity fails', witness=sorted(defects)[0])
        if sympy.Matrix(self.metric) != sympy.Matrix(self.metric).T:
            raise StructureError('inner product is not symmetric')
        if sympy.Matrix(self.metric).det() == 0:
            raise StructureError('inner product is degenerate')
        for u, v, w in itertools.product(range(self.dim), repeat=3):
            if self.pair(self.bracket_basis(u, v), self.unit(w)) + \
                    self.pair(self.unit(v), self.bracket_basis(u, w)):
                raise StructureError('inner product is not invariant', witness=(u, v, w))

    def __repr__(self):
        return 'QuadraticLieAlgebra(%s)' % self.name

    def unit(self, i):
        return [Fraction(int(i == k)) for k in range(self.dim)]

    def bracket_basis(self, i, j):
        return [self.constants[k][i][j] for k in range(self.dim)]

    def bracket(self, u, v):
        return [sum((self.constants[k][i][j] * u[i] * v[j]
                     for i in range(self.dim) for j in range(self.dim)), Fraction(0))
                for k in range(self.dim)]

    def pair(self, u, v):
        return sum((self.metric[i][j] * u[i] * v[j]
                    for i in range(self.dim) for j in range(self.dim)), Fraction(0))

    def is_abelian(self):
        return not any(c for block in self.constants for row in block for c in row)


def so3():
    eps = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for i, j, k in itertools.permutations(range(3)):
        eps[k][i][j] = int(sympy.LeviCivita(i, j, k))
    return QuadraticLieAlgebra(eps, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], name='so3')


def sl2():
    # basis h, e, f with the trace form
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    h, e, f = range(3)
    c[e][h][e], c[e][e][h] = 2, -2
    c[f][h][f], c[f][f][h] = -2, 2
    c[h][e][f], c[h][f][e] = 1, -1
    return QuadraticLieAlgebra(c, [[2, 0, 0], [0, 0, 1], [0, 1, 0]], name='sl2')


def abelian(dim):
    zero = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    eye = [[int(i == j) for j in range(dim)] for i in range(dim)]
    return QuadraticLieAlgebra(zero, eye, name='abelian%d' % dim)


def bianchi_constants(matrix):
    """3-dim brackets ``[e_i, e_j] = eps_ijl N^{lk} e_k``; Jacobi depends on N."""
    c = [[[Fraction(0)] * 3 for _ in range(3)] for _ in range(3)]
    for i, j, l in itertools.permutations(range(3)):
        for k in range(3):
            c[k][i][j] += int(sympy.LeviCivita(i, j, l)) * exact(matrix[l][k])
    return c


def random_constants(rng, symmetric=None):
    """Structure constants of a random 3-dim algebra; symmetric N always satisfies Jacobi."""
    N = [[rng.choice([-1, 0, 1]) for _ in range(3)] for _ in range(3)]
    if symmetric is None:
        symmetric = rng.random() < 0.5
    if symmetric:
        N = [[N[min(i, j)][max(i, j)] for j in range(3)] for i in range(3)]
    return bianchi_constants(N)


def cartan_3form(g):
    """``1/6 <e_i, [e_j, e_k]> xi^i xi^j xi^k`` on the chart of g[1].

        >>> print(cartan_3form(so3()))
        xi1*xi2*xi3
    """
    chart = odd_chart(['xi%d' % a for a in range(1, g.dim + 1)])
    xi = chart.gens()
    eta = chart.zero()
    for i, j, k in itertools.product(range(g.dim), repeat=3):
        c = g.pair(g.unit(i), g.bracket_basis(j, k))
        if c:
            eta = eta + xi[i] * xi[j] * xi[k] * (c * Fraction(1, 6))
    return eta


def cartan_closed(g):
    eta = cartan_3form(g)
    _, Q = chevalley_eilenberg(g.constants, chart=eta.chart)
    return apply(Q, eta).is_zero()


class GradedLieAlgebra:
    """Finite graded Lie algebra with a degree +1 differential.

    Elements are dictionaries ``{label: Fraction}``; ``degrees`` maps each
    basis label to its degree.
    """

    def __init__(self, degrees, brackets, differential):
        self.degrees = dict(degrees)
        self.basis = list(degrees)
        self._brackets = brackets
        self._differential = differential

    def degree(self, x):
        degs = set(self.degrees[k] for k in x)
        if len(degs) > 1:
            raise PreconditionError('inhomogeneous element')
        return degs.pop() if degs else 0

    @staticmethod
    def _clean(x):
        return dict((k, v) for k, v in x.items() if v)

    def _add(self, x, y, scale=1):
        out = dict(x)
        for k, v in y.items():
            out[k] = out.get(k, 0) + scale * v
        return self._clean(out)

    def bracket(self, x, y):
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                out = self._add(out, self._brackets(a, b), ca * cb)
        return out

    def Q(self, x):
        out = {}
        for a, ca in x.items():
            out = self._add(out, self._differential(a), ca)
        return out

    def unit(self, label):
        return {label: Fraction(1)}

    def jacobi_failures(self):
        bad = []
        for a, b, c in itertools.product(self.basis, repeat=3):
            x, y, z = self.unit(a), self.unit(b), self.unit(c)
            sign = -1 if (self.degrees[a] * self.degrees[b]) % 2 else 1
            lhs = self.bracket(x, self.bracket(y, z))
            rhs = self._add(self.bracket(self.bracket(x, y), z),
                            self.bracket(y, self.bracket(x, z)), sign)
            if lhs != rhs:
                bad.append((a, b, c))
        return bad

    def antisymmetry_failures(self):
        bad = []
        for a, b in itertools.product(self.basis, repeat=2):
            sign = 1 if (self.degrees[a] * self.degrees[b]) % 2 else -1
            ab = self.bracket(self.unit(a), self.unit(b))
            ba = self.bracket(self.unit(b), self.unit(a))
            if ab != self._clean(dict((k, sign * v) for k, v in ba.items())):
                bad.append((a, b))
        return bad

    def derivation_failures(self):
        bad = []
        for a, b in itertools.product(self.basis, repeat=2):
            x, y = self.unit(a), self.unit(b)
            sign = -1 if self.degrees[a] % 2 else 1
            lhs = self.Q(self.bracket(x, y))
            rhs = self._add(self.bracket(self.Q(x), y), self.bracket(x, self.Q(y)), sign)
            if lhs != rhs:
                bad.append((a, b))
        return bad

    def q_square_failures(self):
        return [a for a in self.basis if self.Q(self.Q(self.unit(a)))]

    def verify(self):
        return {
            'antisymmetry': self.antisymmetry_failures(),
            'jacobi': self.jacobi_failures(),
            'derivation': self.derivation_failures(),
            'q_square': self.q_square_failures(),
        }


def central_extension(g):
    """g (degree 0) + g[1] (degree -1) + R[2] (degree -2, label 'c').

    The bracket of two g[1] elements is their inner product times ``c``;
    Q sends ``u[1]`` to ``u`` and kills g and ``c``.
    """
    degrees = {}
    for i in range(g.dim):
        degrees[('g', i)] = 0
    for i in range(g.dim):
        degrees[('s', i)] = -1
    degrees[('c',)] = -2

    def brackets(a, b):
        if a[0] == 'c' or b[0] == 'c':
            return {}
        if a[0] == 's' and b[0] == 's':
            return {('c',): g.metric[a[1]][b[1]]}
        if a[0] == 'g' and b[0] == 'g':
            return dict((('g', k), c) for k, c in enumerate(g.bracket_basis(a[1], b[1])))
        if a[0] == 'g':
            return dict((('s', k), c) for k, c in enumerate(g.bracket_basis(a[1], b[1])))
        # [s_i, g_j] = -[g_j, s_i]
        return dict((('s', k), -c) for k, c in enumerate(g.bracket_basis(b[1], a[1])))

    def differential(a):
        if a[0] == 's':
            return {('g', a[1]): Fraction(1)}
        return {}

    algebra = GradedLieAlgebra(degrees, brackets, differential)
    failures = algebra.verify()
    if any(failures.values()):
        raise StructureError('central extension is not a differential graded Lie algebra',
                             witness=failures)
    logger.debug('central extension of %s verified on %d basis triples',
                 g.name, len(algebra.basis) ** 3)
    return algebra


def affine_cocycle_witness(g, cutoff, broken=False):
    """First triple violating the cocycle identity on the truncated loop algebra, or None.

    ``c(u z^m, v z^n) = m delta_{m+n,0} <u, v>`` (``m**2`` when ``broken``).
    """
    if cutoff < 1:
        raise PreconditionError('mode cutoff must be at least 1')
    modes = range(-cutoff, cutoff + 1)

    def cocycle(i, m, j, n):
        if m + n:
            return Fraction(0)
        return (m * m if broken else m) * g.metric[i][j]

    def on_bracket(i, m, j, n, l, p):
        # c([e_i z^m, e_j z^n], e_l z^p)
        total = Fraction(0)
        for k, c in enumerate(g.bracket_basis(i, j)):
            if c:
                total += c * cocycle(k, m + n, l, p)
        return total

    for (i, m), (j, n) in itertools.product(itertools.product(range(g.dim), modes), repeat=2):
        p = -(m + n)
        if abs(p) > cutoff:
            continue
        for l in range(g.dim):
            value = (on_bracket(i, m, j, n, l, p) + on_bracket(j, n, l, p, i, m)
                     + on_bracket(l, p, i, m, j, n))
            if value:
                return ((i, m), (j, n), (l, p), value)
    return None


def affine_cocycle_check(g, cutoff, broken=False):
    return affine_cocycle_witness(g, cutoff, broken) is None


# symmetry pairs

def contract(v, alpha):
    """``v -| alpha`` for a vector field given by its components."""
    out = alpha.chart.zero()
    for a, va in enumerate(v, 1):
        if va:
            out = out + va * left_derivative(alpha, 'xi%d' % a)
    return out


def lie_derivative(v, alpha):
    m = len(v)
    return d(contract(v, alpha), m) + contract(v, d(alpha, m))


def vector_bracket(v, w):
    m = len(v)
    out = []
    for a in range(m):
        value = v[a] * 0
        for b in range(m):
            name = 'x%d' % (b + 1)
            value = value + v[b] * left_derivative(w[a], name) - w[b] * left_derivative(v[a], name)
        out.append(value)
    return tuple(out)


class SymmetryPair:
    """A vector field v and an (n-1)-form alpha on R^m."""

    def __init__(self, m, n, v, alpha):
        self.m = m
        self.n = n
        self.chart = twist_chart(m, n)
        if len(v) != m:
            raise DomainError('vector field needs %d components' % m)
        self.v = tuple(_lift(c, self.chart) for c in v)
        self.alpha = _lift(alpha, self.chart)
        for c in self.v:
            if not c.depends_only_on(['x%d' % a for a in range(1, m + 1)]):
                raise DomainError('vector field components depend on x only: %s' % c)
        if not _base_only(self.alpha, m) or not self.alpha.is_homogeneous(n - 1):
            raise PreconditionError('alpha must be an (n-1)-form, got %s' % self.alpha)

    def __eq__(self, other):
        return (isinstance(other, SymmetryPair) and (self.m, self.n) == (other.m, other.n)
                and self.v == other.v and self.alpha == other.alpha)

    def __hash__(self):
        return hash((self.v, self.alpha))

    def __add__(self, other):
        return SymmetryPair(self.m, self.n, [a + b for a, b in zip(self.v, other.v)],
                            self.alpha + other.alpha)

    def is_zero(self):
        return not any(self.v) and not self.alpha

    def __repr__(self):
        return 'SymmetryPair(v=(%s), alpha=%s)' % (', '.join(str(c) for c in self.v), self.alpha)


def pair_q(m, n):
    """De Rham Q on ``T[1]R^m x R[n]`` with ``Q(t) = 0``."""
    chart = twist_chart(m, n)
    return Derivation(chart, 1, dict(('x%d' % a, chart.gen('xi%d' % a)) for a in range(1, m + 1)))


def iota_encode(s):
    comps = dict(('xi%d' % a, c) for a, c in enumerate(s.v, 1))
    comps['t'] = s.alpha
    return Derivation(s.chart, -1, comps)


def iota_square(s):
    """``[iota, iota] / 2``; its t-component is ``v -| alpha``."""
    iota = iota_encode(s)
    return commutator(iota, iota) * Fraction(1, 2)


def decode(D, m, n):
    """Read a degree -1 derivation back as a pair (v, alpha)."""
    for a in range(1, m + 1):
        if D['x%d' % a]:
            raise StructureError('derivation moves base coordinates', witness=str(D))
    return SymmetryPair(m, n, [D['xi%d' % a] for a in range(1, m + 1)], D['t'])


def symmetry_bracket(s1, s2):
    """``([v1, v2], L_{v1} alpha2 - v2 -| d alpha1)``."""
    if (s1.m, s1.n) != (s2.m, s2.n):
        raise DomainError('symmetry pairs over different charts')
    alpha = lie_derivative(s1.v, s2.alpha) - contract(s2.v, d(s1.alpha, s1.m))
    return SymmetryPair(s1.m, s1.n, vector_bracket(s1.v, s2.v), alpha)


def derived_symmetry_bracket(s1, s2):
    """Decoding of ``[[Q, iota1], iota2]``."""
    Q = pair_q(s1.m, s1.n)
    return decode(commutator(commutator(Q, iota_encode(s1)), iota_encode(s2)), s1.m, s1.n)


def symmetric_defect(s1, s2):
    """Decoding of ``[Q, [iota1, iota2]]``, the symmetric part of the bracket."""
    Q = pair_q(s1.m, s1.n)
    return decode(commutator(Q, commutator(iota_encode(s1), iota_encode(s2))), s1.m, s1.n)


def _forms(m, degree, chart):
    # constant and linear-coefficient monomial forms of a given degree
    out = []
    for combo in itertools.combinations(range(1, m + 1), degree):
        base = chart.one()
        for a in combo:
            base = base * chart.gen('xi%d' % a)
        out.append(base)
        for b in range(1, m + 1):
            out.append(chart.gen('x%d' % b) * base)
    return out


def candidate_pairs(m, n):
    chart = twist_chart(m, n)
    fields = []
    for a in range(m):
        for coeff in [chart.one()] + [chart.gen('x%d' % b) for b in range(1, m + 1)]:
            v = [chart.zero()] * m
            v[a] = coeff
            fields.append(v)
    return [SymmetryPair(m, n, v, alpha)
            for v in fields for alpha in _forms(m, n - 1, chart)]


def find_nonskew_witness(m=2, n=2):
    """First candidate pair (s1, s2) whose bracket is not antisymmetric, or None."""
    for s1, s2 in itertools.product(candidate_pairs(m, n), repeat=2):
        if not (symmetry_bracket(s1, s2) + symmetry_bracket(s2, s1)).is_zero():
            return s1, s2
    return None
