"""
Graded vector fields on N-manifold charts.

A ``Derivation`` is stored by its values on the coordinates; its action on
any polynomial follows from the Leibniz rule with left derivatives.

    >>> X, Q = de_rham(2)
    >>> x1, x2 = X.gens('x1', 'x2')
    >>> print(apply(Q, x1 * x2))
    x1*xi2 + x2*xi1
    >>> q_square(Q).is_zero()
    True
"""
import logging
from fractions import Fraction

from gradedq.algebra import Chart, GPoly, left_derivative, exact
from gradedq.exceptions import DomainError, PreconditionError

logger = logging.getLogger(__name__)


class Derivation:
    """Homogeneous graded derivation of degree ``degree``.

    ``components`` maps coordinate names to polynomials; missing names are
    zero.  Each component has weight ``weight(v) + degree``.
    """

    def __init__(self, chart, degree, components=None, check=True):
        self.chart = chart
        self.degree = degree
        comps = {}
        for name, value in (components or {}).items():
            name = name.name if hasattr(name, 'name') else name
            v = chart.var(name)
            if not isinstance(value, GPoly):
                value = chart.const(value)
            elif value.chart != chart:
                raise DomainError('component for %s lives on another chart' % name)
            if check and not value.is_homogeneous(v.weight + degree):
                raise PreconditionError('component for %s must have weight %d, got %s'
                                        % (name, v.weight + degree, value))
            if value:
                comps[name] = value
        self._components = comps

    @property
    def parity(self):
        return self.degree % 2

    def __getitem__(self, name):
        name = name.name if hasattr(name, 'name') else name
        self.chart.index(name)
        return self._components.get(name, self.chart.zero())

    @property
    def components(self):
        return dict(self._components)

    def is_zero(self):
        return not self._components

    def __call__(self, p):
        return apply(self, p)

    def __eq__(self, other):
        return (isinstance(other, Derivation) and self.chart == other.chart
                and (self.degree == other.degree or (self.is_zero() and other.is_zero()))
                and self._components == other._components)

    def __hash__(self):
        return hash((self.degree, frozenset(self._components.items())))

    def _same(self, other):
        if other.chart != self.chart:
            raise DomainError('derivations on different charts')
        if other.degree != self.degree and not (self.is_zero() or other.is_zero()):
            raise PreconditionError('cannot add derivations of degrees %d and %d'
                                    % (self.degree, other.degree))

    def __add__(self, other):
        self._same(other)
        degree = self.degree if not self.is_zero() else other.degree
        names = set(self._components) | set(other._components)
        return Derivation(self.chart, degree, dict((n, self[n] + other[n]) for n in names),
                          check=False)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = exact(c)
        return Derivation(self.chart, self.degree,
                          dict((n, p * c) for n, p in self._components.items()), check=False)

    __rmul__ = __mul__

    def __str__(self):
        if not self._components:
            return '0'
        parts = []
        for v in self.chart.vars:
            if v.name in self._components:
                parts.append('%s -> %s' % (v.name, self._components[v.name]))
        return '{ %s }' % '; '.join(parts)

    def __repr__(self):
        return 'Derivation(deg=%d, %s)' % (self.degree, self)


def apply(D, p):
    """Sum of ``D(v) * d_v p`` over the coordinates; raises weight by deg D."""
    if p.chart != D.chart:
        raise DomainError('derivation and polynomial on different charts')
    result = p.chart.zero()
    for name, comp in D._components.items():
        dp = left_derivative(p, name)
        if dp:
            result = result + comp * dp
    return result


def commutator(D1, D2):
    """Graded commutator ``D1 D2 - (-1)^(d1 d2) D2 D1`` as a derivation.

        >>> X = Chart([('x', 0)])
        >>> x, = X.gens()
        >>> dx = Derivation(X, 0, {'x': 1})
        >>> xdx = Derivation(X, 0, {'x': x})
        >>> print(commutator(dx, xdx))
        { x -> 1 }
    """
    if D1.chart != D2.chart:
        raise DomainError('derivations on different charts')
    sign = -1 if (D1.degree * D2.degree) % 2 else 1
    comps = {}
    for v in D1.chart.vars:
        value = apply(D1, D2[v.name]) - apply(D2, D1[v.name]) * sign
        if value:
            comps[v.name] = value
    return Derivation(D1.chart, D1.degree + D2.degree, comps, check=False)


def q_square(Q):
    """``[Q, Q] / 2``; zero exactly when ``Q`` is homological."""
    if Q.degree != 1:
        raise PreconditionError('q_square needs a degree-1 derivation, got degree %d' % Q.degree)
    return commutator(Q, Q) * Fraction(1, 2)


def is_nq(Q):
    return q_square(Q).is_zero()


def manifold_degree(chart):
    """Highest coordinate weight; 0 means an ordinary manifold."""
    return chart.degree


def euler_field(chart):
    return Derivation(chart, 0, dict((v.name, chart.gen(v.name) * v.weight)
                                     for v in chart.vars if v.weight))


def conjugate(D, name, shift):
    """Conjugate ``D`` by the coordinate change ``name -> name + shift``.

    ``shift`` must not involve ``name``.  Used to compare twisted Q
    structures that differ by a gauge change.
    """
    chart = D.chart
    gen = chart.gen(name)
    forward = {name: gen + shift}
    backward = {name: gen - shift}
    comps = {}
    for v in chart.vars:
        image = D(chart.gen(v.name).substitute(forward))
        comps[v.name] = image.substitute(backward)
    return Derivation(chart, D.degree, comps, check=False)


def base_chart(m, prefix='x', odd_prefix='xi', extra=()):
    """Chart of T[1]R^m: ``x1..xm`` of weight 0 then ``xi1..xim`` of weight 1."""
    return Chart([('%s%d' % (prefix, a), 0) for a in range(1, m + 1)]
                 + [('%s%d' % (odd_prefix, a), 1) for a in range(1, m + 1)]
                 + list(extra))


def de_rham(m, chart=None):
    """The chart T[1]R^m with its de Rham differential ``xi^a d/dx^a``."""
    chart = chart or base_chart(m)
    Q = Derivation(chart, 1, dict(('x%d' % a, chart.gen('xi%d' % a)) for a in range(1, m + 1)))
    return chart, Q


def tangent_dim(chart):
    """Largest m with ``x1..xm`` of weight 0 and ``xi1..xim`` of weight 1 in ``chart``."""
    m = 0
    while True:
        x, xi = 'x%d' % (m + 1), 'xi%d' % (m + 1)
        if x not in chart or xi not in chart:
            return m
        if chart.var(x).weight != 0 or chart.var(xi).weight != 1:
            return m
        m += 1


def d(p, m=None):
    """Symbolic de Rham operator on a T[1]R^m chart (extra coordinates ignored).

    ``m`` defaults to ``tangent_dim`` of the chart.
    """
    chart = p.chart
    top = tangent_dim(chart)
    if m is None:
        m = top
    if not m or m > top:
        raise PreconditionError('d needs coordinates x1..x%d and xi1..xi%d, chart has %s'
                                % (m or 1, m or 1, ', '.join(chart.names)))
    Q = Derivation(chart, 1, dict(('x%d' % a, chart.gen('xi%d' % a)) for a in range(1, m + 1)))
    return apply(Q, p)


def odd_chart(labels):
    return Chart([(label, 1) for label in labels])


def chevalley_eilenberg(constants, chart=None):
    """Q on g[1] from structure constants ``c[k][i][j]`` of ``[e_i, e_j] = c^k_ij e_k``.

    ``Q(xi^k) = -1/2 c^k_ij xi^i xi^j``.
    """
    dim = len(constants)
    chart = chart or odd_chart(['xi%d' % a for a in range(1, dim + 1)])
    xi = chart.gens()
    comps = {}
    for k in range(dim):
        value = chart.zero()
        for i in range(dim):
            for j in range(dim):
                c = constants[k][i][j]
                if c:
                    value = value + xi[i] * xi[j] * (Fraction(-1, 2) * exact(c))
        comps[chart.vars[k].name] = value
    return chart, Derivation(chart, 1, comps)
