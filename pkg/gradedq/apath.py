"""
Holonomy of paths in matrix Lie algebras and linear action algebroids.

A path is a list of samples ``(t_j, a_j)`` with ``a`` interpolated linearly
in between.  Its holonomy solves ``g' = g a, g(0) = I`` with the classical
fourth-order Runge-Kutta scheme, stepping each sample interval separately
so that ``a`` is exactly linear on every step.

    >>> import numpy as np
    >>> from scipy.linalg import expm
    >>> X = so3_hat([0.3, -0.2, 0.5])
    >>> g = integrate(constant_path(X), 1000).holonomy
    >>> bool(np.allclose(g, expm(X), atol=1e-10))
    True

For an action algebroid the base point is a row vector moved by
``gamma' = gamma rho(a)``, so the target is ``gamma(0) g(1)``.
"""
import logging
import math

import numpy as np
from scipy.linalg import expm

from gradedq import settings
from gradedq.exceptions import CompositionError, DomainError, InconsistentPathError

logger = logging.getLogger(__name__)


class APath:
    """Samples of an algebra-valued path on [0, 1], optionally with a base curve."""

    def __init__(self, times, values, base=None):
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        if times.ndim != 1 or len(times) < 2:
            raise DomainError('a path needs at least two samples')
        if values.ndim != 3 or values.shape[1] != values.shape[2]:
            raise DomainError('path values must be square matrices, got shape %s' % (values.shape,))
        if values.shape[0] != len(times):
            raise DomainError('%d times for %d samples' % (len(times), values.shape[0]))
        if times[0] != 0.0 or times[-1] != 1.0:
            raise DomainError('sample times must run from 0 to 1')
        if np.any(np.diff(times) < 0):
            raise DomainError('sample times must be increasing')
        if base is not None:
            base = np.asarray(base, dtype=float)
            if base.ndim != 2 or base.shape[0] != len(times):
                raise DomainError('one base point per sample expected')
        self.times = times
        self.values = values
        self.base = base

    @property
    def dim(self):
        return self.values.shape[1]

    def __len__(self):
        return len(self.times)

    def __repr__(self):
        return 'APath(dim=%d, samples=%d%s)' % (self.dim, len(self),
                                                ', base' if self.base is not None else '')

    def at(self, t):
        """Linearly interpolated value; at a repeated knot the later sample wins."""
        j = int(np.searchsorted(self.times, t, side='right')) - 1
        j = min(max(j, 0), len(self.times) - 2)
        t0, t1 = self.times[j], self.times[j + 1]
        if t1 == t0:
            return self.values[j + 1].copy()
        s = (t - t0) / (t1 - t0)
        return (1.0 - s) * self.values[j] + s * self.values[j + 1]


class GroupoidElement:

    def __init__(self, holonomy, source=None, target=None, transported=None):
        self.holonomy = holonomy
        self.source = source
        self.target = target
        # base endpoint from the base ODE, when there is one
        self.transported = transported

    def __repr__(self):
        return 'GroupoidElement(%s -> %s)' % (self.source, self.target)

    def determinant_residual(self):
        return abs(np.linalg.det(self.holonomy) - 1.0)

    def orthogonality_residual(self):
        g = self.holonomy
        return float(np.abs(g.T @ g - np.eye(len(g))).max())

    def in_group(self, orthogonal=False, tolerance=None):
        tolerance = settings.GQ_NUMERIC['group_tolerance'] if tolerance is None else tolerance
        residual = self.determinant_residual()
        if orthogonal:
            residual = max(residual, self.orthogonality_residual())
        return residual <= tolerance


def so3_hat(w):
    x, y, z = w
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def constant_path(X, base=None):
    X = np.asarray(X, dtype=float)
    return APath([0.0, 1.0], [X, X], base)


def path_from_function(fn, samples=101):
    times = np.linspace(0.0, 1.0, samples)
    return APath(times, [fn(t) for t in times])


def random_so3_path(rng, samples=5, scale=1.0):
    """Bounded random so(3) path; ``rng`` is a ``numpy.random.Generator``."""
    times = np.linspace(0.0, 1.0, samples)
    return APath(times, [so3_hat(rng.uniform(-scale, scale, 3)) for _ in times])


def random_sl2_path(rng, samples=5, scale=0.5):
    times = np.linspace(0.0, 1.0, samples)
    values = []
    for _ in times:
        a, b, c = rng.uniform(-scale, scale, 3)
        values.append(np.array([[a, b], [c, -a]]))
    return APath(times, values)


def _rk4(g, a0, am, a1, h):
    k1 = g @ a0
    k2 = (g + 0.5 * h * k1) @ am
    k3 = (g + 0.5 * h * k2) @ am
    k4 = (g + h * k3) @ a1
    return g + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _solve(p, steps, rep=None, start=None):
    if start is None:
        start = np.eye(rep(p.values[0]).shape[0] if rep else p.dim)
    g = start
    for j in range(len(p.times) - 1):
        length = p.times[j + 1] - p.times[j]
        if length == 0.0:
            continue
        a_start, a_end = p.values[j], p.values[j + 1]
        if rep:
            a_start, a_end = rep(a_start), rep(a_end)
        n = max(1, int(math.ceil(steps * length - 1e-9)))
        h = length / n
        for i in range(n):
            s0, s1 = i / n, (i + 1) / n
            a0 = (1.0 - s0) * a_start + s0 * a_end
            a1 = (1.0 - s1) * a_start + s1 * a_end
            g = _rk4(g, a0, 0.5 * (a0 + a1), a1, h)
    return g


def integrate(p, steps=None):
    steps = steps or settings.GQ_NUMERIC['steps']
    g = _solve(p, steps)
    if p.base is None:
        return GroupoidElement(g)
    return GroupoidElement(g, p.base[0], p.base[0] @ g)


def concatenate(p, q):
    """Run ``p`` on [0, 1/2] and ``q`` on [1/2, 1] at double speed."""
    if p.dim != q.dim:
        raise DomainError('paths in algebras of size %d and %d' % (p.dim, q.dim))
    if (p.base is None) != (q.base is None):
        raise DomainError('cannot concatenate an action path with a plain path')
    base = None
    if p.base is not None:
        gap = np.abs(p.base[-1] - q.base[0]).max()
        if gap > settings.GQ_NUMERIC['group_tolerance']:
            raise CompositionError('end of first path is %.3g away from start of second' % gap)
        base = np.concatenate([p.base, q.base])
    times = np.concatenate([0.5 * p.times, 0.5 + 0.5 * q.times])
    return APath(times, np.concatenate([2.0 * p.values, 2.0 * q.values]), base)


def reverse(p):
    base = p.base[::-1].copy() if p.base is not None else None
    return APath(1.0 - p.times[::-1], -p.values[::-1], base)


def reparametrize(p, s, phi):
    """The path ``s -> phi'(s) a(phi(s))`` for samples ``phi(s_j)``."""
    s = np.asarray(s, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if s.shape != phi.shape or len(s) < 3:
        raise DomainError('reparametrization needs at least three samples')
    if phi[0] != 0.0 or phi[-1] != 1.0:
        raise DomainError('reparametrization must fix 0 and 1')
    if np.any(np.diff(phi) < 0):
        raise DomainError('reparametrization is not monotone')
    if np.array_equal(s, phi):
        return p
    rate = np.gradient(phi, s, edge_order=2)
    values = [r * p.at(t) for r, t in zip(rate, phi)]
    return APath(s, values)


def reparametrize_check(p, s, phi, steps=None):
    g = integrate(p, steps).holonomy
    h = integrate(reparametrize(p, s, phi), steps).holonomy
    return float(np.abs(g - h).max())


def anchor_residual(p, action=None):
    """Largest trapezoid mismatch between base increments and the anchored path."""
    if p.base is None:
        raise DomainError('path has no base samples')
    rep = action or (lambda a: a)
    worst = 0.0
    for j in range(len(p.times) - 1):
        dt = p.times[j + 1] - p.times[j]
        if dt == 0.0:
            continue
        g0, g1 = p.base[j], p.base[j + 1]
        slope = (g1 - g0) / dt
        mean = 0.5 * (g0 @ rep(p.values[j]) + g1 @ rep(p.values[j + 1]))
        worst = max(worst, float(np.abs(slope - mean).max()))
    return worst


def action_integrate(p, action=None, steps=None):
    """Integrate an action-algebroid path two ways.

    ``action`` maps an algebra element to the matrix acting on base row
    vectors; the default is the algebra's own matrices.
    """
    residual = anchor_residual(p, action)
    if residual > settings.GQ_NUMERIC['anchor_tolerance']:
        raise InconsistentPathError('base samples do not follow the anchor (residual %.3g)'
                                    % residual, residual=residual)
    steps = steps or settings.GQ_NUMERIC['steps']
    g = _solve(p, steps)
    G = _solve(p, steps, action) if action else g
    source = p.base[0]
    # base ODE gamma' = gamma rho(a), stepped with the same scheme
    gamma = _solve(p, steps, action, start=source.copy())
    return GroupoidElement(g, source, source @ G, transported=gamma)


def action_path(X, gamma0, samples=201):
    """Constant path ``X`` with its exact base curve ``gamma0 exp(t X)``."""
    X = np.asarray(X, dtype=float)
    times = np.linspace(0.0, 1.0, samples)
    gamma0 = np.asarray(gamma0, dtype=float)
    base = [gamma0 @ expm(t * X) for t in times]
    return APath(times, [X] * samples, base)


def convergence_order(p, steps=(20, 40, 80)):
    """Observed order from three resolutions against a Richardson reference."""
    coarse, mid, fine = (integrate(p, n).holonomy for n in steps)
    ratio = steps[1] / steps[0]
    # extrapolate assuming fourth order, then measure the two coarser errors
    reference = fine + (fine - mid) / (ratio ** 4 - 1.0)
    e0 = np.abs(coarse - reference).max()
    e1 = np.abs(mid - reference).max()
    order = float(np.log(e0 / e1) / np.log(ratio))
    logger.debug('errors %.3g %.3g give order %.3f', e0, e1, order)
    return order
