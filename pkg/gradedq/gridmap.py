"""
Discrete maps from a square into SU(2) with a 2-form on the cells.

The group is represented by unit quaternions ``(w, x, y, z)`` and its Lie
algebra by imaginary quaternions, i.e. 3-vectors with the dot product as
invariant inner product.  The product of two grid maps multiplies the
nodes pointwise and adds a cross term built from left and right edge
logarithms, so that it is associative up to a discretization error.

On a square every 3-form vanishes, so ``d omega = f* eta`` holds for any
cell values.  The checks measure instead what the discrete product can get
wrong: the identity and inverse laws, and the associativity defect together
with its observed order under refinement (``associativity_defect``,
``observed_order``).
"""
import logging

import numpy as np

from gradedq import settings
from gradedq.exceptions import DomainError

logger = logging.getLogger(__name__)


def qmul(a, b):
    aw, ax, ay, az = np.moveaxis(np.asarray(a, dtype=float), -1, 0)
    bw, bx, by, bz = np.moveaxis(np.asarray(b, dtype=float), -1, 0)
    return np.stack([aw * bw - ax * bx - ay * by - az * bz,
                     aw * bx + ax * bw + ay * bz - az * by,
                     aw * by - ax * bz + ay * bw + az * bx,
                     aw * bz + ax * by - ay * bx + az * bw], axis=-1)


def qinv(a):
    """Inverse of a unit quaternion."""
    a = np.asarray(a, dtype=float)
    return a * np.array([1.0, -1.0, -1.0, -1.0])


def qnormalize(a):
    return a / np.linalg.norm(a, axis=-1, keepdims=True)


def qlog(a):
    """Principal logarithm of unit quaternions as 3-vectors."""
    a = qnormalize(np.asarray(a, dtype=float))
    vec = a[..., 1:]
    s = np.linalg.norm(vec, axis=-1)
    theta = np.arctan2(s, a[..., 0])
    with np.errstate(invalid='ignore', divide='ignore'):
        scale = np.where(s > 1e-15, theta / np.where(s > 1e-15, s, 1.0), 1.0)
    return vec * scale[..., None]


def qexp(v):
    v = np.asarray(v, dtype=float)
    theta = np.linalg.norm(v, axis=-1)
    with np.errstate(invalid='ignore', divide='ignore'):
        scale = np.where(theta > 1e-15, np.sin(theta) / np.where(theta > 1e-15, theta, 1.0), 1.0)
    return np.concatenate([np.cos(theta)[..., None], v * scale[..., None]], axis=-1)


class GridMap:
    """Nodes ``f`` of shape (n1, n2, 4) and cell values ``omega`` of shape (n1-1, n2-1)."""

    def __init__(self, f, omega=None):
        f = np.asarray(f, dtype=float)
        if f.ndim != 3 or f.shape[2] != 4 or f.shape[0] < 2 or f.shape[1] < 2:
            raise DomainError('grid nodes must have shape (n1, n2, 4) with n1, n2 >= 2')
        if omega is None:
            omega = np.zeros((f.shape[0] - 1, f.shape[1] - 1))
        omega = np.asarray(omega, dtype=float)
        if omega.shape != (f.shape[0] - 1, f.shape[1] - 1):
            raise DomainError('cell array has shape %s, expected %s'
                              % (omega.shape, (f.shape[0] - 1, f.shape[1] - 1)))
        drift = np.abs(np.linalg.norm(f, axis=-1) - 1.0).max()
        if drift > settings.GQ_NUMERIC['unit_tolerance']:
            raise DomainError('grid node is not a unit quaternion (norm drift %.3g)' % drift)
        self.f = f
        self.omega = omega

    @property
    def shape(self):
        return self.f.shape[:2]

    def __repr__(self):
        return 'GridMap(%dx%d)' % self.shape

    def __mul__(self, other):
        return wzw_product(self, other)


def identity_grid(n1, n2):
    f = np.zeros((n1, n2, 4))
    f[..., 0] = 1.0
    return GridMap(f)


def left_edges(f):
    """Logs of ``f^-1 f'`` along the two grid directions, per cell corner."""
    fi = qinv(f[:-1, :-1])
    return qlog(qmul(fi, f[1:, :-1])), qlog(qmul(fi, f[:-1, 1:]))


def right_edges(f):
    fi = qinv(f[:-1, :-1])
    return qlog(qmul(f[1:, :-1], fi)), qlog(qmul(f[:-1, 1:], fi))


def cross_term(f1, f2):
    ax, ay = left_edges(f1)
    bx, by = right_edges(f2)
    return np.sum(ax * by, axis=-1) - np.sum(ay * bx, axis=-1)


def wzw_product(a, b):
    if a.shape != b.shape:
        raise DomainError('grid shapes differ: %s and %s' % (a.shape, b.shape))
    f = qnormalize(qmul(a.f, b.f))
    return GridMap(f, a.omega + b.omega + cross_term(a.f, b.f))


def inverse(b):
    """The grid map whose product with ``b`` is the identity with zero 2-form."""
    f = qinv(b.f)
    return GridMap(f, -b.omega - cross_term(f, b.f))


def smooth_grid(size, amplitude=0.5, phase=0.0):
    """Samples of ``exp(amplitude * (u X + v Y + u v Z))`` on the unit square."""
    u, v = np.meshgrid(np.linspace(0.0, 1.0, size), np.linspace(0.0, 1.0, size), indexing='ij')
    X = np.array([np.cos(phase), np.sin(phase), 0.0])
    Y = np.array([0.0, np.cos(phase), np.sin(phase)])
    Z = np.array([np.sin(phase), 0.0, np.cos(phase)])
    gen = amplitude * (u[..., None] * X + v[..., None] * Y + (u * v)[..., None] * Z)
    return GridMap(qexp(gen))


def associativity_defect(a, b, c):
    """Largest cell discrepancy between ``(a b) c`` and ``a (b c)``."""
    left = (a * b) * c
    right = a * (b * c)
    node = np.abs(left.f - right.f).max()
    cell = np.abs(left.omega - right.omega).max()
    logger.debug('associativity defect on %s: nodes %.3g cells %.3g', a, node, cell)
    return max(node, cell)


def observed_order(coarse, fine, ratio=2.0):
    return float(np.log(coarse / fine) / np.log(ratio))
