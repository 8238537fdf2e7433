"""
Simplicial lattice models of compact surfaces, intervals and cubes.

Every simplex is a tuple of vertex ids sorted by the global vertex order,
cochains are indexed by the sorted simplex lists, and the cup product is
the Alexander-Whitney one.  Pairings evaluate cup products on the
fundamental chain, and boundary pairings evaluate them on its boundary,
so Stokes holds exactly.

    >>> M = torus(3, 3)
    >>> [len(M.complex.cells[k]) for k in range(3)]
    [9, 27, 18]
    >>> cochain_complex(M.complex).betti()
    {0: 1, 1: 2, 2: 1}
"""
import itertools
import logging

import sympy

from gradedq.complexes import (GradedComplex, RelativeComplex, SymplecticComplex, block_matrix,
                               kron, matrix, tensor)
from gradedq.exceptions import DomainError, PreconditionError

logger = logging.getLogger(__name__)


class SimplicialComplex:
    """Closure of a set of simplices given as vertex tuples."""

    def __init__(self, simplices):
        cells = {}
        for s in simplices:
            s = tuple(sorted(s))
            if len(set(s)) != len(s):
                raise DomainError('degenerate simplex %s' % (s,))
            for r in range(1, len(s) + 1):
                for face in itertools.combinations(s, r):
                    cells.setdefault(r - 1, set()).add(face)
        self.cells = dict((k, sorted(v)) for k, v in cells.items())
        self.index = dict((k, dict((s, i) for i, s in enumerate(v))) for k, v in self.cells.items())

    @property
    def dim(self):
        return max(self.cells) if self.cells else -1

    def size(self, k):
        return len(self.cells.get(k, ()))

    def coboundary(self, k):
        """Matrix of ``delta: C^k -> C^(k+1)``."""
        M = sympy.zeros(self.size(k + 1), self.size(k))
        for row, s in enumerate(self.cells.get(k + 1, ())):
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                M[row, self.index[k][face]] += -1 if i % 2 else 1
        return M

    def cup_pairing(self, p, q, chain):
        """``(f, g) -> (f cup g)(chain)`` for f of degree p and g of degree q."""
        M = sympy.zeros(self.size(p), self.size(q))
        for s, c in chain.items():
            if len(s) != p + q + 1:
                raise DomainError('chain of wrong dimension for a (%d, %d) pairing' % (p, q))
            M[self.index[p][s[:p + 1]], self.index[q][s[p:]]] += c
        return M

    def restriction(self, sub, k):
        M = sympy.zeros(sub.size(k), self.size(k))
        for row, s in enumerate(sub.cells.get(k, ())):
            M[row, self.index[k][s]] = 1
        return M


def boundary_chain(chain):
    out = {}
    for s, c in chain.items():
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            out[face] = out.get(face, 0) + (-c if i % 2 else c)
    return dict((s, c) for s, c in out.items() if c)


def cochain_complex(K):
    return GradedComplex(dict((k, K.size(k)) for k in K.cells),
                         dict((k, K.coboundary(k)) for k in K.cells if k + 1 in K.cells))


def _orientation(simplex, coords):
    """Sign of the simplex in the ambient orientation, vertices in id order."""
    order = sorted(range(len(simplex)), key=lambda i: simplex[i])
    pts = [coords[i] for i in order]
    rows = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
    det = sympy.Matrix(rows).det()
    if det == 0:
        raise DomainError('flat simplex')
    return 1 if det > 0 else -1


class LatticeManifold:
    """A triangulated oriented manifold: complex, fundamental chain and boundary."""

    def __init__(self, name, simplices, vertex_coords):
        # ``simplices`` holds (vertex ids, unwrapped coordinates) pairs
        self.name = name
        self.complex = SimplicialComplex([ids for ids, _ in simplices])
        chain = {}
        for ids, pts in simplices:
            key = tuple(sorted(ids))
            chain[key] = chain.get(key, 0) + _orientation(ids, pts)
        self.chain = chain
        self.boundary_cycle = boundary_chain(chain)
        self.boundary = SimplicialComplex(list(self.boundary_cycle)) if self.boundary_cycle else None
        self.vertex_coords = vertex_coords

    def __repr__(self):
        return 'LatticeManifold(%s)' % self.name

    @property
    def dim(self):
        return self.complex.dim

    def euler_characteristic(self):
        return sum((-1) ** k * self.complex.size(k) for k in self.complex.cells)


def _kuhn(corner, n):
    """Simplices of the Kuhn subdivision of the unit cube at ``corner``."""
    out = []
    for perm in itertools.permutations(range(n)):
        pt = list(corner)
        pts = [tuple(pt)]
        for axis in perm:
            pt[axis] += 1
            pts.append(tuple(pt))
        out.append(pts)
    return out


def _grid(name, sizes, periodic):
    n = len(sizes)
    for m, wrap in zip(sizes, periodic):
        if m < (3 if wrap else 1):
            raise PreconditionError('%s: too few cells in one direction' % name)
    extent = [m if wrap else m + 1 for m, wrap in zip(sizes, periodic)]

    def vid(pt):
        i = 0
        for x, e, wrap in zip(pt, extent, periodic):
            i = i * e + (x % e if wrap else x)
        return i

    simplices = []
    for corner in itertools.product(*[range(m) for m in sizes]):
        for pts in _kuhn(corner, n):
            simplices.append((tuple(vid(p) for p in pts), pts))
    coords = dict((vid(p), p) for p in itertools.product(*[range(e) for e in extent]))
    return LatticeManifold(name, simplices, coords)


def torus(m1, m2):
    return _grid('torus(%d,%d)' % (m1, m2), [m1, m2], [True, True])


def circle(m):
    return _grid('circle(%d)' % m, [m], [True])


def interval(m):
    return _grid('interval(%d)' % m, [m], [False])


def cylinder(m1, m2):
    """Circle of ``m1`` cells times an interval of ``m2`` cells."""
    return _grid('cylinder(%d,%d)' % (m1, m2), [m1, m2], [True, False])


def disk(m):
    return _grid('disk(%d)' % m, [m, m], [False, False])


def cube(n, m):
    """The ball ``[0, m]^n`` with boundary sphere."""
    return _grid('cube%d(%d)' % (n, m), [m] * n, [False] * n)


def relative_cochains(M):
    """Cochains vanishing on the boundary subcomplex."""
    K, bd = M.complex, M.boundary
    keep = {}
    for k, cells in K.cells.items():
        inner = bd.cells.get(k, ()) if bd else ()
        inner = set(inner)
        keep[k] = [i for i, s in enumerate(cells) if s not in inner]
    dims = dict((k, len(v)) for k, v in keep.items())
    diffs = {}
    for k in K.cells:
        if k + 1 not in K.cells:
            continue
        D = K.coboundary(k)
        diffs[k] = D.extract(keep[k + 1], keep[k]) if keep[k + 1] and keep[k] else \
            sympy.zeros(len(keep[k + 1]), len(keep[k]))
    return GradedComplex(dims, diffs)


class Fiber:
    """Graded fiber with zero differential and a pairing of degree ``n``."""

    def __init__(self, dims, pairing, n=0, name='fiber'):
        self.dims = dict((k, v) for k, v in dims.items() if v)
        self.n = n
        self.name = name
        self.pairing = dict((k, matrix(rows, (self.dims.get(k, 0), self.dims.get(n - k, 0))))
                            for k, rows in pairing.items())
        self.complex = GradedComplex(self.dims)

    def B(self, j):
        return self.pairing.get(j, sympy.zeros(self.dims.get(j, 0), self.dims.get(self.n - j, 0)))

    @classmethod
    def from_algebra(cls, g):
        return cls({0: g.dim}, {0: g.metric}, 0, name=g.name)

    @classmethod
    def scalar(cls):
        return cls({0: 1}, {0: [[1]]}, 0, name='R')

    @classmethod
    def symplectic_pair(cls, n):
        """R in degree 0 and R in degree n, paired to a degree-n form."""
        if n < 1:
            raise PreconditionError('pair fiber needs n >= 1')
        return cls({0: 1, n: 1}, {0: [[1]], n: [[(-1) ** (n + 1)]]}, n, name='pair%d' % n)


def _pairing_blocks(K, chain, fiber, form_dims, total_dims, N, base):
    """Pairing matrices of degree N on ``C(K) x fiber`` against ``chain``."""
    def blocks(T):
        return [(k, T - k) for k in sorted(form_dims) if T - k in fiber.dims]

    out = {}
    for T in total_dims:
        rows, cols = blocks(T), blocks(N - T)
        entries = {}
        for i, (k, j) in enumerate(rows):
            for l, (k2, j2) in enumerate(cols):
                if k + k2 != base or j + j2 != fiber.n:
                    continue
                sign = -1 if (j * k2) % 2 else 1
                entries[(i, l)] = kron(K.cup_pairing(k, k2, chain), fiber.B(j)) * sign
        out[T] = block_matrix([form_dims[k] * fiber.dims[j] for k, j in rows],
                              [form_dims[k] * fiber.dims[j] for k, j in cols], entries)
    return out


def _restriction_blocks(M, fiber, total_dims):
    K, bd = M.complex, M.boundary
    out = {}
    for T in total_dims:
        src = [(k, T - k) for k in sorted(K.cells) if T - k in fiber.dims]
        dst = [(k, T - k) for k in sorted(bd.cells) if T - k in fiber.dims]
        entries = {}
        for i, (k, j) in enumerate(dst):
            entries[(i, src.index((k, j)))] = kron(K.restriction(bd, k), sympy.eye(fiber.dims[j]))
        out[T] = block_matrix([bd.size(k) * fiber.dims[j] for k, j in dst],
                              [K.size(k) * fiber.dims[j] for k, j in src], entries)
    return out


def lattice_model(M, fiber):
    """``C(M) x fiber`` with cup-product pairing and its boundary restriction."""
    if not isinstance(fiber, Fiber):
        fiber = Fiber.from_algebra(fiber)
    K = M.complex
    N = M.dim + fiber.n
    C = tensor(cochain_complex(K), fiber.complex)
    forms = dict((k, K.size(k)) for k in K.cells)
    # with a boundary the pairing only satisfies Stokes, checked by RelativeComplex
    total = SymplecticComplex(C, _pairing_blocks(K, M.chain, fiber, forms, C.dims, N, M.dim), N,
                              check=M.boundary is None)
    if M.boundary is None:
        return RelativeComplex(total, name='%s x %s' % (M.name, fiber.name))
    bd = M.boundary
    E = tensor(cochain_complex(bd), fiber.complex)
    bforms = dict((k, bd.size(k)) for k in bd.cells)
    boundary = SymplecticComplex(E, _pairing_blocks(bd, M.boundary_cycle, fiber, bforms, E.dims,
                                                    N - 1, M.dim - 1), N - 1)
    return RelativeComplex(total, boundary, _restriction_blocks(M, fiber, C.dims),
                           name='%s x %s' % (M.name, fiber.name))


def suspension_check(C0, n):
    """``H(C0 x (B^n, S^(n-1))) == H(C0)`` moved up by n, degree by degree."""
    if n < 1:
        raise PreconditionError('suspension degree must be positive')
    ball = cube(n, 2 if n <= 2 else 1)
    rel = relative_cochains(ball)
    shifted = tensor(rel, C0).betti()
    expected = dict((k + n, h) for k, h in C0.betti().items())
    keys = set(shifted) | set(expected)
    ok = all(shifted.get(k, 0) == expected.get(k, 0) for k in keys)
    logger.debug('suspension by %d: %s against %s', n, shifted, expected)
    return ok, shifted, expected
