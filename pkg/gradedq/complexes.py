"""
Finite cochain complexes with degree-n pairings, over the rationals.

Conventions used throughout:

* ``d[k]`` is the matrix of ``C^k -> C^(k+1)``, shape ``dims[k+1] x dims[k]``;
* a pairing of degree ``n`` is a family ``P[k]`` of ``dims[k] x dims[n-k]``
  matrices, ``<x, y> = x^T P[k] y``;
* compatibility with the differential reads
  ``d[k]^T P[k+1] + (-1)^k P[k] d[n-k-1] = 0``;
* shifting by ``[n]`` moves ``H^j`` to degree ``j + n``.

    >>> C = GradedComplex({0: 1, 1: 1}, {0: [[1]]})
    >>> C.betti()
    {0: 0, 1: 0}
"""
import itertools
import logging
from dataclasses import dataclass, field

import sympy

from gradedq.exceptions import DomainError, PreconditionError, StructureError

logger = logging.getLogger(__name__)


def matrix(rows, shape=None):
    if isinstance(rows, sympy.MatrixBase):
        M = sympy.Matrix(rows)
    elif shape is not None and not len(rows):
        M = sympy.zeros(*shape)
    else:
        M = sympy.Matrix([[sympy.Rational(str(c)) for c in row] for row in rows])
    if shape is not None and M.shape != tuple(shape):
        raise DomainError('matrix has shape %s, expected %s' % (M.shape, tuple(shape)))
    return M


def rank(M):
    if not M.rows or not M.cols:
        return 0
    return M.rank()


def hstack(*blocks):
    blocks = [b for b in blocks if b.cols]
    if not blocks:
        return None
    return sympy.Matrix.hstack(*blocks)


def span_basis(M, rows):
    """Independent columns spanning the column space of ``M``."""
    if M is None or not M.cols or not rows:
        return sympy.zeros(rows, 0)
    cols = M.columnspace()
    return sympy.Matrix.hstack(*cols) if cols else sympy.zeros(rows, 0)


def kernel(M, cols):
    if not M.rows:
        return sympy.eye(cols)
    if not cols:
        return sympy.zeros(0, 0)
    vecs = M.nullspace()
    return sympy.Matrix.hstack(*vecs) if vecs else sympy.zeros(cols, 0)


def complement(Z, B, rows):
    """Columns of ``Z`` completing a basis of ``span(B)`` to ``span(Z)``."""
    chosen = []
    current = B if B.cols else None
    base = rank(B) if B.cols else 0
    for j in range(Z.cols):
        trial = hstack(*([current] if current is not None else []), Z[:, j])
        r = rank(trial)
        if r > base:
            chosen.append(Z[:, j])
            current, base = trial, r
    return sympy.Matrix.hstack(*chosen) if chosen else sympy.zeros(rows, 0)


def same_span(A, B):
    if not A.cols and not B.cols:
        return True
    ra, rb = rank(A) if A.cols else 0, rank(B) if B.cols else 0
    both = hstack(A, B)
    return ra == rb == (rank(both) if both is not None else 0)


def kron(A, B):
    return sympy.Matrix(A.rows * B.rows, A.cols * B.cols,
                        lambda i, j: A[i // B.rows, j // B.cols] * B[i % B.rows, j % B.cols])


def block_matrix(row_sizes, col_sizes, blocks):
    """Assemble ``{(r, c): matrix}`` into one matrix with the given block sizes."""
    M = sympy.zeros(sum(row_sizes), sum(col_sizes))
    roff = [sum(row_sizes[:i]) for i in range(len(row_sizes))]
    coff = [sum(col_sizes[:i]) for i in range(len(col_sizes))]
    for (r, c), B in blocks.items():
        if B.rows and B.cols:
            M[roff[r]:roff[r] + B.rows, coff[c]:coff[c] + B.cols] = B
    return M


class GradedComplex:
    """Finitely many nonzero components ``dims[k]`` with differentials ``d[k]``."""

    def __init__(self, dims, differentials=None, check=True):
        self.dims = dict((int(k), int(v)) for k, v in dims.items() if v)
        self._d = {}
        for k, rows in (differentials or {}).items():
            k = int(k)
            M = matrix(rows, (self.dim(k + 1), self.dim(k)))
            if M.rows and M.cols and any(M):
                self._d[k] = M
        if check:
            for k in self._d:
                dd = self.d(k + 1) * self.d(k)
                if any(dd):
                    raise StructureError('d^2 != 0 starting in degree %d' % k, witness=k)

    def __repr__(self):
        return 'GradedComplex(%s)' % self.dims

    def dim(self, k):
        return self.dims.get(k, 0)

    @property
    def degrees(self):
        if not self.dims:
            return []
        return list(range(min(self.dims), max(self.dims) + 1))

    def d(self, k):
        return self._d.get(k, sympy.zeros(self.dim(k + 1), self.dim(k)))

    @property
    def differentials(self):
        return dict(self._d)

    def cocycles(self, k):
        return kernel(self.d(k), self.dim(k))

    def coboundaries(self, k):
        return span_basis(self.d(k - 1), self.dim(k))

    def cohomology(self):
        """``{k: (dimension, representative columns)}`` for every nonzero degree."""
        out = {}
        for k in self.degrees:
            Z, B = self.cocycles(k), self.coboundaries(k)
            reps = complement(Z, B, self.dim(k))
            out[k] = (reps.cols, reps)
        return out

    def betti(self):
        return dict((k, h) for k, (h, _) in self.cohomology().items())

    def euler_characteristic(self):
        return sum((-1) ** (k % 2) * v for k, v in self.dims.items())

    def shift(self, n):
        """``C[n]``: component k moves to degree ``k + n`` with sign ``(-1)^n`` on d."""
        sign = -1 if n % 2 else 1
        return GradedComplex(dict((k + n, v) for k, v in self.dims.items()),
                             dict((k + n, M * sign) for k, M in self._d.items()), check=False)


def cohomology(C):
    return C.cohomology()


def _blocks(A, B, K):
    return [(p, K - p) for p in sorted(A.dims) if K - p in B.dims]


def tensor(A, B):
    """Koszul tensor product: ``d(a b) = da b + (-1)^|a| a db``."""
    dims = {}
    for p, q in itertools.product(A.dims, B.dims):
        dims[p + q] = dims.get(p + q, 0) + A.dim(p) * B.dim(q)
    diffs = {}
    for K in dims:
        src = _blocks(A, B, K)
        dst = _blocks(A, B, K + 1)
        if not dst:
            continue
        blocks = {}
        for i, (p, q) in enumerate(src):
            for j, (p2, q2) in enumerate(dst):
                if (p2, q2) == (p + 1, q):
                    blocks[(j, i)] = kron(A.d(p), sympy.eye(B.dim(q)))
                elif (p2, q2) == (p, q + 1):
                    sign = -1 if p % 2 else 1
                    blocks[(j, i)] = kron(sympy.eye(A.dim(p)), B.d(q)) * sign
        diffs[K] = block_matrix([A.dim(a) * B.dim(b) for a, b in dst],
                                [A.dim(a) * B.dim(b) for a, b in src], blocks)
    return GradedComplex(dims, diffs)


class SymplecticComplex:
    """A complex with pairing matrices ``P[k]`` of degree ``n``."""

    def __init__(self, complex, pairing, n, check=True):
        self.complex = complex
        self.n = n
        self._P = {}
        for k, rows in pairing.items():
            k = int(k)
            M = matrix(rows, (complex.dim(k), complex.dim(n - k)))
            if M.rows and M.cols:
                self._P[k] = M
        self.compatibility_failure = self._compatibility()
        if check and self.compatibility_failure is not None:
            raise StructureError('pairing is not compatible with d in degree %d'
                                 % self.compatibility_failure,
                                 witness=self.compatibility_failure)

    def __repr__(self):
        return 'SymplecticComplex(n=%d, %s)' % (self.n, self.complex.dims)

    def P(self, k):
        return self._P.get(k, sympy.zeros(self.complex.dim(k), self.complex.dim(self.n - k)))

    @property
    def pairing(self):
        return dict(self._P)

    def pair(self, k, x, y):
        return (x.T * self.P(k) * y)[0, 0]

    def _compatibility(self):
        C, n = self.complex, self.n
        for k in C.degrees + [min(C.degrees or [0]) - 1]:
            sign = -1 if k % 2 else 1
            lhs = C.d(k).T * self.P(k + 1) + self.P(k) * C.d(n - k - 1) * sign
            if any(lhs):
                return k
        return None

    def is_compatible(self):
        return self.compatibility_failure is None

    def is_nondegenerate(self):
        C = self.complex
        for k in C.dims:
            P = self.P(k)
            if P.rows != P.cols or rank(P) != P.rows:
                return False
        return True


@dataclass
class InducedPairing:
    blocks: dict
    dims: dict
    nondegenerate: bool
    chain_nondegenerate: bool


def cohomology_pairing(S):
    """Pairing induced on cohomology by a compatible pairing."""
    if not S.is_compatible():
        raise StructureError('pairing is not compatible with d in degree %d'
                             % S.compatibility_failure, witness=S.compatibility_failure)
    C, n = S.complex, S.n
    H = C.cohomology()
    for k in C.degrees:
        Z = C.cocycles(k)
        B = C.coboundaries(n - k)
        if Z.cols and B.cols and any(Z.T * S.P(k) * B):
            raise StructureError('cocycle pairs nontrivially with a coboundary in degree %d' % k,
                                 witness=k)
    blocks, nondegenerate = {}, True
    for k, (h, reps) in H.items():
        h2, reps2 = H.get(n - k, (0, sympy.zeros(C.dim(n - k), 0)))
        if h != h2:
            nondegenerate = False
        if not h or not h2:
            continue
        M = reps.T * S.P(k) * reps2
        blocks[k] = M
        if rank(M) != h:
            nondegenerate = False
    return InducedPairing(blocks, dict((k, h) for k, (h, _) in H.items()), nondegenerate,
                          S.is_nondegenerate())


def double(C, n):
    """``C + C*[n]`` with its canonical pairing of degree ``n``.

    ``D^k = C^k + (C^(n-k))*``; the dual part carries ``(-1)^(k+1) d^T`` and
    the pairing is ``[[0, s_k I], [I, 0]]`` with ``s_k = (-1)^(k(n+1))``.
    """
    degrees = set(C.dims) | set(n - k for k in C.dims)
    dims = dict((k, C.dim(k) + C.dim(n - k)) for k in degrees)
    diffs, pairing = {}, {}
    for k in degrees:
        a, b = C.dim(k), C.dim(n - k)
        a1, b1 = C.dim(k + 1), C.dim(n - k - 1)
        sign = -1 if (k + 1) % 2 else 1
        if a1 + b1:
            diffs[k] = block_matrix([a1, b1], [a, b],
                                    {(0, 0): C.d(k), (1, 1): C.d(n - k - 1).T * sign})
        s = -1 if (k * (n + 1)) % 2 else 1
        pairing[k] = block_matrix([a, b], [b, a],
                                  {(0, 1): sympy.eye(a) * s, (1, 0): sympy.eye(b)})
    return SymplecticComplex(GradedComplex(dims, diffs), pairing, n)


def subcomplex(C, basis):
    """Complex on the column spans ``basis[k]`` of a d-stable subspace."""
    dims = dict((k, N.cols) for k, N in basis.items() if N.cols)
    diffs = {}
    for k, N in basis.items():
        N1 = basis.get(k + 1)
        if not N.cols or N1 is None or not N1.cols:
            continue
        image = C.d(k) * N
        gram = N1.T * N1
        X = gram.inv() * N1.T * image
        if N1 * X != image:
            raise StructureError('subspace is not stable under d in degree %d' % k, witness=k)
        diffs[k] = X
    return GradedComplex(dims, diffs)


class RelativeComplex:
    """A total complex with its boundary restriction.

    ``restriction[k]`` maps total degree k to boundary degree k.  The
    boundary pairing has degree ``n - 1`` and Stokes reads
    ``r^T P_bd r = d^T P + (-1)^k P d``.
    """

    def __init__(self, total, boundary=None, restriction=None, name=None):
        self.total = total
        self.name = name or 'relative'
        n = total.n
        if boundary is None:
            boundary = SymplecticComplex(GradedComplex({}), {}, n - 1)
        self.boundary = boundary
        if boundary.n != n - 1:
            raise DomainError('boundary pairing must have degree %d' % (n - 1))
        C, E = total.complex, boundary.complex
        self._r = {}
        for k, rows in (restriction or {}).items():
            M = matrix(rows, (E.dim(k), C.dim(k)))
            if M.rows and M.cols:
                self._r[k] = M
        for k in C.degrees:
            if self.r(k + 1) * C.d(k) != E.d(k) * self.r(k):
                raise StructureError('restriction is not a chain map in degree %d' % k, witness=k)
        failure = self.stokes_failure()
        if failure is not None:
            raise StructureError('Stokes identity fails in degree %d' % failure, witness=failure)
        basis = dict((k, kernel(self.r(k), C.dim(k))) for k in C.degrees)
        self.sub_basis = basis
        self.sub = subcomplex(C, basis)

    def __repr__(self):
        return 'RelativeComplex(%s)' % self.name

    @property
    def n(self):
        return self.total.n

    def r(self, k):
        return self._r.get(k, sympy.zeros(self.boundary.complex.dim(k), self.total.complex.dim(k)))

    @property
    def restriction(self):
        return dict(self._r)

    def is_closed(self):
        return not self.boundary.complex.dims

    def stokes_failure(self):
        S, T, n = self.total, self.boundary, self.total.n
        C = S.complex
        for k in C.degrees + [min(C.degrees or [0]) - 1]:
            sign = -1 if k % 2 else 1
            lhs = self.r(k).T * T.P(k) * self.r(n - 1 - k)
            rhs = C.d(k).T * S.P(k + 1) + S.P(k) * C.d(n - 1 - k) * sign
            if lhs != rhs:
                return k
        return None

    def sub_coboundaries(self, k):
        N = self.sub_basis.get(k - 1)
        if N is None or not N.cols:
            return sympy.zeros(self.total.complex.dim(k), 0)
        return span_basis(self.total.complex.d(k - 1) * N, self.total.complex.dim(k))


def closed(S, name=None):
    return RelativeComplex(S, name=name)


@dataclass
class Lemma3Result:
    verdict: str
    equality: dict = field(default_factory=dict)
    inclusion: dict = field(default_factory=dict)
    quotient_dims: dict = field(default_factory=dict)
    quotient_nondegenerate: bool = True
    chain_nondegenerate: bool = True
    explanation: str = ''


def perp(S, k, B):
    """Vectors of degree k orthogonal to the columns ``B`` of degree ``n - k``."""
    dim = S.complex.dim(k)
    if not B.cols:
        return sympy.eye(dim)
    return kernel((S.P(k) * B).T, dim)


def lemma3_orthogonality(R):
    """Compare cocycles with the annihilator of relative coboundaries, degree by degree."""
    S, n = R.total, R.n
    C = S.complex
    chain_ok = S.is_nondegenerate()
    result = Lemma3Result('pass', chain_nondegenerate=chain_ok)
    bad_degrees = []
    for k in C.degrees:
        Z = C.cocycles(k)
        W = perp(S, k, R.sub_coboundaries(n - k))
        result.equality[k] = same_span(Z, W)
        joined = hstack(W, Z)
        result.inclusion[k] = (not Z.cols) or rank(joined) == (rank(W) if W.cols else 0)
        if not result.equality[k]:
            bad_degrees.append(k)
    reps = {}
    for k in C.degrees:
        reps[k] = complement(C.cocycles(k), R.sub_coboundaries(k), C.dim(k))
        result.quotient_dims[k] = reps[k].cols
    for k in C.degrees:
        a = reps[k]
        b = reps.get(n - k, sympy.zeros(C.dim(n - k), 0))
        if a.cols != b.cols:
            result.quotient_nondegenerate = False
        elif a.cols and rank(a.T * S.P(k) * b) != a.cols:
            result.quotient_nondegenerate = False
    if not bad_degrees and result.quotient_nondegenerate:
        result.explanation = 'Z = B0^perp in every degree'
        return result
    if all(result.inclusion.values()) and result.quotient_nondegenerate and not chain_ok:
        result.verdict = 'degraded-mode'
        result.explanation = ('chain-level pairing is degenerate; Z is contained in B0^perp '
                              '(equality fails in degrees %s) and Z/B0 is symplectic'
                              % ', '.join(str(k) for k in bad_degrees))
        return result
    result.verdict = 'fail'
    result.explanation = 'Z != B0^perp in degrees %s' % ', '.join(str(k) for k in bad_degrees)
    return result


@dataclass
class LagrangianResult:
    isotropic: bool
    image_dim: int
    boundary_dim: int

    @property
    def lagrangian(self):
        return self.isotropic and 2 * self.image_dim == self.boundary_dim


def boundary_lagrangian(R):
    """Image of ``H(total) -> H(boundary)``: isotropy and half dimension."""
    if R.is_closed():
        return LagrangianResult(True, 0, 0)
    C, E, T, n = R.total.complex, R.boundary.complex, R.boundary, R.n
    image_dim = 0
    images = {}
    for k in C.degrees:
        images[k] = R.r(k) * C.cocycles(k)
        B = E.coboundaries(k)
        joined = hstack(B, images[k])
        image_dim += (rank(joined) if joined is not None else 0) - (rank(B) if B.cols else 0)
    isotropic = True
    for k in images:
        other = images.get(n - 1 - k)
        if other is None or not images[k].cols or not other.cols:
            continue
        if any(images[k].T * T.P(k) * other):
            isotropic = False
    boundary_dim = sum(E.betti().values())
    logger.debug('boundary image %d of %d', image_dim, boundary_dim)
    return LagrangianResult(isotropic, image_dim, boundary_dim)


def omega_degree(n, dim_m):
    """Degree of the mapping-space form for a degree-n target over a dim_m source."""
    return n - dim_m


def homotopy_type_check(C0, n):
    """Degree 0 of ``H(C0)[n]`` vanishes when C0 is bounded below by ``-d`` and ``n > d``."""
    if not C0.dims:
        return True
    d = max(0, -min(C0.dims))
    if n <= d:
        raise PreconditionError('needs n > %d, got %d' % (d, n))
    return C0.betti().get(-n, 0) == 0


# mapping spaces out of V[1]

def _wedge_sign(I, J):
    if set(I) & set(J):
        return 0
    inversions = sum(1 for i in I for j in J if i > j)
    return -1 if inversions % 2 else 1


@dataclass
class NMapSpace:
    """Components ``(coordinate, weight, subsets)`` and the Berezin pairing matrix."""
    n: int
    components: list
    pairing: sympy.Matrix

    @property
    def dims(self):
        return dict((name, len(subsets)) for name, _, subsets in self.components)

    @property
    def total_dim(self):
        return sum(len(subsets) for _, _, subsets in self.components)

    def is_nondegenerate(self):
        return rank(self.pairing) == self.total_dim


def nmap_space(Y, n):
    """N-maps from V[1], ``dim V = n``, into a Darboux chart ``Y``.

    A coordinate of weight k gives a ``Lambda^k V*`` component; the pairing
    integrates ``omega`` over V[1], so only weights adding up to ``n`` pair.

        >>> from gradedq.sigma import DarbouxChart
        >>> space = nmap_space(DarbouxChart(1, [(('x', 0), ('p', 1))]), 1)
        >>> space.dims, space.pairing.tolist()
        ({'x': 1, 'p': 1}, [[0, 1], [-1, 0]])
    """
    if n < 1:
        raise PreconditionError('source dimension must be positive')
    components, offsets = [], {}
    for v in Y.chart.vars:
        subsets = list(itertools.combinations(range(n), v.weight)) if v.weight <= n else []
        offsets[v.name] = sum(len(s) for _, _, s in components)
        components.append((v.name, v.weight, subsets))
    total = sum(len(s) for _, _, s in components)
    P = sympy.zeros(total, total)
    by_name = dict((name, subsets) for name, _, subsets in components)
    top = tuple(range(n))
    for i, (qv, pv) in enumerate(Y.pairs):
        q, k, p, w = qv.name, qv.weight, pv.name, pv.weight
        if k + w != n:
            continue
        c = sympy.Rational(str(Y.coefficients[i]))
        sign = -1 if (k * w) % 2 == 0 else 1
        for a, I in enumerate(by_name[q]):
            for b, J in enumerate(by_name[p]):
                e = _wedge_sign(I, J)
                if e and tuple(sorted(I + J)) == top:
                    P[offsets[q] + a, offsets[p] + b] = c * e
                    P[offsets[p] + b, offsets[q] + a] = c * e * sign
    return NMapSpace(n, components, P)
