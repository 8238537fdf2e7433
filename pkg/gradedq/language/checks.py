"""
Session bindings and the handlers behind ``check`` statements.

A ``Session`` binds statement names to kernel objects in source order and
dispatches every ``check`` through ``settings.GQ_CHECKS``.  Kernel errors
raised inside a handler become failed records; errors in the program
itself are ``SemanticError``.

    >>> report = run_source('algebra G = so3; check cartan G;')
    >>> [(r.name, r.verdict) for r in report]
    [('cartan', 'pass')]
"""
import logging
import math
import os
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import expm

from gradedq import formats, settings
from gradedq.algebra import Chart, GPoly, scaling_check, weight_of
from gradedq.apath import (APath, action_integrate, anchor_residual, concatenate,
                           convergence_order, integrate, reparametrize_check, reverse)
from gradedq.complexes import (RelativeComplex, boundary_lagrangian, closed,
                               cohomology_pairing, double, lemma3_orthogonality, nmap_space)
from gradedq.exceptions import (DomainError, GradedError, InconsistentPathError,
                                PreconditionError, SemanticError, SourceError,
                                UnsupportedInputError)
from gradedq.extensions import (QuadraticLieAlgebra, SymmetryPair, TwistData,
                                abelian, affine_cocycle_witness, cartan_3form, cartan_closed,
                                central_extension, contract, derived_symmetry_bracket,
                                find_nonskew_witness, gauge_change, gauge_consistent,
                                iota_square, jacobi_defects, sl2, so3, symmetric_defect,
                                symmetry_bracket, twist_chart, twisted_q)
from gradedq.gridmap import (associativity_defect, identity_grid, inverse, observed_order,
                             smooth_grid)
from gradedq.language.parser import (AlgebraStmt, AlgebroidStmt, ChartStmt, CheckStmt,
                                     ComplexStmt, Deriv, FormStmt, GridStmt, HamStmt, LoadStmt,
                                     Neg, NMapStmt, Num, PairStmt, PathStmt, QFieldStmt,
                                     SigmaStmt, TwistStmt, Var, parse)
from gradedq.language.report import Record, Report
from gradedq.lattice import (Fiber, circle, cochain_complex, cube, cylinder, disk, interval,
                             lattice_model, suspension_check, torus)
from gradedq.nq import Derivation, chevalley_eilenberg, d, odd_chart, q_square
from gradedq.sigma import (AlgebroidData, DarbouxChart, algebroid_to_q, base_names,
                           derived_bracket, dorfman_oracle, hamiltonian_to_q, lambda_failure,
                           master_equation, schouten_jacobi, section, split_section)

logger = logging.getLogger(__name__)


@dataclass
class Options:
    """Numeric options; ``None`` falls back to ``settings.GQ_NUMERIC``."""
    steps: int = None
    tolerance: float = None
    seed: int = None
    timing: bool = False
    base_dir: str = '.'

    def __post_init__(self):
        numeric = settings.GQ_NUMERIC
        if self.steps is None:
            self.steps = numeric['steps']
        if self.tolerance is None:
            self.tolerance = numeric['tolerance']
        if self.seed is None:
            self.seed = numeric['seed']


# binding values that are not kernel objects themselves

@dataclass
class Hamiltonian:
    sigma: DarbouxChart
    theta: GPoly

    def __str__(self):
        return str(self.theta)


class AlgebraSpec:
    """Structure constants with an optional invariant metric.

    The quadratic algebra is only built on demand, so a non-Lie bracket can
    still be bound and fail its checks.
    """

    def __init__(self, name, constants, metric=None, algebra=None):
        self.name = name
        self.dim = len(constants)
        self.constants = constants
        self.metric = metric
        self._algebra = algebra

    def __repr__(self):
        return 'AlgebraSpec(%s, dim=%d)' % (self.name, self.dim)

    def quadratic(self):
        if self._algebra is None:
            if self.metric is None:
                raise PreconditionError('algebra %s has no invariant metric' % self.name)
            self._algebra = QuadraticLieAlgebra(self.constants, self.metric, self.name)
        return self._algebra

    @classmethod
    def wrap(cls, g):
        return cls(g.name, g.constants, g.metric, g)


@dataclass
class GridBinding:
    grid: object
    model: str = None
    args: tuple = ()


@dataclass
class Pending:
    """Placeholder for values only built at execution time."""
    kind: str


@dataclass
class Broken:
    """A binding whose construction failed at run time."""
    kind: str
    error: GradedError


@dataclass
class Result:
    verdict: str
    witness: object = None
    residuals: dict = field(default_factory=dict)
    explanation: str = ''


def _verdict(ok):
    return 'pass' if ok else 'fail'


def _witness(w):
    return None if w is None else str(w)


def _error(stmt, message):
    return SemanticError(message, stmt.line, stmt.column)


@contextmanager
def _semantic(stmt, prefix=''):
    try:
        yield
    except SourceError:
        raise
    except GradedError as e:
        raise _error(stmt, '%s%s' % (prefix, e))


# expressions

def evaluate(expr, chart):
    if isinstance(expr, Num):
        return chart.const(expr.value)
    if isinstance(expr, Var):
        if expr.name not in chart:
            raise SemanticError('unknown identifier %r' % expr.name, expr.line, expr.column)
        return chart.gen(expr.name)
    if isinstance(expr, Neg):
        return -evaluate(expr.operand, chart)
    if isinstance(expr, Deriv):
        operand = evaluate(expr.operand, chart)
        try:
            return d(operand)
        except PreconditionError as e:
            raise SemanticError(str(e), expr.line, expr.column)
    left = evaluate(expr.left, chart)
    if expr.op == '^':
        return left ** int(expr.right.value)
    right = evaluate(expr.right, chart)
    if expr.op == '+':
        return left + right
    if expr.op == '-':
        return left - right
    return left * right


STATEMENT_KINDS = {
    ChartStmt: 'chart', QFieldStmt: 'qfield', SigmaStmt: 'sigma', HamStmt: 'ham',
    FormStmt: 'form', AlgebroidStmt: 'algebroid', AlgebraStmt: 'algebra', TwistStmt: 'twist',
    PairStmt: 'pair', PathStmt: 'path', ComplexStmt: 'complex', GridStmt: 'grid',
    NMapStmt: 'nmap',
}
CHART_KINDS = ('chart', 'sigma', 'ham', 'twist', 'pair', 'algebroid', 'algebra')
MANIFOLDS = {
    'torus': (torus, 2),
    'cylinder': (cylinder, 2),
    'cube': (cube, 2),
    'interval': (interval, 1),
    'circle': (circle, 1),
    'disk': (disk, 1),
}
READERS = {'path': formats.read_path, 'grid': formats.read_grid, 'complex': formats.read_complex}

FIELDS = 'qfield|twist|algebroid|algebra|ham'
# '?' marks an optional argument, '*' the rest of the arguments
SIGNATURES = {
    'q2': (FIELDS,),
    'master': ('ham',),
    'jacobi': ('algebra|algebroid',),
    'dirac': ('ham', '*coordinate'),
    'lemma1': ('complex', 'int'),
    'lemma3': ('complex',),
    'stokes': ('complex',),
    'boundary-lagrangian': ('complex',),
    'cocycle': ('algebra', 'int', '?broken'),
    'holonomy': ('path', '?path'),
    'reparam': ('path',),
    'order': ('path',),
    'action': ('path',),
    'wzw': ('grid',),
    'gauge': ('twist', 'form'),
    'cartan': ('algebra',),
    'iota': ('pair',),
    'bracket': ('pair', 'pair'),
    'leibniz': ('pair', 'pair', 'pair'),
    'skew': ('?pair', '?pair'),
    'pairing': ('complex', '*int'),
    'nmap': ('nmap',),
    'dorfman': ('ham', '?int'),
    'poisson': ('ham',),
    'scaling': ('form', '?int'),
}


def _is_int(raw):
    return isinstance(raw, Fraction) and raw.denominator == 1


class Session:
    """Named bindings plus a log of ``(check, verdict, witness)``."""

    def __init__(self, options=None, build=True):
        self.options = options or Options()
        self.build = build
        self.bindings = {}
        self.kinds = {}
        self.log = []

    def __contains__(self, name):
        return name in self.bindings

    def __getitem__(self, name):
        return self.bindings[name]

    def rng(self):
        return np.random.default_rng(self.options.seed)

    def lookup(self, name, kinds, stmt):
        if name not in self.bindings:
            raise _error(stmt, 'unknown identifier %r' % name)
        kind = self.kinds[name]
        if kind not in kinds:
            raise _error(stmt, '%s is a %s, expected %s' % (name, kind, ' or '.join(kinds)))
        return self.bindings[name]

    def chart_of(self, name, stmt):
        value = self.lookup(name, CHART_KINDS, stmt)
        kind = self.kinds[name]
        if kind == 'chart':
            return value
        if kind == 'ham':
            return value.sigma.chart
        if kind == 'algebra':
            return odd_chart(['xi%d' % a for a in range(1, value.dim + 1)])
        return value.chart

    # statements

    def bind(self, stmt):
        kind = stmt.kind if isinstance(stmt, LoadStmt) else STATEMENT_KINDS[type(stmt)]
        if stmt.name in self.bindings:
            raise _error(stmt, 'duplicate name %r' % stmt.name)
        binder = getattr(self, 'bind_' + ('load' if isinstance(stmt, LoadStmt) else kind))
        value = binder(stmt)
        self.bindings[stmt.name] = value
        self.kinds[stmt.name] = kind
        logger.debug('bound %s %s', kind, stmt.name)
        return value

    def bind_chart(self, stmt):
        seen = set()
        for name, weight in stmt.variables:
            if weight < 0:
                raise _error(stmt, 'negative weight for %s' % name)
            if name in seen:
                raise _error(stmt, 'duplicate coordinate %s' % name)
            seen.add(name)
        return Chart(stmt.variables)

    def bind_qfield(self, stmt):
        chart = self.chart_of(stmt.chart, stmt)
        comps = {}
        for var, expr in stmt.components:
            if var not in chart:
                raise _error(stmt, 'unknown identifier %r' % var)
            if var in comps:
                raise _error(stmt, 'two components for %s' % var)
            value = evaluate(expr, chart)
            want = chart.var(var).weight + stmt.degree
            if not value.is_homogeneous(want):
                raise _error(stmt, 'weight mismatch: %s -> %s has weight %s, expected %d'
                             % (var, value, weight_of(value), want))
            comps[var] = value
        return Derivation(chart, stmt.degree, comps)

    def bind_sigma(self, stmt):
        with _semantic(stmt):
            return DarbouxChart(stmt.degree, stmt.pairs, stmt.coefficients)

    def bind_ham(self, stmt):
        sigma = self.lookup(stmt.sigma, ('sigma',), stmt)
        theta = evaluate(stmt.expr, sigma.chart)
        if not theta.is_homogeneous(sigma.n + 1):
            raise _error(stmt, 'weight mismatch: Hamiltonian has weight %s, expected %d'
                         % (weight_of(theta), sigma.n + 1))
        return Hamiltonian(sigma, theta)

    def bind_form(self, stmt):
        return evaluate(stmt.expr, self.chart_of(stmt.target, stmt))

    def bind_algebroid(self, stmt):
        with _semantic(stmt):
            chart = AlgebroidData(stmt.base, stmt.fibers).chart
        anchor, structure = {}, {}
        for (e, x), expr in stmt.anchors:
            for name, pool in ((e, stmt.fibers), (x, stmt.base)):
                if name not in pool:
                    raise _error(stmt, 'unknown identifier %r' % name)
            anchor[(e, x)] = evaluate(expr, chart)
        for (i, j, k), expr in stmt.structure:
            for name in (i, j, k):
                if name not in stmt.fibers:
                    raise _error(stmt, 'unknown identifier %r' % name)
            structure[(k, i, j)] = evaluate(expr, chart)
        with _semantic(stmt):
            return AlgebroidData(stmt.base, stmt.fibers, anchor, structure)

    def bind_algebra(self, stmt):
        if stmt.builtin == 'so3':
            return AlgebraSpec.wrap(so3())
        if stmt.builtin == 'sl2':
            return AlgebraSpec.wrap(sl2())
        if stmt.builtin == 'abelian':
            with _semantic(stmt):
                return AlgebraSpec.wrap(abelian(stmt.dim))
        dim = stmt.dim
        c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), coeffs in stmt.brackets:
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise _error(stmt, 'bracket index out of range in (%d, %d)' % (i, j))
            if len(coeffs) != dim:
                raise _error(stmt, 'arity mismatch: bracket (%d, %d) needs %d coefficients'
                             % (i, j, dim))
            for k, value in enumerate(coeffs):
                c[k][i - 1][j - 1] = value
                c[k][j - 1][i - 1] = -value
        metric = None
        if stmt.metric:
            if len(stmt.metric) != dim or any(len(row) != dim for row in stmt.metric):
                raise _error(stmt, 'arity mismatch: metric must be %d x %d' % (dim, dim))
            metric = [list(row) for row in stmt.metric]
        return AlgebraSpec(stmt.name, c, metric)

    def bind_twist(self, stmt):
        with _semantic(stmt):
            T = TwistData(stmt.dim, stmt.degree)
        eta = evaluate(stmt.expr, T.chart)
        with _semantic(stmt, 'weight mismatch: '):
            T.eta = eta
        return T

    def bind_pair(self, stmt):
        if len(stmt.vector) != stmt.dim:
            raise _error(stmt, 'arity mismatch: v needs %d components' % stmt.dim)
        with _semantic(stmt):
            chart = twist_chart(stmt.dim, stmt.degree)
        v = [evaluate(e, chart) for e in stmt.vector]
        alpha = evaluate(stmt.alpha, chart)
        with _semantic(stmt, 'weight mismatch: '):
            return SymmetryPair(stmt.dim, stmt.degree, v, alpha)

    def bind_path(self, stmt):
        times, values, base = [], [], []
        for t, entries, point in stmt.rows:
            if len(entries) != stmt.dim * stmt.dim:
                raise _error(stmt, 'arity mismatch: %d entries per sample, expected %d'
                             % (len(entries), stmt.dim * stmt.dim))
            if len(point) != stmt.base:
                raise _error(stmt, 'arity mismatch: base point of length %d, expected %d'
                             % (len(point), stmt.base))
            times.append(float(t))
            values.append(np.array([float(x) for x in entries]).reshape(stmt.dim, stmt.dim))
            base.append([float(x) for x in point])
        with _semantic(stmt):
            return APath(times, values, base if stmt.base else None)

    def bind_load(self, stmt):
        if not self.build:
            return Pending(stmt.kind)
        path = os.path.join(self.options.base_dir, stmt.filename)
        try:
            with open(path) as fh:
                text = fh.read()
        except IOError as e:
            raise _error(stmt, 'cannot read %s: %s' % (stmt.filename, e.strerror))
        try:
            value = READERS[stmt.kind](text)
        except SourceError:
            raise
        except GradedError as e:
            if isinstance(e, (DomainError, PreconditionError, UnsupportedInputError)):
                raise _error(stmt, '%s: %s' % (stmt.filename, e))
            return Broken(stmt.kind, e)
        return GridBinding(value) if stmt.kind == 'grid' else value

    def _fiber(self, args, stmt):
        if not args:
            return None
        head = args[0]
        if head == 'scalar' and len(args) == 1:
            return 'scalar'
        if head == 'pair' and len(args) == 2 and _is_int(args[1]):
            return ('pair', int(args[1]))
        if len(args) == 1 and isinstance(head, str):
            return self.lookup(head, ('algebra',), stmt)
        raise _error(stmt, 'fiber must be scalar, pair N or an algebra name')

    def bind_complex(self, stmt):
        if stmt.model == 'double':
            if len(stmt.args) != 2 or not isinstance(stmt.args[0], str) or \
                    not _is_int(stmt.args[1]):
                raise _error(stmt, 'arity mismatch: double takes a complex and a degree')
            source = self.lookup(stmt.args[0], ('complex',), stmt)
            if not self.build:
                return Pending('complex')
            if isinstance(source, Broken):
                return source
            C = source.total.complex if isinstance(source, RelativeComplex) else source
            return self._built(lambda: closed(double(C, int(stmt.args[1])), stmt.name))
        if stmt.model not in MANIFOLDS:
            raise _error(stmt, 'unknown model %r, expected double or %s'
                         % (stmt.model, ', '.join(sorted(MANIFOLDS))))
        make, arity = MANIFOLDS[stmt.model]
        sizes = stmt.args[:arity]
        if len(sizes) != arity or not all(_is_int(s) for s in sizes):
            raise _error(stmt, 'arity mismatch: %s takes %d sizes' % (stmt.model, arity))
        fiber = self._fiber(stmt.args[arity:], stmt)
        if not self.build:
            return Pending('complex')

        def build():
            M = make(*[int(s) for s in sizes])
            if fiber is None:
                return cochain_complex(M.complex)
            if fiber == 'scalar':
                F = Fiber.scalar()
            elif isinstance(fiber, tuple):
                F = Fiber.symplectic_pair(fiber[1])
            else:
                F = Fiber.from_algebra(fiber.quadratic())
            return lattice_model(M, F)

        return self._built(build)

    def _built(self, build):
        try:
            return build()
        except GradedError as e:
            logger.warning('could not build complex: %s', e)
            return Broken('complex', e)

    def bind_grid(self, stmt):
        args = stmt.args
        if stmt.model == 'smooth':
            if not 2 <= len(args) <= 3 or not _is_int(args[0]) or \
                    not all(isinstance(a, Fraction) for a in args):
                raise _error(stmt, 'arity mismatch: smooth takes a size, an amplitude '
                                   'and an optional phase')
            spec = (int(args[0]), float(args[1]), float(args[2]) if len(args) == 3 else 0.0)
            make = lambda: smooth_grid(*spec)
        elif stmt.model == 'identity':
            if len(args) != 2 or not all(_is_int(a) for a in args):
                raise _error(stmt, 'arity mismatch: identity takes two sizes')
            spec = (int(args[0]), int(args[1]))
            make = lambda: identity_grid(*spec)
        else:
            raise _error(stmt, 'unknown grid model %r, expected identity or smooth' % stmt.model)
        if not self.build:
            return Pending('grid')
        try:
            return GridBinding(make(), stmt.model, spec)
        except GradedError as e:
            return Broken('grid', e)

    def bind_nmap(self, stmt):
        sigma = self.lookup(stmt.sigma, ('sigma',), stmt)
        with _semantic(stmt):
            return nmap_space(sigma, stmt.dim)

    # checks

    def _accepts(self, raw, kinds):
        if kinds == 'int':
            return _is_int(raw)
        if kinds == 'broken':
            return raw == 'broken'
        if kinds == 'coordinate':
            return isinstance(raw, str)
        return isinstance(raw, str) and self.kinds.get(raw) in kinds.split('|')

    def _argument(self, raw, kinds, stmt):
        if kinds == 'int':
            if not _is_int(raw):
                raise _error(stmt, 'expected an integer, got %s' % raw)
            return int(raw)
        if kinds == 'broken':
            return True
        if kinds == 'coordinate':
            if not isinstance(raw, str):
                raise _error(stmt, 'expected a coordinate name, got %s' % raw)
            return raw
        if not isinstance(raw, str):
            raise _error(stmt, 'expected a name, got %s' % raw)
        return self.lookup(raw, kinds.split('|'), stmt)

    def arguments(self, stmt):
        if stmt.check not in settings.GQ_CHECKS:
            raise _error(stmt, 'unknown check %r' % stmt.check)
        spec = SIGNATURES.get(stmt.check)
        if spec is None:
            return [self.bindings.get(a, a) for a in stmt.args]
        args, out = list(stmt.args), []
        usage = 'arity mismatch: %s takes %s' % (stmt.check, ' '.join(spec) or 'no arguments')
        for item in spec:
            kinds = item.lstrip('?*')
            if item.startswith('*'):
                while args:
                    out.append(self._argument(args.pop(0), kinds, stmt))
                break
            if not args:
                if item.startswith('?'):
                    continue
                raise _error(stmt, usage)
            if item.startswith('?') and not self._accepts(args[0], kinds):
                continue
            out.append(self._argument(args.pop(0), kinds, stmt))
        if args:
            raise _error(stmt, usage)
        return out

    def run_check(self, stmt):
        values = self.arguments(stmt)
        record = Record(stmt.check, tuple(str(a) for a in stmt.args), 'fail', stmt.expect)
        start = time.perf_counter()
        broken = [v for v in values if isinstance(v, Broken)]
        if broken:
            result = Result('fail', explanation='input could not be built: %s' % broken[0].error)
        else:
            handler = globals()[settings.GQ_CHECKS[stmt.check]]
            try:
                result = handler(self, *values)
            except SourceError:
                raise
            except (GradedError, np.linalg.LinAlgError) as e:
                result = Result('fail', _witness(getattr(e, 'witness', None)),
                                explanation=str(e))
        record.verdict = result.verdict
        record.witness = _witness(result.witness)
        record.residuals = result.residuals
        record.explanation = result.explanation
        record.ms = int(round((time.perf_counter() - start) * 1000))
        self.log.append((stmt.check, record.verdict, record.witness))
        logger.info('%s', record)
        return record


def analyze(program):
    """Semantic pass: names, kinds, weights and arities, without numerics."""
    session = Session(build=False)
    for stmt in program:
        if isinstance(stmt, CheckStmt):
            session.arguments(stmt)
        else:
            session.bind(stmt)
    return session


def execute(program, options=None):
    session = Session(options)
    report = Report()
    for stmt in program:
        if isinstance(stmt, CheckStmt):
            report.append(session.run_check(stmt))
        else:
            session.bind(stmt)
    return report


def run_source(source, options=None):
    return execute(parse(source), options)


# handlers; each takes the session and the resolved arguments

def _q_of(value):
    if isinstance(value, Derivation):
        return value
    if isinstance(value, TwistData):
        return twisted_q(value)
    if isinstance(value, AlgebroidData):
        return algebroid_to_q(value)
    if isinstance(value, AlgebraSpec):
        return chevalley_eilenberg(value.constants)[1]
    if isinstance(value, Hamiltonian):
        return hamiltonian_to_q(value.sigma, value.theta)
    raise UnsupportedInputError('no Q structure for %r' % (value,))


def check_q2(session, X):
    square = q_square(_q_of(X))
    terms = sum(len(p.terms) for p in square.components.values())
    if square.is_zero():
        return Result('pass', residuals={'terms': 0}, explanation='Q^2 = 0')
    return Result('fail', square, {'terms': terms}, 'Q^2 does not vanish')


def check_master(session, H):
    value = master_equation(H.sigma, H.theta)
    if value.is_zero():
        return Result('pass', explanation='{Theta, Theta} = 0')
    return Result('fail', value, {'terms': len(value.terms)}, '{Theta, Theta} does not vanish')


def check_jacobi(session, X):
    if isinstance(X, AlgebroidData):
        square = q_square(algebroid_to_q(X))
        return Result(_verdict(square.is_zero()), None if square.is_zero() else square,
                      explanation='anchor and bracket satisfy the algebroid identities'
                      if square.is_zero() else 'algebroid identities fail')
    defects = jacobi_defects(X.constants)
    ce_closed = q_square(chevalley_eilenberg(X.constants)[1]).is_zero()
    if ce_closed == bool(defects):
        return Result('fail', explanation='Chevalley-Eilenberg Q^2 disagrees with the '
                                          'Jacobi oracle')
    if defects:
        i, j, l, m = sorted(defects)[0]
        witness = '[[e%d, e%d], e%d] + cyclic has e%d component %s' % (
            i + 1, j + 1, l + 1, m + 1, defects[(i, j, l, m)])
        return Result('fail', witness, {'defects': len(defects)}, 'Jacobi identity fails')
    if X.metric is None:
        return Result('pass', explanation='Jacobi identity holds; no metric given')
    ext = central_extension(X.quadratic())
    return Result('pass', residuals={'basis': len(ext.basis)},
                  explanation='graded Jacobi, derivation and Q^2 = 0 hold on g + g[1] + R[2]')


def check_dirac(session, H, *coordinates):
    Q = hamiltonian_to_q(H.sigma, H.theta)
    reason = lambda_failure(H.sigma, Q, coordinates)
    if reason is None:
        return Result('pass', explanation='{%s} = 0 is Lagrangian and Q-invariant'
                                          % ', '.join(coordinates))
    return Result('fail', explanation=reason)


def _plain(C):
    if isinstance(C, RelativeComplex):
        return C.total.complex
    return C


def _relative(C):
    if not isinstance(C, RelativeComplex):
        raise UnsupportedInputError('complex has no pairing')
    return C


def check_lemma1(session, C, n):
    ok, shifted, expected = suspension_check(_plain(C), n)
    if ok:
        return Result('pass', explanation='relative cohomology over the %d-ball is H[%d]: %s'
                                          % (n, n, dict(sorted(shifted.items()))))
    return Result('fail', 'got %s, expected %s' % (dict(sorted(shifted.items())),
                                                   dict(sorted(expected.items()))),
                  explanation='suspension does not shift cohomology by %d' % n)


def check_lemma3(session, R):
    res = lemma3_orthogonality(_relative(R))
    residuals = dict(('quotient_%d' % k, v) for k, v in sorted(res.quotient_dims.items()))
    witness = None
    if res.verdict != 'pass':
        witness = 'equality by degree: %s' % dict(sorted(res.equality.items()))
    return Result(res.verdict, witness, residuals, res.explanation)


def check_stokes(session, R):
    R = _relative(R)
    failure = R.stokes_failure()
    if failure is None:
        return Result('pass', residuals={'degrees': len(R.total.complex.degrees)},
                      explanation='closed' if R.is_closed() else 'Stokes identity holds')
    return Result('fail', failure, explanation='Stokes identity fails in degree %d' % failure)


def check_boundary_lagrangian(session, R):
    R = _relative(R)
    res = boundary_lagrangian(R)
    residuals = {'image_dim': res.image_dim, 'boundary_dim': res.boundary_dim}
    if R.is_closed():
        return Result('pass', residuals=residuals, explanation='no boundary')
    explanation = 'image %d of %d, %s' % (res.image_dim, res.boundary_dim,
                                          'isotropic' if res.isotropic else 'not isotropic')
    return Result(_verdict(res.lagrangian), None, residuals, explanation)


def check_cocycle(session, G, cutoff, broken=False):
    witness = affine_cocycle_witness(G.quadratic(), cutoff, broken)
    if witness is None:
        return Result('pass', explanation='cocycle identity holds for modes |m| <= %d' % cutoff)
    (i, m), (j, n), (l, p), value = witness
    return Result('fail', 'e%d z^%d, e%d z^%d, e%d z^%d -> %s' % (i + 1, m, j + 1, n, l + 1, p,
                                                                 value),
                  explanation='cocycle identity fails')


def _within(residuals, tolerance):
    return all(v <= tolerance for v in residuals.values())


def check_holonomy(session, P, other=None):
    opts = session.options
    g = integrate(P, opts.steps).holonomy
    residuals = {}
    if all(abs(np.trace(a)) < 1e-14 for a in P.values):
        residuals['determinant'] = float(abs(np.linalg.det(g) - 1.0))
    back = integrate(concatenate(P, reverse(P)), opts.steps).holonomy
    residuals['inverse'] = float(np.abs(back - np.eye(len(g))).max())
    if np.all(P.values == P.values[0]):
        residuals['expm'] = float(np.abs(g - expm(P.values[0])).max())
    if other is not None:
        h = integrate(other, opts.steps).holonomy
        gh = integrate(concatenate(P, other), opts.steps).holonomy
        residuals['product'] = float(np.abs(gh - g @ h).max())
    return Result(_verdict(_within(residuals, opts.tolerance)), None, residuals,
                  'holonomy residuals against tolerance %g' % opts.tolerance)


def _reparametrization(P, samples=4001):
    """Grid for ``phi(s) = (s + s^2) / 2`` refined at the preimages of the knots."""
    knots = (np.sqrt(1.0 + 8.0 * P.times) - 1.0) / 2.0
    s = np.unique(np.concatenate([np.linspace(0.0, 1.0, samples), knots]))
    s[0], s[-1] = 0.0, 1.0
    return s, (s + s * s) / 2.0


def check_reparam(session, P):
    s, phi = _reparametrization(P)
    residual = reparametrize_check(P, s, phi, session.options.steps)
    return Result(_verdict(residual <= session.options.tolerance), None,
                  {'reparametrization': residual}, 'phi(s) = (s + s^2)/2')


def check_order(session, P):
    order = convergence_order(P)
    window = settings.GQ_NUMERIC['order_window']
    ok = not math.isnan(order) and abs(order - 4.0) <= window
    return Result(_verdict(ok), None, {'order': order},
                  'observed order %.3f, expected 4 +- %g' % (order, window))


def check_action(session, P):
    try:
        G = action_integrate(P, None, session.options.steps)
    except InconsistentPathError as e:
        return Result('fail', None, {'anchor': e.residual}, str(e))
    transport = float(np.abs(G.target - G.transported).max())
    residuals = {'anchor': anchor_residual(P), 'transport': transport}
    return Result(_verdict(transport <= session.options.tolerance), None, residuals,
                  'target %s' % np.array2string(G.target, precision=6))


def check_wzw(session, W):
    tolerance = session.options.tolerance
    grid = W.grid
    unit = inverse(grid) * grid
    one = np.zeros(4)
    one[0] = 1.0
    residuals = {
        'inverse': float(max(np.abs(unit.f - one).max(), np.abs(unit.omega).max())),
    }
    same = grid * identity_grid(*grid.shape)
    residuals['identity'] = float(max(np.abs(same.f - grid.f).max(),
                                      np.abs(same.omega - grid.omega).max()))
    ok = _within(residuals, tolerance)
    explanation = 'identity and inverse'
    if W.model == 'smooth':
        size, amplitude, phase = W.args
        fine = 4 * (size - 1) + 1
        coarse_defect = associativity_defect(*[smooth_grid(size, amplitude, phase + k)
                                               for k in range(3)])
        fine_defect = associativity_defect(*[smooth_grid(fine, amplitude, phase + k)
                                             for k in range(3)])
        residuals['defect_coarse'] = float(coarse_defect)
        residuals['defect_fine'] = float(fine_defect)
        residuals['order'] = observed_order(coarse_defect, fine_defect, 4.0)
        ok = ok and fine_defect < coarse_defect / 8.0
        explanation += '; associativity defect shrinks from %d to %d nodes' % (size, fine)
    return Result(_verdict(ok), None, residuals, explanation)


def check_gauge(session, T, alpha):
    consistent = gauge_consistent(T, alpha)
    changed = gauge_change(T, alpha)
    flat = q_square(twisted_q(T)).is_zero() == q_square(twisted_q(changed)).is_zero()
    explanation = 'eta + d alpha = %s' % changed.eta
    if consistent and flat:
        return Result('pass', explanation=explanation)
    return Result('fail', changed.eta, explanation=explanation + (
        '; conjugated Q differs' if not consistent else '; flatness changed'))


def check_cartan(session, G):
    g = G.quadratic()
    eta = cartan_3form(g)
    return Result(_verdict(cartan_closed(g)), None, {'terms': len(eta.terms)},
                  'eta = %s' % eta)


def check_iota(session, s):
    square_zero = iota_square(s).is_zero()
    contraction_zero = contract(s.v, s.alpha).is_zero()
    return Result(_verdict(square_zero == contraction_zero), None, {},
                  '[iota, iota] = 0: %s; v -| alpha = 0: %s' % (square_zero, contraction_zero))


def check_bracket(session, s1, s2):
    derived = derived_symmetry_bracket(s1, s2)
    direct = symmetry_bracket(s1, s2)
    if derived == direct:
        return Result('pass', explanation='[[Q, iota1], iota2] decodes to %r' % direct)
    return Result('fail', '%r != %r' % (derived, direct), explanation='decoded brackets differ')


def check_leibniz(session, a, b, c):
    br = symmetry_bracket
    lhs = br(a, br(b, c))
    rhs = br(br(a, b), c) + br(b, br(a, c))
    if lhs == rhs:
        return Result('pass', explanation='left Leibniz identity holds')
    return Result('fail', '%r != %r' % (lhs, rhs), explanation='left Leibniz identity fails')


def check_skew(session, s1=None, s2=None):
    if s1 is None or s2 is None:
        found = find_nonskew_witness()
        if found is None:
            return Result('pass', explanation='every candidate pair brackets antisymmetrically')
        s1, s2 = found
    total = symmetry_bracket(s1, s2) + symmetry_bracket(s2, s1)
    if total.is_zero():
        return Result('pass', explanation='bracket is antisymmetric on these pairs')
    relation = 'equals' if total == symmetric_defect(s1, s2) else 'differs from'
    return Result('fail', '%r, %r' % (s1, s2),
                  explanation='symmetric part %r %s [Q, [iota1, iota2]]' % (total, relation))


def check_pairing(session, R, *expected):
    res = cohomology_pairing(_relative(R).total)
    dims = [res.dims[k] for k in sorted(res.dims)]
    residuals = dict(('h%d' % k, res.dims[k]) for k in sorted(res.dims))
    ok = res.nondegenerate and (not expected or tuple(dims) == tuple(expected))
    explanation = 'H = %s, induced pairing %s' % (
        tuple(dims), 'nondegenerate' if res.nondegenerate else 'degenerate')
    return Result(_verdict(ok), None, residuals, explanation)


def check_nmap(session, N):
    expected = all(len(subsets) == math.comb(N.n, weight) if weight <= N.n else not subsets
                   for _, weight, subsets in N.components)
    ok = expected and N.is_nondegenerate()
    return Result(_verdict(ok), None, {'total_dim': N.total_dim},
                  'components %s' % ', '.join('%s:%d' % item for item in N.dims.items()))


def _random_function(rng, chart, names):
    """Polynomial of degree <= 2 in ``names`` with small integer coefficients."""
    monomials = [()] + [(a,) for a in names]
    monomials += [(a, b) for i, a in enumerate(names) for b in names[i:]]
    out = chart.zero()
    for mono in monomials:
        c = int(rng.integers(-2, 3))
        if c:
            term = chart.const(c)
            for a in mono:
                term = term * chart.gen(a)
            out = out + term
    return out


def check_dorfman(session, H, count=10):
    sigma = H.sigma
    names = base_names(sigma)
    rng = session.rng()
    chart = sigma.chart
    for trial in range(count):
        X, xi, Y, zeta = [[_random_function(rng, chart, names) for _ in names] for _ in range(4)]
        e1, e2 = section(sigma, X, xi), section(sigma, Y, zeta)
        got = split_section(sigma, derived_bracket(sigma, H.theta, e1, e2))
        want = dorfman_oracle(names, X, xi, Y, zeta)
        if [list(part) for part in got] != [list(part) for part in want]:
            return Result('fail', '%s, %s' % (e1, e2), {'trials': trial + 1},
                          'derived bracket differs from the Dorfman bracket')
    return Result('pass', residuals={'trials': count},
                  explanation='derived bracket equals the Dorfman bracket on %d random pairs'
                              % count)


def check_poisson(session, H):
    sigma = H.sigma
    if sigma.n != 1:
        raise PreconditionError('Poisson structures live on degree 1 charts')
    names = base_names(sigma)
    chart = sigma.chart
    pi = [[derived_bracket(sigma, H.theta, chart.gen(a), chart.gen(b)) for b in names]
          for a in names]
    rebuilt = chart.zero()
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            rebuilt = rebuilt + pi[i][j] * chart.gen(sigma.partner(b)) * \
                chart.gen(sigma.partner(a)) * Fraction(1, 2)
    master_zero = master_equation(sigma, H.theta).is_zero()
    schouten = schouten_jacobi(pi, names)
    agree = master_zero == (not schouten)
    ok = agree and rebuilt == H.theta
    explanation = 'bivector is %sPoisson; master equation and Schouten-Jacobi %s' % (
        '' if master_zero else 'not ', 'agree' if agree else 'disagree')
    if rebuilt != H.theta:
        explanation += '; Hamiltonian is not quadratic in the momenta'
    return Result(_verdict(ok), None, {'defects': len(schouten)}, explanation)


def check_scaling(session, F, lam=2):
    return Result(_verdict(scaling_check(F, lam)), None, {},
                  'rescaling by %d multiplies by %d^%s' % (lam, lam, weight_of(F)))


# one-shot programs for ``gq check NAME``

COURANT2 = ('sigma S deg 2 pairs { (x1:0, p1:2) -1; (x2:0, p2:2) -1; (theta1:1, chi1:1); '
            '(theta2:1, chi2:1); } ')
PAIRS = ('pair A dim 2 deg 2 { v = (x2, 0); alpha = x1*xi1; } '
         'pair B dim 2 deg 2 { v = (1, x1); alpha = xi2; } '
         'pair C dim 2 deg 2 { v = (0, x2); alpha = x2*xi1 + xi2; } ')
ROTATION = ('path P dim 3 { 0: 0 -1/2 1/5 1/2 0 -3/10 -1/5 3/10 0; '
            '1: 0 -1/2 1/5 1/2 0 -3/10 -1/5 3/10 0; } ')
CANNED = {
    'q2': 'chart X { x1:0; x2:0; xi1:1; xi2:1; } '
          'qfield Q on X { x1 -> xi1; x2 -> xi2; } check q2 Q;',
    'master': 'sigma S deg 2 pairs { (x:0, p:2); (theta:1, chi:1); } '
              'ham TH on S = theta*p; check master TH;',
    'jacobi': 'algebra G = so3; check jacobi G;',
    'dirac': 'sigma S deg 1 pairs { (x1:0, p1:1); (x2:0, p2:1); } '
             'ham TH on S = x1*p2*p1; check dirac TH x2 p1;',
    'lemma1': 'complex C = circle 3; check lemma1 C 1;',
    'lemma3': 'complex C = circle 3; complex D = double C 1; check lemma3 D;',
    'stokes': 'algebra G = so3; complex R = cylinder 3 1 G; check stokes R;',
    'boundary-lagrangian': 'algebra G = so3; complex R = cylinder 3 1 G; '
                           'check boundary-lagrangian R;',
    'cocycle': 'algebra G = so3; check cocycle G 4;',
    'holonomy': ROTATION + 'check holonomy P;',
    'reparam': ROTATION + 'check reparam P;',
    'order': ROTATION + 'check order P;',
    'action': 'path A dim 2 base 2 { 0: 0 1 0 0 | 1 0; 1: 0 1 0 0 | 1 1; } check action A;',
    'wzw': 'grid W = smooth 9 1/2; check wzw W;',
    'gauge': 'twist T dim 3 deg 2 = x1*xi1*xi2*xi3; form F on T = x2*xi1*xi3; '
             'check gauge T F;',
    'cartan': 'algebra G = so3; check cartan G;',
    'iota': PAIRS + 'check iota A;',
    'bracket': PAIRS + 'check bracket A B;',
    'leibniz': PAIRS + 'check leibniz A B C;',
    'skew': 'check skew expect fail;',
    'pairing': 'algebra G = so3; complex M = torus 3 3 G; check pairing M 3 6 3;',
    'nmap': 'sigma S deg 2 pairs { (x:0, p:2); (theta:1, chi:1); } nmap N of S dim 2; '
            'check nmap N;',
    'dorfman': COURANT2 + 'ham TH on S = theta1*p1 + theta2*p2; check dorfman TH;',
    'poisson': 'sigma S deg 1 pairs { (x1:0, p1:1); (x2:0, p2:1); } '
               'ham TH on S = x1*p2*p1; check poisson TH;',
    'scaling': 'chart X { x:0; xi:1; y:2; } form F on X = x*xi*y; check scaling F 3;',
}
