"""
Tokenizer, grammar and source rendering for ``.gq`` programs.

A program is a list of semicolon-terminated statements:

    >>> program = parse('chart X { x:0; xi:1; } qfield Q on X { xi -> 0; x -> xi; } check q2 Q;')
    >>> len(program)
    3
    >>> print(program[2])
    check q2 Q;

Positions are kept on every node for error messages but never take part
in comparisons, so ``parse(render_source(p)) == p``.
"""
import re
from dataclasses import dataclass, field
from fractions import Fraction

from gradedq.exceptions import ParseError, SemanticError

KEYWORDS = ('algebra', 'algebroid', 'chart', 'check', 'complex', 'form', 'grid', 'ham', 'load',
            'nmap', 'pair', 'path', 'qfield', 'sigma', 'twist')

TOKEN_SPEC = [
    ('comment', r'#[^\n]*'),
    ('newline', r'\n'),
    ('space', r'[ \t\r]+'),
    ('number', r'\d+(?:\.\d+)?(?:/\d+)?'),
    ('string', r'"[^"\n]*"'),
    ('name', r'[A-Za-z_][A-Za-z0-9_]*'),
    ('arrow', r'->'),
    ('op', r'[{}()\[\];:,=+\-*^|]'),
    ('error', r'.'),
]
TOKEN_RE = re.compile('|'.join('(?P<%s>%s)' % pair for pair in TOKEN_SPEC))


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    column: int

    @property
    def end(self):
        return self.column + len(self.value)


def tokenize(source):
    line, start = 1, 0
    out = []
    for m in TOKEN_RE.finditer(source):
        kind, value = m.lastgroup, m.group()
        column = m.start() - start + 1
        if kind == 'newline':
            line += 1
            start = m.end()
        elif kind == 'error':
            raise ParseError(value, ('a token',), line, column)
        elif kind not in ('space', 'comment'):
            out.append(Token(kind, value, line, column))
    out.append(Token('eof', '', line, len(source) - start + 1))
    return out


# expressions

@dataclass(frozen=True)
class Num:
    value: Fraction
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Var:
    name: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def __str__(self):
        return '(%s %s %s)' % (self.left, self.op, self.right)


@dataclass(frozen=True)
class Neg:
    operand: object
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def __str__(self):
        return '(-%s)' % (self.operand,)


@dataclass(frozen=True)
class Deriv:
    operand: object
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def __str__(self):
        return 'd(%s)' % (self.operand,)


def _num(x):
    return str(x)


def _body(items):
    return ' '.join(items)


class Statement:
    """Base for statements; ``__str__`` renders the statement as source."""

    def render(self):
        raise NotImplementedError

    def __str__(self):
        return self.render()

    @property
    def names(self):
        # names this statement binds
        return (self.name,)


def _pos():
    return field(default=0, compare=False)


@dataclass(frozen=True)
class ChartStmt(Statement):
    name: str
    variables: tuple
    line: int = _pos()
    column: int = _pos()

    def render(self):
        return 'chart %s { %s }' % (self.name, _body('%s:%d;' % v for v in self.variables))


@dataclass(frozen=True)
class QFieldStmt(Statement):
    name: str
    chart: str
    degree: int
    components: tuple
    line: int = _pos()
    column: int = _pos()

    def render(self):
        return 'qfield %s on %s deg %d { %s }' % (
            self.name, self.chart, self.degree,
            _body('%s -> %s;' % (v, e) for v, e in self.components))


@dataclass(frozen=True)
class SigmaStmt(Statement):
    name: str
    degree: int
    pairs: tuple
    coefficients: tuple
    line: int = _pos()
    column: int = _pos()

    def render(self):
        return 'sigma %s deg %d pairs { %s }' % (
            self.name, self.degree,
            _body('(%s:%d, %s:%d)%s;' % (q, k, p, w, '' if c == 1 else ' ' + _num(c))
                  for ((q, k), (p, w)), c in zip(self.pairs, self.coefficients)))


@dataclass(frozen=True)
class HamStmt(Statement):
    name: str
    sigma: str
    expr: object
    line: int = _pos()
    column: int = _pos()

    def render(self):
        return 'ham %s on %s = %s;' % (self.name, self.sigma, self.expr)


@dataclass(frozen=True)
class FormStmt(Statement):
    name: str
    target: str
    expr: object
    line: int = _pos()
    column: int = _pos()

    def render(self):
        return 'form %s on %s = %s;' % (self.name, self.target, self.expr)


@dataclass(frozen=True)
class AlgebroidStmt(Statement):
    name: str
    base: tuple
    fibers: tuple
    anchors: tuple
    structure: tuple
    line: int = _pos()
    column: int = _pos()

    def render(self):
        body = ['rho(%s, %s) = %s;' % (e, x, v) for (e, x), v in self.anchors]
        body += ['c(%s, %s, %s) = %s;' % (i, j, k, v) for (i, j, k), v in self.structure]
        return 'algebroid %s base (%s) fibers (%s) { %s }' % (
            self.name, ', '.join(self.base), ', '.join(self.fibers), _body(body))


@dataclass(frozen=True)
class AlgebraStmt(Statement):
    name: str
    builtin: str = None
    dim: int = 0
    brackets: tuple = ()
    metric: tuple = ()
    line: int = _pos()
    column: int = _pos()

    def render(self):
        if self.builtin == 'abelian':
            return 'algebra %s = abelian %d;' % (self.name, self.dim)
        if self.builtin:
            return 'algebra %s = %s;' % (self.name, self.builtin)
        out = 'algebra %s dim %d { %s }' % (self.name, self.dim, _body(
            '(%d, %d) -> %s;' % (i, j, ' '.join(_num(c) for c in cs)) for (i, j), cs in self.brackets))
        if self.metric:
            out += ' metric { %s }' % _body(' '.join(_num(c) for c in row) + ';'
                                            for row in self.metric)
        return out


@dataclass(frozen=True)
class TwistStmt(Statement):
    name: str
    dim: int
    degree: int
    expr: object
    line: int = _pos()
    column: int = _pos()

    def render(self):
        return 'twist %s dim %d deg %d = %s;' % (self.name, self.dim, self.degree, self.expr)


@dataclass(frozen=True)
class PairStmt(Statement):
    name: str
    dim: int
    degree: int
    vector: tuple
    alpha: object
    line: int = _pos()
    column: int = _pos()

    def render(self):
        return 'pair %s dim %d deg %d { v = (%s); alpha = %s; }' % (
            self.name, self.dim, self.degree, ', '.join(str(e) for e in self.vector), self.alpha)


@dataclass(frozen=True)
class PathStmt(Statement):
    name: str
    dim: int
    base: int
    rows: tuple
    line: int = _pos()
    column: int = _pos()

    def render(self):
        rows = []
        for t, entries, point in self.rows:
            row = '%s: %s' % (_num(t), ' '.join(_num(c) for c in entries))
            if point:
                row += ' | %s' % ' '.join(_num(c) for c in point)
            rows.append(row + ';')
        head = 'path %s dim %d' % (self.name, self.dim)
        if self.base:
            head += ' base %d' % self.base
        return '%s { %s }' % (head, _body(rows))


@dataclass(frozen=True)
class LoadStmt(Statement):
    kind: str
    name: str
    filename: str
    line: int = _pos()
    column: int = _pos()

    def render(self):
        return 'load %s %s "%s";' % (self.kind, self.name, self.filename)


@dataclass(frozen=True)
class ComplexStmt(Statement):
    name: str
    model: str
    args: tuple
    line: int = _pos()
    column: int = _pos()

    def render(self):
        return 'complex %s = %s %s;' % (self.name, self.model, ' '.join(str(a) for a in self.args))


@dataclass(frozen=True)
class GridStmt(Statement):
    name: str
    model: str
    args: tuple
    line: int = _pos()
    column: int = _pos()

    def render(self):
        return 'grid %s = %s %s;' % (self.name, self.model, ' '.join(_num(a) for a in self.args))


@dataclass(frozen=True)
class NMapStmt(Statement):
    name: str
    sigma: str
    dim: int
    line: int = _pos()
    column: int = _pos()

    def render(self):
        return 'nmap %s of %s dim %d;' % (self.name, self.sigma, self.dim)


@dataclass(frozen=True)
class CheckStmt(Statement):
    check: str
    args: tuple
    expect: str = 'pass'
    line: int = _pos()
    column: int = _pos()

    @property
    def names(self):
        return ()

    def render(self):
        out = 'check %s' % ' '.join((self.check,) + tuple(str(a) for a in self.args))
        if self.expect != 'pass':
            out += ' expect %s' % self.expect
        return out + ';'


class Program(list):
    """Statements in source order."""

    def __str__(self):
        return render_source(self)


class Parser:

    def __init__(self, source):
        self.tokens = tokenize(source)
        self.pos = 0

    # token helpers

    @property
    def tok(self):
        return self.tokens[self.pos]

    def advance(self):
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def at(self, *values):
        return self.tok.kind != 'string' and self.tok.value in values

    def fail(self, *expected):
        t = self.tok
        raise ParseError(t.value or 'end of input', expected, t.line, t.column)

    def expect(self, value):
        if self.tok.value != value or self.tok.kind == 'string':
            self.fail(repr(value))
        return self.advance()

    def name(self):
        if self.tok.kind != 'name':
            self.fail('identifier')
        return self.advance().value

    def integer(self, signed=False):
        sign = 1
        if signed and self.at('-'):
            self.advance()
            sign = -1
        t = self.tok
        if t.kind != 'number' or not t.value.isdigit():
            self.fail('integer')
        self.advance()
        return sign * int(t.value)

    def number(self):
        sign = 1
        if self.at('-'):
            self.advance()
            sign = -1
        if self.tok.kind != 'number':
            self.fail('number')
        return sign * Fraction(self.advance().value)

    def string(self):
        if self.tok.kind != 'string':
            self.fail('string')
        return self.advance().value[1:-1]

    # grammar

    def program(self):
        out = Program()
        while self.tok.kind != 'eof':
            out.append(self.statement())
        return out

    def statement(self):
        t = self.tok
        if t.kind != 'name' or t.value not in KEYWORDS:
            self.fail(*KEYWORDS)
        self.advance()
        return getattr(self, 'stmt_' + t.value)(t.line, t.column)

    def stmt_chart(self, line, column):
        name = self.name()
        self.expect('{')
        variables = []
        while not self.at('}'):
            var = self.name()
            self.expect(':')
            weight = self.integer(signed=True)
            self.expect(';')
            variables.append((var, weight))
        self.expect('}')
        return ChartStmt(name, tuple(variables), line, column)

    def stmt_qfield(self, line, column):
        name = self.name()
        self.expect('on')
        chart = self.name()
        degree = 1
        if self.at('deg'):
            self.advance()
            degree = self.integer(signed=True)
        self.expect('{')
        comps = []
        while not self.at('}'):
            var = self.name()
            self.expect('->')
            comps.append((var, self.expr()))
            self.expect(';')
        self.expect('}')
        return QFieldStmt(name, chart, degree, tuple(comps), line, column)

    def stmt_sigma(self, line, column):
        name = self.name()
        self.expect('deg')
        degree = self.integer()
        self.expect('pairs')
        self.expect('{')
        pairs, coefficients = [], []
        while not self.at('}'):
            self.expect('(')
            q = self.name()
            self.expect(':')
            k = self.integer(signed=True)
            self.expect(',')
            p = self.name()
            self.expect(':')
            w = self.integer(signed=True)
            self.expect(')')
            c = Fraction(1)
            if not self.at(';'):
                if not self.at('-') and self.tok.kind != 'number':
                    self.fail("';'", 'number')
                c = self.number()
            self.expect(';')
            pairs.append(((q, k), (p, w)))
            coefficients.append(c)
        self.expect('}')
        return SigmaStmt(name, degree, tuple(pairs), tuple(coefficients), line, column)

    def stmt_ham(self, line, column):
        name = self.name()
        self.expect('on')
        sigma = self.name()
        self.expect('=')
        expr = self.expr()
        self.expect(';')
        return HamStmt(name, sigma, expr, line, column)

    def stmt_form(self, line, column):
        name = self.name()
        self.expect('on')
        target = self.name()
        self.expect('=')
        expr = self.expr()
        self.expect(';')
        return FormStmt(name, target, expr, line, column)

    def _names(self):
        self.expect('(')
        out = [self.name()]
        while self.at(','):
            self.advance()
            out.append(self.name())
        self.expect(')')
        return tuple(out)

    def stmt_algebroid(self, line, column):
        name = self.name()
        self.expect('base')
        base = self._names()
        self.expect('fibers')
        fibers = self._names()
        self.expect('{')
        anchors, structure = [], []
        while not self.at('}'):
            if self.at('rho'):
                self.advance()
                args = self._names()
                if len(args) != 2:
                    raise SemanticError('rho takes a fiber and a base coordinate',
                                        self.tok.line, self.tok.column)
                self.expect('=')
                anchors.append((args, self.expr()))
            elif self.at('c'):
                self.advance()
                args = self._names()
                if len(args) != 3:
                    raise SemanticError('c takes three fiber names', self.tok.line, self.tok.column)
                self.expect('=')
                structure.append((args, self.expr()))
            else:
                self.fail("'c'", "'rho'", "'}'")
            self.expect(';')
        self.expect('}')
        return AlgebroidStmt(name, base, fibers, tuple(anchors), tuple(structure), line, column)

    def stmt_algebra(self, line, column):
        name = self.name()
        if self.at('='):
            self.advance()
            if self.at('so3', 'sl2'):
                builtin = self.advance().value
                self.expect(';')
                return AlgebraStmt(name, builtin, 3, line=line, column=column)
            if self.at('abelian'):
                self.advance()
                dim = self.integer()
                self.expect(';')
                return AlgebraStmt(name, 'abelian', dim, line=line, column=column)
            self.fail("'abelian'", "'sl2'", "'so3'")
        self.expect('dim')
        dim = self.integer()
        self.expect('{')
        brackets = []
        while not self.at('}'):
            self.expect('(')
            i = self.integer()
            self.expect(',')
            j = self.integer()
            self.expect(')')
            self.expect('->')
            coeffs = []
            while not self.at(';'):
                coeffs.append(self.number())
            self.expect(';')
            brackets.append(((i, j), tuple(coeffs)))
        self.expect('}')
        metric = []
        if self.at('metric'):
            self.advance()
            self.expect('{')
            while not self.at('}'):
                row = []
                while not self.at(';'):
                    row.append(self.number())
                self.expect(';')
                metric.append(tuple(row))
            self.expect('}')
        return AlgebraStmt(name, None, dim, tuple(brackets), tuple(metric), line, column)

    def stmt_twist(self, line, column):
        name = self.name()
        self.expect('dim')
        dim = self.integer()
        self.expect('deg')
        degree = self.integer()
        self.expect('=')
        expr = self.expr()
        self.expect(';')
        return TwistStmt(name, dim, degree, expr, line, column)

    def stmt_pair(self, line, column):
        name = self.name()
        self.expect('dim')
        dim = self.integer()
        self.expect('deg')
        degree = self.integer()
        self.expect('{')
        self.expect('v')
        self.expect('=')
        self.expect('(')
        vector = [self.expr()]
        while self.at(','):
            self.advance()
            vector.append(self.expr())
        self.expect(')')
        self.expect(';')
        self.expect('alpha')
        self.expect('=')
        alpha = self.expr()
        self.expect(';')
        self.expect('}')
        return PairStmt(name, dim, degree, tuple(vector), alpha, line, column)

    def stmt_path(self, line, column):
        name = self.name()
        self.expect('dim')
        dim = self.integer()
        base = 0
        if self.at('base'):
            self.advance()
            base = self.integer()
        self.expect('{')
        rows = []
        while not self.at('}'):
            t = self.number()
            self.expect(':')
            entries, point = [], []
            while not self.at(';', '|'):
                entries.append(self.number())
            if self.at('|'):
                self.advance()
                while not self.at(';'):
                    point.append(self.number())
            self.expect(';')
            rows.append((t, tuple(entries), tuple(point)))
        self.expect('}')
        return PathStmt(name, dim, base, tuple(rows), line, column)

    def stmt_load(self, line, column):
        if not self.at('path', 'grid', 'complex'):
            self.fail("'complex'", "'grid'", "'path'")
        kind = self.advance().value
        name = self.name()
        filename = self.string()
        self.expect(';')
        return LoadStmt(kind, name, filename, line, column)

    def _words(self):
        args = []
        while not self.at(';'):
            if self.tok.kind == 'name':
                args.append(self.advance().value)
            else:
                args.append(self.number())
        self.expect(';')
        return tuple(args)

    def stmt_complex(self, line, column):
        name = self.name()
        self.expect('=')
        model = self.name()
        return ComplexStmt(name, model, self._words(), line, column)

    def stmt_grid(self, line, column):
        name = self.name()
        self.expect('=')
        model = self.name()
        return GridStmt(name, model, self._words(), line, column)

    def stmt_nmap(self, line, column):
        name = self.name()
        self.expect('of')
        sigma = self.name()
        self.expect('dim')
        dim = self.integer()
        self.expect(';')
        return NMapStmt(name, sigma, dim, line, column)

    def stmt_check(self, line, column):
        check = self.name()
        # hyphenated check names such as boundary-lagrangian
        while self.at('-'):
            prev, nxt = self.tokens[self.pos - 1], self.tokens[self.pos + 1]
            if nxt.kind != 'name' or self.tok.column != prev.end or nxt.column != self.tok.end \
                    or nxt.line != prev.line:
                break
            self.advance()
            check += '-' + self.advance().value
        args, expect = [], 'pass'
        while not self.at(';'):
            if self.at('expect'):
                self.advance()
                if not self.at('fail', 'pass'):
                    self.fail("'fail'", "'pass'")
                expect = self.advance().value
                break
            if self.tok.kind == 'name':
                args.append(self.advance().value)
            else:
                args.append(self.number())
        self.expect(';')
        return CheckStmt(check, tuple(args), expect, line, column)

    # expressions: sum of products of powers

    def expr(self):
        left = self.term()
        while self.at('+', '-'):
            op = self.advance()
            left = BinOp(op.value, left, self.term(), op.line, op.column)
        return left

    def term(self):
        left = self.factor()
        while self.at('*'):
            op = self.advance()
            left = BinOp('*', left, self.factor(), op.line, op.column)
        return left

    def factor(self):
        if self.at('-'):
            t = self.advance()
            return Neg(self.factor(), t.line, t.column)
        base = self.atom()
        if self.at('^'):
            op = self.advance()
            t = self.tok
            exponent = self.integer()
            return BinOp('^', base, Num(Fraction(exponent), t.line, t.column), op.line, op.column)
        return base

    def atom(self):
        t = self.tok
        if t.kind == 'number':
            self.advance()
            return Num(Fraction(t.value), t.line, t.column)
        if self.at('('):
            self.advance()
            inner = self.expr()
            self.expect(')')
            return inner
        if t.kind == 'name':
            self.advance()
            if t.value == 'd' and self.at('('):
                self.advance()
                inner = self.expr()
                self.expect(')')
                return Deriv(inner, t.line, t.column)
            return Var(t.value, t.line, t.column)
        self.fail('(', 'identifier', 'number')


def parse(source):
    """Syntax and static checks; raises ParseError or SemanticError."""
    program = Parser(source).program()
    from gradedq.language.checks import analyze
    analyze(program)
    return program


def parse_syntax(source):
    return Parser(source).program()


def render_source(program):
    return '\n'.join(str(s) for s in program) + ('\n' if program else '')
