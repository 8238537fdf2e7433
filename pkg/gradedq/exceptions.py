"""
Errors raised by the kernel.

Everything derives from ``GradedError`` so a session can turn any failure
inside a check into a failed record instead of a crash.
"""


class GradedError(Exception):
    pass


class DomainError(GradedError):
    """Inputs live in different universes (charts, grids, matrix sizes)."""


class PreconditionError(GradedError):
    """Wrong degree, wrong weight or an inhomogeneous input."""


class StructureError(GradedError):
    """A structural identity fails; ``witness`` holds the offending data."""

    def __init__(self, message, witness=None):
        GradedError.__init__(self, message)
        self.witness = witness


class CompositionError(GradedError):
    pass


class InconsistentPathError(GradedError):
    def __init__(self, message, residual=None):
        GradedError.__init__(self, message)
        self.residual = residual


class UnsupportedInputError(GradedError):
    pass


class SourceError(GradedError):
    """Base for errors tied to a position in DSL source."""

    def __init__(self, message, line=0, column=0):
        GradedError.__init__(self, message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self):
        return '%d:%d: %s' % (self.line, self.column, self.message)


class ParseError(SourceError):
    def __init__(self, token, expected, line=0, column=0):
        self.token = token
        self.expected = tuple(sorted(expected))
        message = 'unexpected %r, expected %s' % (token, ' | '.join(self.expected))
        SourceError.__init__(self, message, line, column)


class SemanticError(SourceError):
    pass
