"""Exception hierarchy shared by every exegete module."""

from __future__ import annotations


class ExegeteError(Exception):
    """Base class for all errors raised by this package."""


class SpaceMismatch(ExegeteError):
    """Two objects built over different state spaces were combined."""


class StateCapExceeded(ExegeteError):
    """A declared state space is larger than the configured cap."""


class ParseError(ExegeteError):
    """Malformed program, predicate, term, or spec-file text.

    Carries the 1-based line and column of the offending token so
    callers can point at the exact spot in the source.
    """

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class SemanticError(ExegeteError):
    """Well-formed input that does not make sense over the given space.

    Examples: an identifier that is neither a variable nor a domain
    value, an assignment that leaves the variable's domain, an order
    comparison between unrelated enumerations, or an unbound symbol in
    a term.
    """
