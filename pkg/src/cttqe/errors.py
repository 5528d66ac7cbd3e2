"""Exception hierarchy shared by every module of the kernel."""

from __future__ import annotations


class CttqeError(Exception):
    """Base class for all kernel errors."""


class TypeMismatch(CttqeError):
    pass


class QuoteNotEvalFree(CttqeError):
    pass


class EvalArgNotEpsilon(CttqeError):
    pass


class NotEvalFree(CttqeError):
    pass


class ImproperConstruction(CttqeError):
    def __init__(self, reason: str, path: tuple = ()):
        super().__init__(reason)
        self.reason = reason
        self.path = path


class NotAConstructionLiteral(CttqeError):
    pass


class HoleNotEpsilon(CttqeError):
    pass


class NotDefined(CttqeError):
    pass


class MissingConstant(CttqeError):
    pass


class NotAPolynomial(CttqeError):
    pass


class NotAVariable(CttqeError):
    pass


class UnsupportedEquality(CttqeError):
    pass


class FuelExhausted(CttqeError):
    pass


class SubstitutionBlocked(CttqeError):
    pass


class ParseError(CttqeError):
    def __init__(self, message: str, span=None):
        self.message = message
        self.span = span
        where = f"{span}: " if span is not None else ""
        super().__init__(where + message)


class HoleOutsideQuote(ParseError):
    pass
