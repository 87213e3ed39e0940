"""Exception hierarchy shared by every mplang module."""


class MPLangError(Exception):
    """Base class for all mplang errors."""


class ParseError(MPLangError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownActivationError(MPLangError, KeyError):
    def __str__(self):
        return f"unknown activation {self.args[0]!r}"


class FeatureIndexError(MPLangError, IndexError):
    pass


class GraphFormatError(MPLangError, ValueError):
    pass


class DimensionError(MPLangError, ValueError):
    pass


class NotAffineError(MPLangError, ValueError):
    pass


class NonExactError(MPLangError, TypeError):
    """A float coefficient reached a computation that requires exact rationals."""


class TranslationError(MPLangError, ValueError):
    pass
