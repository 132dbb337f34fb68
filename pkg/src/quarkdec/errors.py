"""Exception types shared across the package."""


class QuarkdecError(Exception):
    """Base class for all quarkdec errors."""


class ParseError(QuarkdecError):
    """A line of an input file could not be parsed."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class FormatError(QuarkdecError):
    """An input file mixes incompatible formats (e.g. signed and unsigned lines)."""


class ConfigurationError(QuarkdecError):
    """Graph and motif specification are incompatible."""


class ConsistencyError(QuarkdecError):
    """Derived artifacts (peel trace, quark numbers) do not belong together."""


class OracleScaleError(QuarkdecError):
    """The brute-force reference was asked to materialize a graph beyond its size guard."""
