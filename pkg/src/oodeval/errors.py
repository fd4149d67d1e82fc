"""Exception types raised across the package.

Every error the CLI can report derives from :class:`OodEvalError`, so the
command-line layer only needs one ``except`` clause to turn failures into a
one-line diagnostic and a nonzero exit code.
"""


class OodEvalError(Exception):
    """Base class for all errors raised by oodeval."""


class EmptyInput(OodEvalError):
    """A score collection contained no values."""


class NonFiniteScore(OodEvalError):
    """A score was NaN or infinite."""

    def __init__(self, index, value, name=None):
        self.index = index
        self.value = value
        self.name = name
        where = f" in {name!r}" if name else ""
        super().__init__(f"non-finite score {value!r} at index {index}{where}")


class DegenerateBounds(OodEvalError):
    """Normalization bounds with ``lo >= hi``."""


class ScoresOutOfRange(OodEvalError):
    """Scores outside [0, 1] reached a metric that needs normalized scores."""


class ConstraintUnreachable(OodEvalError):
    """No threshold on the grid satisfies the requested rate constraint."""


class MissingDataset(OodEvalError):
    """A threshold policy needs a score set that was not supplied."""


class UnknownPreset(OodEvalError):
    """Requested synthetic preset does not exist."""


class InvalidSpec(OodEvalError):
    """A synthetic mixture description or config is malformed."""


class ParseError(OodEvalError):
    """A score file could not be parsed."""

    def __init__(self, line, reason, path=None):
        self.line = line
        self.reason = reason
        self.path = path
        where = f"{path}:" if path else "line "
        super().__init__(f"{where}{line}: {reason}")
