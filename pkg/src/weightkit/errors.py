"""Exception hierarchy for weightkit."""


class WeightkitError(Exception):
    """Base class for all library errors."""


class UnsupportedRing(WeightkitError):
    pass


class DimensionMismatch(WeightkitError, ValueError):
    pass


class RingMismatch(WeightkitError, ValueError):
    pass


class SourceTargetMismatch(WeightkitError, ValueError):
    pass


class InvalidRange(WeightkitError, ValueError):
    pass


class InvalidChoice(WeightkitError, ValueError):
    pass


class InvalidComplex(WeightkitError, ValueError):
    """Raised when d∘d ≠ 0 or a chain map fails to commute with differentials."""


class GenerationFailure(WeightkitError, RuntimeError):
    pass


class UnknownBattery(WeightkitError, KeyError):
    def __str__(self):
        # KeyError would quote the message
        return str(self.args[0]) if self.args else ""



class ParseError(WeightkitError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
