"""Exception hierarchy shared by every module."""


class PCSTError(ValueError):
    """Base class for all errors raised by fastpcst."""


class StructuralError(PCSTError):
    """A tree/solution does not have the required shape (cycle, foreign edge, ...)."""


class ConnectivityError(PCSTError):
    """A graph that must be connected is not."""


class DomainError(PCSTError):
    """An argument is outside its admissible range."""


class ParseError(PCSTError):
    """Malformed instance or solution text."""

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
