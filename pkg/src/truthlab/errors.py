"""Exception hierarchy shared by all truthlab modules."""


class TruthlabError(Exception):
    """Base class for every error raised by this package."""


class CaptureError(TruthlabError):
    pass


class AssignmentMismatch(TruthlabError):
    pass


class NotSemirelational(TruthlabError):
    pass


class UnassignedVariable(TruthlabError):
    pass


class OracleInClassical(TruthlabError):
    pass


class TooManyFreeVars(TruthlabError):
    pass


class UniverseTooLarge(TruthlabError):
    pass


class NotInUniverse(TruthlabError):
    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = list(missing)


class LengthMismatch(TruthlabError):
    pass


class IndexOutOfRange(TruthlabError):
    pass


class CapExceeded(TruthlabError):
    pass


class EmptyList(TruthlabError):
    pass


class ParseError(TruthlabError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}: "
        super().__init__(where + message)
