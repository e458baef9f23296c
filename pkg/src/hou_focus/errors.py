"""Exception hierarchy shared by every layer of the package."""


class HouError(Exception):
    pass


class TermError(HouError):
    pass


class ParseError(TermError):
    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} (at offset {pos})"
        super().__init__(message)


class UnknownIdentifier(ParseError):
    pass


class TypeMismatch(TermError):
    pass


class SolverError(HouError):
    pass


class LimitExceeded(SolverError):
    """Raised when a search budget runs out before the space is exhausted.

    ``solutions`` holds whatever was found before the cut.
    """

    def __init__(self, message, solutions=()):
        super().__init__(message)
        self.solutions = list(solutions)


class PreconditionViolated(SolverError):
    pass


class NoSolution(SolverError):
    pass


class Deadlock(SolverError):
    pass


class FocusError(HouError):
    pass
