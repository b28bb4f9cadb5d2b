"""Exception hierarchy. Each class carries the CLI exit status it maps to."""


class BeliefChangeError(Exception):
    exit_code = 1


class ParseError(BeliefChangeError):
    """Malformed sentence, constraint, distribution or script line."""

    exit_code = 2

    def __init__(self, message, text=None, position=None, line=None):
        self.reason = message
        self.text = text
        self.position = position
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"column {position + 1}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class InconsistentError(BeliefChangeError):
    """An update or constraint set leaves no admissible probability function."""

    exit_code = 3


class NullEvidenceError(BeliefChangeError):
    """Conditioning on evidence that has probability zero everywhere."""

    exit_code = 4


class PreconditionError(BeliefChangeError):
    pass


class CapExceededError(BeliefChangeError):
    pass


class ModeError(BeliefChangeError):
    pass


class SolverError(BeliefChangeError):
    pass
