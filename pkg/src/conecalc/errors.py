"""Exception hierarchy.

Every error carries a stable ``code`` (printed by the CLI on stderr) and an
``exit_status``: 2 for malformed input, 3 for domain violations, 4 for
unreachable targets or incomplete enumerations.
"""


class ConeCalcError(Exception):
    code = "ERROR"
    exit_status = 1


class InputError(ConeCalcError):
    code = "INPUT"
    exit_status = 2


class DomainError(ConeCalcError):
    code = "DOMAIN"
    exit_status = 3


class IncompleteError(ConeCalcError):
    code = "INCOMPLETE"
    exit_status = 4


class ParseError(InputError):
    code = "PARSE"

    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class DimensionMismatch(InputError):
    code = "DIMENSION_MISMATCH"


class BadSlice(InputError):
    code = "BAD_SLICE"


class DegenerateSegment(InputError):
    code = "DEGENERATE_SEGMENT"


class NotNormalized(InputError):
    code = "NOT_NORMALIZED"


class UnsupportedGenus(DomainError):
    code = "UNSUPPORTED_GENUS"


class NotInCone(DomainError):
    code = "NOT_IN_CONE"


class NotReduced(DomainError):
    code = "NOT_REDUCED"


class NonpositiveArea(DomainError):
    code = "NONPOSITIVE_AREA"


class ParameterOutOfRange(DomainError):
    code = "PARAMETER_OUT_OF_RANGE"

    def __init__(self, message, bound=None):
        self.bound = bound
        super().__init__(message)


class InfeasibleCorrection(DomainError):
    code = "INFEASIBLE_CORRECTION"


class NotMildPair(DomainError):
    code = "NOT_MILD_PAIR"


class InvalidDecomposition(DomainError):
    code = "INVALID_DECOMPOSITION"


class NotAdmissible(DomainError):
    code = "NOT_ADMISSIBLE"

    def __init__(self, message, pair=None):
        self.pair = pair
        super().__init__(message)


class InconsistentProfile(DomainError):
    code = "INCONSISTENT_PROFILE"


class Unreachable(IncompleteError):
    code = "UNREACHABLE"

    def __init__(self, message, best_bound=None):
        self.best_bound = best_bound
        super().__init__(message)


class BoundTooLarge(IncompleteError):
    code = "BOUND_TOO_LARGE"
