"""Error taxonomy and the process exit-code contract.

Exit codes: 0 success, 1 input/validation, 2 theorem-hypothesis failure,
3 internal oracle mismatch.
"""


class LedgerError(Exception):
    exit_code = 1

    def __init__(self, message, path=None):
        self.path = path
        if path is not None:
            message = f"{path}: {message}"
        super().__init__(message)


class ValidationError(LedgerError):
    """Malformed or inconsistent input data."""

    exit_code = 1


class MissingDataError(ValidationError):
    """A request needs a Seiberg-Witten pairing the manifest does not carry."""


class DegenerateParameterError(ValidationError):
    """A hypergeometric denominator Pochhammer vanished at a needed index."""

    def __init__(self, k, message):
        self.k = k
        super().__init__(message)


class HypothesisError(LedgerError):
    """The requested computation falls outside a theorem's hypotheses."""

    exit_code = 2


class ChamberError(HypothesisError):
    """Period-point problems for b2+ = 1 computations."""


class OracleMismatchError(LedgerError):
    """Two independent internal routes disagreed: a defect, never user error."""

    exit_code = 3
