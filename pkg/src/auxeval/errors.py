"""Exception types shared across the package."""


class AuxevalError(ValueError):
    """Base class for contract violations raised by this package."""


class InvalidInputError(AuxevalError):
    pass


class DegenerateSignalError(AuxevalError):
    """Auxiliary signal carries no information (rho = 0 and sigma_eta = 0)."""


class SingularDesignError(AuxevalError):
    """Design matrix is rank-deficient beyond the ridge guard."""


class InvalidFoldsError(AuxevalError):
    pass


class MissingTauError(AuxevalError):
    """External regressor predictions absent for a queried (record, slot)."""


class EmptyDatasetError(AuxevalError):
    pass


class UndefinedVRError(AuxevalError):
    """Variance reduction is undefined because Var(phi) = 0."""


class ContractError(AuxevalError):
    """A data file violates the benchmark record contract."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
