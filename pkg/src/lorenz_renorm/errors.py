class LorenzError(Exception):
    """Base class for all package errors."""


class DomainError(LorenzError, ValueError):
    pass


class ClassificationError(LorenzError):
    pass


class NumericError(LorenzError):
    def __init__(self, msg, **diagnostics):
        super().__init__(msg)
        self.diagnostics = diagnostics


class FitError(NumericError):
    def __init__(self, msg, residual):
        super().__init__(msg, residual=residual)
        self.residual = residual


class DepthError(LorenzError):
    def __init__(self, msg, achieved):
        super().__init__(msg)
        self.achieved = achieved


class ContinuationError(NumericError):
    pass


class CertificationError(LorenzError):
    def __init__(self, msg, condition):
        super().__init__(msg)
        self.condition = condition


class SearchFailure(LorenzError):
    def __init__(self, msg, trace=()):
        super().__init__(msg)
        self.trace = list(trace)


class SchemaError(LorenzError, ValueError):
    pass
