"""Exception hierarchy shared by the library and the command-line front end."""


class GptdError(Exception):
    """Base class for every error raised by gptd."""


class DimensionMismatchError(GptdError, ValueError):
    pass


class NotHermitianError(GptdError, ValueError):
    pass


class NumericalFailure(GptdError, ArithmeticError):
    """An iterative routine stopped before reaching its tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConeError(GptdError, ValueError):
    """A cone description violates the positive-cone axioms."""


class ValidationError(GptdError):
    """A state or measurement does not belong to the model."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class NotNormalizedError(ValidationError):
    pass


class NotInConeError(ValidationError):
    pass


class MembershipUnknownError(ValidationError):
    pass


class SumMismatchError(ValidationError):
    pass


class EffectNotInDualError(ValidationError):
    def __init__(self, message, index, verdict=None):
        super().__init__(message, verdict)
        self.index = index


class PreconditionError(GptdError, ValueError):
    pass


class InteriorityError(GptdError):
    """No interior point of the cone could be certified."""


class VerificationFailed(GptdError):
    pass


class OracleFailure(GptdError):
    """A heuristic search oracle was inconclusive."""


class LPFailure(GptdError):
    pass


class DimNotSquareError(GptdError, ValueError):
    pass


class CannotContractError(GptdError):
    def __init__(self, message, generator_index=None):
        super().__init__(message)
        self.generator_index = generator_index
