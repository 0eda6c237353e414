"""
Exception hierarchy for the certification engine

Input problems derive from ValueError and numerical failures from
ArithmeticError, so callers (and the CLI exit-code mapping) can catch either
family without knowing every concrete type.
"""


class LureCertError(Exception):
    """Base class for all engine errors"""


# Input / usage errors


class DimensionError(LureCertError, ValueError):
    """Signal, state or matrix dimensions do not agree"""


class HorizonError(LureCertError, ValueError):
    """Requested horizon exceeds the signal length or the representable weights"""


class MatrixError(LureCertError, ValueError):
    """A matrix that must be symmetric and finite is not"""


class ParameterError(LureCertError, ValueError):
    """Preset or operation parameters are out of range"""


class ConventionError(LureCertError, ValueError):
    """Side or feedback-sign tags of quadratic specs do not match"""


class CompatibilityError(LureCertError, ValueError):
    """The pair (M, N) does not satisfy M + N < 0"""


class KindError(LureCertError, ValueError):
    """Operation not supported for this nonlinearity kind"""


class InputError(LureCertError, ValueError):
    """No usable input signals were supplied"""


class ReplayError(LureCertError, ValueError):
    """A recorded relation was driven off its recorded pair"""


# Numerical failures


class NumericsError(LureCertError, ArithmeticError):
    """Eigenvalue or linear algebra routine failed"""


class SingularityError(NumericsError):
    """A matrix that must be inverted is singular"""


class FrequencyDomainError(NumericsError):
    """Frequency-domain check requested for a system that is not Schur stable"""


class WellPosednessError(NumericsError):
    """The per-step algebraic loop has no unique solution"""


class ConsistencyError(NumericsError):
    """Internal reconstruction check failed"""
