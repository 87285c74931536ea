"""Exception hierarchy.

Invariant violations are structural math failures (bad inputs or broken
identities); resolution errors are honest refusals where the requested
numerical accuracy cannot be certified on the given discretization.
"""


class KreinLabError(Exception):
    """Base class for all library errors."""


class InvariantViolation(KreinLabError):
    """A structural invariant failed (broken identity, invalid operand)."""


class CayleyUndefinedError(KreinLabError):
    """-1 lies in the spectrum, the Cayley transform has no bounded inverse
    factor; finite-dimensional shadow of an unbounded metric operator."""


class ResolutionError(KreinLabError):
    """Requested accuracy cannot be certified at this resolution; refuse."""


class GridResolutionError(ResolutionError):
    """Quadrature grid under-resolved (domain too short or spacing too coarse)."""


class FrequencyBandError(ResolutionError):
    """Exponential frequency weight amplifies unresolved spectral tails."""


class ParityMixingError(ResolutionError):
    """Eigensolver cannot separate even/odd branches (degenerate cluster)."""
