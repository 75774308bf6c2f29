"""Exception hierarchy.

The CLI maps ConfigError to exit status 2 and every other IrsdmError to
exit status 1.
"""


class IrsdmError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(IrsdmError):
    """Array shapes do not conform."""


class ContractError(IrsdmError):
    """An input violates a documented precondition (e.g. non-Hermitian
    matrix, non-positive distance)."""


class DegenerateError(IrsdmError):
    """Geometry or beamformer degeneracy: rank-deficient stacked channel,
    parallel combiners, zero signal direction."""


class ZfInfeasibleError(DegenerateError):
    """Zero-forcing constraint leaves no null space to receive in."""


class ConfigError(IrsdmError):
    """Invalid scenario configuration or config file."""
