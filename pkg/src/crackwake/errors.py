"""Exception hierarchy shared by all crackwake modules."""


class CrackwakeError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(CrackwakeError):
    """Invalid input data (bad geometry, loads, config values)."""


class UnbalancedLoading(ValidationError):
    """Crack-face loading whose principal force vector is not zero."""

    def __init__(self, residual: float, scale: float):
        self.residual = residual
        self.scale = scale
        super().__init__(
            f"loading is not self-balanced: residual {residual:.3e} "
            f"exceeds 1e-12 x load scale ({scale:.3e})"
        )


class LoadTooCloseToTip(ValidationError):
    """Load support violates the required clearance from the crack tip."""


class InvalidPreset(ValidationError):
    """Preset loading parameters out of range."""


class InvalidDefect(ValidationError):
    """Defect geometry or material parameters out of range."""


class ConfigError(ValidationError):
    """Scenario file cannot be parsed or assembled."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigSyntaxError(ConfigError):
    """Malformed line in a scenario file."""


class UnknownKey(ConfigError):
    """Key or block name not part of the scenario grammar."""


class MissingBlock(ConfigError):
    """Required block absent, or present more than once."""


class NumericalError(CrackwakeError):
    """Numerical evaluation failed."""


class QuadratureFailure(NumericalError):
    """Adaptive quadrature did not reach the requested tolerance."""


class ContourTruncationFailure(NumericalError):
    """Inversion contour kept growing without the integral settling."""


class OnCrackFaceUnderLoad(NumericalError):
    """Field evaluation point coincides with a loaded crack-face station."""


class DegenerateA0(NumericalError):
    """Second-order tip coefficient too small to divide by."""


class TipReachesLoad(NumericalError):
    """Advancing crack tip entered the loading support."""


class TipReachesDefect(NumericalError):
    """Advancing crack tip came closer to a defect than its own size."""


class DilutenessWarning(UserWarning):
    """Defect size is not small compared with its distance from the tip."""
