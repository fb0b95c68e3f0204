"""Exception hierarchy.

Every failure mode raised by the package derives from :class:`MmsWaveError`
so callers can catch the family at once.
"""


class MmsWaveError(Exception):
    """Base class for all package errors."""


class NearPole(MmsWaveError):
    """Susceptibility evaluated at (or numerically at) a resonance pole."""


class InvalidModel(MmsWaveError):
    """Model parameters violate the admissibility conditions."""


class DegenerateLeadingCoefficient(MmsWaveError):
    pass


class PairingViolation(MmsWaveError):
    """Root set not closed under w -> -conj(w)."""


class NoForwardBranch(MmsWaveError):
    pass


class BranchPointError(MmsWaveError):
    """dp/dw vanishes, so the group velocity diverges."""


class BranchJump(MmsWaveError):
    pass


class DegenerateC1(MmsWaveError):
    """Third-harmonic resonance: n^2(w) == n^2(3w)."""


class DegenerateC2(MmsWaveError):
    pass


class MissingB(MmsWaveError):
    pass


class OffGridCarrier(MmsWaveError):
    pass


class GridError(MmsWaveError):
    pass


class NewtonDiverged(MmsWaveError):
    pass


class ZeroACoefficient(MmsWaveError):
    pass


class BlowUp(MmsWaveError):
    pass


class ZeroReference(MmsWaveError):
    pass


class EmptyWindow(MmsWaveError):
    pass


class ConfigError(MmsWaveError):
    pass


class PipelineError(MmsWaveError):
    """Wraps a module error with the pipeline stage it came from."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
