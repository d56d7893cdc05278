"""Exception hierarchy.  ``SocleError`` subclasses carry an exit-code hint
for the command-line front end."""


class SocleError(Exception):
    exit_code = 3


class InputError(SocleError, ValueError):
    exit_code = 2


class DimensionError(InputError):
    pass


class AlgebraMismatch(InputError):
    pass


class PreconditionError(InputError):
    pass


class NotAProjection(PreconditionError):
    pass


class BadSpectralValue(PreconditionError):
    pass


class NotInCommutatorSpace(PreconditionError):
    pass


class NeedsDecomposition(PreconditionError):
    """A Structure-presented element needs a WedderburnIso for this query."""


class NumericError(SocleError, ArithmeticError):
    exit_code = 3


class ContourHitsSpectrum(NumericError):
    pass


class RankSamplingFailed(NumericError):
    def __init__(self, sampled, direct):
        super().__init__(f"sampled spectral rank {sampled} disagrees with direct rank {direct}")
        self.sampled = sampled
        self.direct = direct


class DecompositionFailed(NumericError):
    pass


class CertificateFailed(NumericError):
    """A residual-checked invariant did not hold."""
