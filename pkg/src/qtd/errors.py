"""Exception and warning types shared across the package."""


class ZeroNormState(ValueError):
    """Superposition parameters give a state of (numerically) zero norm.

    Happens when the coherence term cancels the direct term exactly, i.e.
    an equally weighted pair of identical packets with relative phase pi.
    """


class QuadratureNotConverged(RuntimeError):
    """Adaptive quadrature exhausted its subdivision budget above tolerance."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of a special function."""


class ValidityWarning(UserWarning):
    """Parameters are outside the regime where the leading-order
    relativistic expansions are trustworthy; results are still returned."""
