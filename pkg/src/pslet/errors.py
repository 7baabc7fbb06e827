"""Exception hierarchy for the pslet package."""


class PsletError(Exception):
    """Base class for all pslet errors."""


# --- potentials ---

class NonPositiveRadius(PsletError):
    """A potential was evaluated at r <= 0."""


class OrderTooLarge(PsletError):
    """A derivative order beyond the configured cap was requested."""


class InvalidCharge(PsletError):
    """Screening rules require an integer nuclear charge Z >= 1."""


# --- classical orbit solve ---

class ImaginaryFrequency(PsletError):
    """No stable circular orbit: the squared oscillation frequency is <= 0."""


class ZeroForce(PsletError):
    """The radial force vanishes where a frequency was requested."""


class BoundStateNotFound(PsletError):
    """The orbit equation has no root in the admissible radial window."""


class AmbiguousRoot(PsletError):
    """Two classical minima tie and cannot be disambiguated."""


# --- series engine ---

class DerivativeUnavailable(PsletError):
    """The potential cannot supply a derivative order the series needs."""


class HierarchyBreakdown(PsletError):
    """A coefficient equation in the order-by-order solve lost its pivot."""


class OrderUnsupported(PsletError):
    """Series orders beyond the leading terms require a nodeless (nr = 0) state."""


class GridTooCoarse(PsletError):
    """Too few grid points for the requested wavefunction normalization."""


# --- Pade ---

class InsufficientCoefficients(PsletError):
    """The series is too short for the requested rational approximant."""


# --- oracle solver ---

class NoBoundState(PsletError):
    """Node-count bracketing found no eigenvalue in the scanned energy window."""


class GridInsufficient(PsletError):
    """The eigenfunction has not decayed at the outer edge of the grid."""
