"""Working-precision helpers.

All series and orbit arithmetic runs on mpmath floats at the ambient
precision; pipeline entry points bump it with ``mp.workdps``.  The default
of 50 significant digits leaves ~35 guard digits over the 15 digits the
reference tables resolve, which the high-order coefficient recursion needs.
"""

from mpmath import mp, mpf

DEFAULT_DPS = 50


def to_mpf(x) -> mpf:
    """Convert to mpf, parsing decimal strings at a precision floor.

    Prefer strings (or exact ints) for inputs like screening parameters:
    ``to_mpf("0.1")`` carries the decimal value, while ``to_mpf(0.1)``
    inherits the binary-double rounding of the literal.  Strings parse at
    no less than DEFAULT_DPS + 10 digits so the same string denotes the
    same number no matter the ambient context it was constructed in;
    construct inside a higher-precision context if you need more.
    """
    if isinstance(x, mpf):
        return x
    if isinstance(x, str):
        with mp.workdps(max(mp.dps, DEFAULT_DPS + 10)):
            value = mpf(x)
        return value
    return mpf(x)


def root_tolerance() -> mpf:
    """Residual target for root solves at the ambient precision (<= 1e-30)."""
    return mpf(10) ** min(-30, -(mp.dps - 15))
