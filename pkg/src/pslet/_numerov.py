"""Numerov sweep kernels.

These inner loops dominate the oracle solver's runtime (tens of thousands
of grid points per sweep, ~10^2 sweeps per eigenvalue), so they are
compiled with numba when available.  Set ``PSLET_NUMBA=0`` to force the
plain-Python fallback; ``NUMBA_ENABLED`` reports which path is active.
The uncompiled implementations stay importable (``sweep_out_py`` /
``sweep_in_py``) so the benchmark can time both paths in one process.
"""

import os

import numpy as np

_RESCALE_LIMIT = 1e250
_RESCALE_FACTOR = 1e-200


def sweep_out_py(w, h, y0, y1):
    """Integrate y'' + w(x) y = 0 left to right; returns (y, node count).

    Rescales by a positive factor on overflow, which preserves signs and
    therefore the node count.
    """
    n = w.shape[0]
    c = h * h / 12.0
    y = np.empty(n)
    y[0] = y0
    y[1] = y1
    nodes = 0
    for i in range(1, n - 1):
        y[i + 1] = (2.0 * (1.0 - 5.0 * c * w[i]) * y[i]
                    - (1.0 + c * w[i - 1]) * y[i - 1]) / (1.0 + c * w[i + 1])
        # sign test instead of a product: the product can overflow
        if (y[i] > 0.0 and y[i + 1] < 0.0) or (y[i] < 0.0 and y[i + 1] > 0.0):
            nodes += 1
        if abs(y[i + 1]) > _RESCALE_LIMIT:
            for j in range(i + 2):
                y[j] *= _RESCALE_FACTOR
    return y, nodes


def sweep_in_py(w, h, y_end, y_prev):
    """Integrate right to left from tail seed values y[n-1], y[n-2]."""
    n = w.shape[0]
    c = h * h / 12.0
    y = np.empty(n)
    y[n - 1] = y_end
    y[n - 2] = y_prev
    for i in range(n - 2, 0, -1):
        y[i - 1] = (2.0 * (1.0 - 5.0 * c * w[i]) * y[i]
                    - (1.0 + c * w[i + 1]) * y[i + 1]) / (1.0 + c * w[i - 1])
        if abs(y[i - 1]) > _RESCALE_LIMIT:
            for j in range(i - 1, n):
                y[j] *= _RESCALE_FACTOR
    return y


def _want_numba() -> bool:
    return os.environ.get("PSLET_NUMBA", "1").strip().lower() not in ("0", "false", "no")


NUMBA_ENABLED = False
if _want_numba():
    try:
        from numba import njit

        sweep_out = njit(cache=True)(sweep_out_py)
        sweep_in = njit(cache=True)(sweep_in_py)
        NUMBA_ENABLED = True
    except ImportError:
        sweep_out = sweep_out_py
        sweep_in = sweep_in_py
else:
    sweep_out = sweep_out_py
    sweep_in = sweep_in_py
