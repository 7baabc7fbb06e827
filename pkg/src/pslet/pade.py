"""Rational acceleration of the energy series.

The full series, leading term included, is factored as

    E = lbar^2 * sum_k c_k lam^k,      lam = 1/lbar,

(the vanishing second coefficient is kept in place) and each [N, M] entry
is the rational function P_N/Q_M matching the first N+M+1 coefficients,
evaluated at the physical lam.  Stability of the entries from [2,2] up to
[4,5] is the convergence diagnostic: the spread between the two largest
entries serves as the quoted uncertainty.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf

from .errors import InsufficientCoefficients
from .series import EnergySeries, horner

CONDITION_THRESHOLD = mpf("1e30")
# the stability staircase, in reading order
_STAIRCASE = [(2, 2), (3, 2), (2, 3), (3, 3), (4, 3), (3, 4), (4, 4), (4, 5)]


@dataclass(frozen=True)
class PadeEstimate:
    """Table of rational-approximant energies with stability metadata."""

    table: dict
    degenerate: dict
    best: mpf          # the [4,4] entry
    refined: mpf       # the [4,5] entry, or None when unavailable
    uncertainty: mpf
    series: EnergySeries

    def value(self, n: int, m: int) -> mpf:
        return self.table[(n, m)]


@dataclass(frozen=True)
class StabilityReport:
    best: mpf
    uncertainty: mpf
    agreement_digits: int


def _solve_full_pivot(matrix, rhs):
    """Gaussian elimination with full pivoting.

    Returns (solution, pivot_ratio, rank).  Near-zero pivots terminate the
    elimination and the corresponding free variables stay zero, so
    rank-deficient-but-consistent systems (e.g. a polynomial series) still
    produce the natural approximant.
    """
    n = len(rhs)
    a = [row[:] for row in matrix]
    b = list(rhs)
    col_order = list(range(n))
    scale = max((abs(x) for row in a for x in row), default=mpf(0))
    cutoff = scale * mpf(10) ** (-(mp.dps - 5))
    pivots = []
    rank = n
    for step in range(n):
        piv, pi, pj = mpf(0), step, step
        for i in range(step, n):
            for j in range(step, n):
                if abs(a[i][j]) > piv:
                    piv, pi, pj = abs(a[i][j]), i, j
        if piv <= cutoff:
            rank = step
            break
        pivots.append(piv)
        a[step], a[pi] = a[pi], a[step]
        b[step], b[pi] = b[pi], b[step]
        for row in a:
            row[step], row[pj] = row[pj], row[step]
        col_order[step], col_order[pj] = col_order[pj], col_order[step]
        for i in range(step + 1, n):
            factor = a[i][step] / a[step][step]
            if factor:
                for j in range(step, n):
                    a[i][j] -= factor * a[step][j]
                b[i] -= factor * b[step]
    x = [mpf(0)] * n
    for i in range(rank - 1, -1, -1):
        acc = b[i]
        for j in range(i + 1, n):
            acc -= a[i][j] * x[j]
        x[i] = acc / a[i][i]
    solution = [mpf(0)] * n
    for i in range(n):
        solution[col_order[i]] = x[i]
    pivot_ratio = (max(pivots) / min(pivots)) if pivots else mpf(1)
    return solution, pivot_ratio, rank


def _approximant(coeffs, n: int, m: int, lam):
    """([n, m] value at lam before the lbar^2 factor, degenerate flag).

    The denominator system is a near-Hankel matrix of series coefficients
    and turns violently ill-conditioned when the series tail decays fast,
    so the elimination and evaluation run at doubled working precision;
    inputs are exact mpf values, so the extra digits are genuine.  The
    M = 0 column has no linear system and stays at ambient precision,
    keeping it bit-identical to the plain partial sums.
    """
    if m == 0:
        return _approximant_raw(coeffs, n, m, lam)
    with mp.workdps(2 * mp.dps + 20):
        value, degenerate = _approximant_raw(coeffs, n, m, lam)
    return +value, degenerate


def _approximant_raw(coeffs, n: int, m: int, lam):
    def c(i):
        return coeffs[i] if 0 <= i < len(coeffs) else mpf(0)

    degenerate = False
    if m == 0:
        q = [mpf(1)]
    else:
        matrix = [[c(i - j) for j in range(1, m + 1)]
                  for i in range(n + 1, n + m + 1)]
        rhs = [-c(i) for i in range(n + 1, n + m + 1)]
        sol, pivot_ratio, rank = _solve_full_pivot(matrix, rhs)
        if pivot_ratio > CONDITION_THRESHOLD:
            degenerate = True
        if rank < m:
            # consistent rank deficiency is fine; an unresolved residual is not
            scale = max([abs(x) for row in matrix for x in row]
                        + [abs(x) for x in rhs] + [mpf(1)])
            for i in range(m):
                resid = rhs[i] - sum(matrix[i][j] * sol[j] for j in range(m))
                if abs(resid) > scale * mpf(10) ** (-(mp.dps - 10)):
                    degenerate = True
                    break
        q = [mpf(1)] + sol
    p = [sum(q[j] * c(i - j) for j in range(0, min(i, m) + 1))
         for i in range(n + 1)]
    return horner(p, lam) / horner(q, lam), degenerate


def pade_table(series: EnergySeries, max_n: int = 4, max_m: int = 5) -> PadeEstimate:
    """Populate the [N, M] table for N <= max_n, M <= max_m.

    Entries need N + M + 1 series coefficients; the selected value is
    [4, 4] with [4, 5] as its refinement, so the default ten-term series is
    exactly enough.  The [N, 0] column reproduces the partial sums
    bit-for-bit.
    """
    coeffs = series.coefficients
    if len(coeffs) < max_n + 1:
        raise InsufficientCoefficients(
            f"series has {len(coeffs)} coefficients, need {max_n + 1}")
    lam = 1 / series.lbar
    front = series.lbar ** 2
    table = {}
    degenerate = {}
    for n in range(max_n + 1):
        for m in range(max_m + 1):
            if n + m + 1 > len(coeffs):
                continue
            value, flag = _approximant(coeffs, n, m, lam)
            table[(n, m)] = front * value
            degenerate[(n, m)] = flag
    best = table.get((4, 4))
    refined = table.get((4, 5))
    if best is None:
        raise InsufficientCoefficients(
            "series too short for the [4,4] selection; need 9 coefficients")
    if refined is not None:
        uncertainty = abs(refined - best)
    elif (3, 4) in table:
        # same stability idea one step down the staircase
        uncertainty = abs(best - table[(3, 4)])
    else:
        uncertainty = mpf("nan")
    return PadeEstimate(table, degenerate, best, refined, uncertainty, series)


def stability_report(estimate: PadeEstimate) -> StabilityReport:
    """Best value, uncertainty, and the digit count shared by the staircase.

    Degenerate entries are excluded from the digit count and each one
    subtracts a digit from it; when every available entry agrees exactly,
    the full working precision is reported.
    """
    available = [nm for nm in _STAIRCASE if nm in estimate.table]
    if not available:
        raise InsufficientCoefficients("no stability entries available")
    clean = [nm for nm in available if not estimate.degenerate[nm]]
    flagged = len(available) - len(clean)
    values = [estimate.table[nm] for nm in (clean or available)]
    ref = max(abs(v) for v in values)
    spread = max(values) - min(values)
    if ref == 0 or spread == 0:
        digits = mp.dps
    else:
        digits = max(0, int(mp.floor(-mp.log10(spread / ref))))
    return StabilityReport(estimate.best, estimate.uncertainty,
                           max(0, digits - flagged))
