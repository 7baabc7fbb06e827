"""Direct eigenvalue solver: Numerov shooting on the radial equation.

This is the independent cross-check for the series engine.  On the default
logarithmic grid the reduced radial function u(r) = e^{x/2} y(x), x = ln r,
obeys

    y'' + [2 e^{2x} (E - V(e^x)) - (l + 1/2)^2] y = 0,

a form without first derivative that Numerov integrates at fourth order.
Eigenvalues are bracketed by counting nodes of the outward sweep, bisected,
then polished with Ridders' method on the matching defect of the outward
and inward sweeps at the outer classical turning point.

Plain double precision throughout: targets here are ~9 digits and the
Numerov truncation error dominates long before rounding does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numerov import sweep_in, sweep_out
from .errors import GridInsufficient, NoBoundState
from .potentials import PotentialModel

DECAY_REQUIREMENT = 1e-12


@dataclass(frozen=True)
class RadialGrid:
    r_min: float = 1e-5
    r_max: float = 40.0
    count: int = 20000
    spacing: str = "log"  # "log" | "uniform"

    def __post_init__(self):
        if self.r_min <= 0 or self.r_max <= self.r_min:
            raise ValueError("need 0 < r_min < r_max")
        if self.count < 1000:
            raise ValueError("eigenvalue runs need at least 1000 grid points")
        if self.spacing not in ("log", "uniform"):
            raise ValueError(f"unknown spacing {self.spacing!r}")

    @classmethod
    def default_for(cls, e_guess: float, count: int = 20000) -> "RadialGrid":
        """Log grid whose outer edge clears the bound-state tail."""
        kappa = math.sqrt(2.0 * abs(e_guess)) if e_guess else 1.0
        return cls(r_min=1e-5, r_max=max(40.0, 30.0 / kappa), count=count)

    def points(self):
        """(integration coordinate, radius) arrays."""
        if self.spacing == "log":
            x = np.linspace(math.log(self.r_min), math.log(self.r_max), self.count)
            return x, np.exp(x)
        r = np.linspace(self.r_min, self.r_max, self.count)
        return r, r


@dataclass(frozen=True)
class OracleResult:
    energy: float
    node_count: int
    grid: RadialGrid
    r: np.ndarray
    u: np.ndarray          # reduced radial wavefunction, L2-normalized
    mismatch: float        # relative log-derivative defect at the match point
    iterations: int
    kinetic: float         # <T> = E - <V_eff>, positive for genuine bound states


class _Shooter:
    def __init__(self, potential: PotentialModel, l: int, grid: RadialGrid):
        self.grid = grid
        self.l = l
        self.x, self.r = grid.points()
        self.h = float(self.x[1] - self.x[0])
        self.v = potential.value_floats(self.r)
        self.log_spacing = grid.spacing == "log"
        if self.log_spacing:
            self._two_r2 = 2.0 * self.r * self.r
            self._cent = (l + 0.5) ** 2
        else:
            safe_r = self.r
            self._v_eff = self.v + l * (l + 1) / (2.0 * safe_r * safe_r)
        self.evaluations = 0

    def w_of(self, e: float) -> np.ndarray:
        if self.log_spacing:
            return self._two_r2 * (e - self.v) - self._cent
        return 2.0 * (e - self._v_eff)

    def v_eff_min(self) -> float:
        if self.log_spacing:
            v_eff = self.v + self._cent / (2.0 * self.r * self.r)
        else:
            v_eff = self._v_eff
        return float(np.min(v_eff))

    def _seeds_out(self):
        # regular solution u ~ r^(l+1); in log coordinates y ~ e^((l+1/2) x)
        if self.log_spacing:
            return 1e-20, 1e-20 * math.exp((self.l + 0.5) * self.h)
        return 1e-20 * self.r[0] ** (self.l + 1), 1e-20 * self.r[1] ** (self.l + 1)

    def nodes(self, e: float) -> int:
        self.evaluations += 1
        y0, y1 = self._seeds_out()
        _, nodes = sweep_out(self.w_of(e), self.h, y0, y1)
        return nodes

    def match_index(self, e: float) -> int:
        w = self.w_of(e)
        allowed = np.nonzero(w > 0)[0]
        idx = int(allowed[-1]) if allowed.size else self.x.size // 2
        return min(max(idx, 2), self.x.size - 3)

    def sweeps(self, e: float):
        self.evaluations += 1
        w = self.w_of(e)
        y0, y1 = self._seeds_out()
        y_out, nodes = sweep_out(w, self.h, y0, y1)
        kappa = math.sqrt(max(-2.0 * e, 1e-30))
        step = self.r[-1] - self.r[-2]
        y_in = sweep_in(w, self.h, 1e-20, 1e-20 * math.exp(kappa * step))
        return y_out, y_in, nodes

    def defect(self, e: float, i_m: int) -> float:
        """Difference of one-step propagation ratios at the match point."""
        y_out, y_in, _ = self.sweeps(e)
        if y_out[i_m] == 0 or y_in[i_m] == 0:
            return math.inf
        return y_out[i_m + 1] / y_out[i_m] - y_in[i_m + 1] / y_in[i_m]


def oracle_eigenvalue(potential: PotentialModel, l: int, nr: int = 0,
                      grid: RadialGrid | None = None,
                      e_guess: float | None = None,
                      e_window: tuple | None = None) -> OracleResult:
    """Bound-state eigenvalue with ``nr`` nodes, by two-sided Numerov shooting.

    ``e_guess`` (e.g. the series engine's leading-order energy) sizes the
    default grid; without it a coarse pre-pass estimates the scale.
    """
    if grid is None:
        if e_guess is None:
            coarse = _solve_on_grid(potential, l, nr, RadialGrid(count=4000),
                                    e_window, refine=False)
            e_guess = coarse.energy
        grid = RadialGrid.default_for(e_guess)
    return _solve_on_grid(potential, l, nr, grid, e_window, refine=True)


def _solve_on_grid(potential, l, nr, grid, e_window, refine) -> OracleResult:
    shooter = _Shooter(potential, l, grid)

    if e_window is not None:
        e_lo, e_hi = float(e_window[0]), float(e_window[1])
    else:
        e_hi = -1e-12
        e_lo = shooter.v_eff_min()
        if e_lo >= e_hi:
            raise NoBoundState("effective potential has no negative well")
    if shooter.nodes(e_lo) > nr:
        raise NoBoundState(f"window floor {e_lo} already has too many nodes")
    if shooter.nodes(e_hi) <= nr:
        raise NoBoundState(
            f"no state with {nr} nodes below E = {e_hi} for l = {l}")

    # node-count bisection brackets the eigenvalue
    lo, hi = e_lo, e_hi
    while hi - lo > max(1e-12, 8 * abs(lo) * np.finfo(float).eps):
        mid = 0.5 * (lo + hi)
        if shooter.nodes(mid) > nr:
            hi = mid
        else:
            lo = mid

    energy = 0.5 * (lo + hi)
    if refine:
        energy = _ridders_polish(shooter, lo, hi)

    i_m = shooter.match_index(energy)
    y_out, y_in, _ = shooter.sweeps(energy)
    u = _assemble(shooter, y_out, y_in, i_m)
    nodes = int(np.count_nonzero(u[1:] * u[:-1] < 0))

    tail = abs(u[-1]) / np.max(np.abs(u))
    if refine and tail > DECAY_REQUIREMENT:
        raise GridInsufficient(
            f"eigenfunction tail at r_max is {tail:.2e} of peak; enlarge r_max")

    # log-derivative agreement of the two sweeps, relative
    d_out = _log_derivative(y_out, i_m, shooter.h)
    d_in = _log_derivative(y_in, i_m, shooter.h)
    mismatch = abs(d_out - d_in) / max(abs(d_out) + abs(d_in), 1e-30)

    v_eff = shooter.v + l * (l + 1) / (2.0 * shooter.r ** 2)
    mean_v = np.trapezoid(v_eff * u * u, shooter.r)
    kinetic = energy - mean_v

    return OracleResult(energy, nodes, grid, shooter.r, u, float(mismatch),
                        shooter.evaluations, float(kinetic))


def _log_derivative(y, i, h) -> float:
    if y[i] == 0:
        return math.inf
    return (y[i + 1] - y[i - 1]) / (2.0 * h * y[i])


def _ridders_polish(shooter, lo, hi) -> float:
    i_m = shooter.match_index(0.5 * (lo + hi))
    f_lo = shooter.defect(lo, i_m)
    f_hi = shooter.defect(hi, i_m)
    if not (math.isfinite(f_lo) and math.isfinite(f_hi)) or f_lo * f_hi > 0:
        return 0.5 * (lo + hi)
    best = 0.5 * (lo + hi)
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        f_mid = shooter.defect(mid, i_m)
        root = math.sqrt(f_mid * f_mid - f_lo * f_hi)
        if root == 0:
            break
        best = mid + (mid - lo) * math.copysign(1.0, f_lo - f_hi) * f_mid / root
        f_best = shooter.defect(best, i_m)
        if f_best == 0:
            return best
        if f_mid * f_best < 0:
            lo, f_lo, hi, f_hi = mid, f_mid, best, f_best
        elif f_lo * f_best < 0:
            hi, f_hi = best, f_best
        else:
            lo, f_lo = best, f_best
        if hi - lo < 4 * abs(best) * np.finfo(float).eps:
            break
    return best


def _assemble(shooter, y_out, y_in, i_m) -> np.ndarray:
    y = np.empty_like(y_out)
    scale = y_out[i_m] / y_in[i_m]
    y[: i_m + 1] = y_out[: i_m + 1]
    y[i_m + 1 :] = y_in[i_m + 1 :] * scale
    if shooter.log_spacing:
        u = np.exp(0.5 * shooter.x) * y
    else:
        u = y
    norm = math.sqrt(np.trapezoid(u * u, shooter.r))
    if u[np.argmax(np.abs(u))] < 0:
        norm = -norm
    return u / norm
