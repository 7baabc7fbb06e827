"""Leading-order (classical) solve: expansion radius, frequency and shift.

The leading energy term describes a classical particle on a circular orbit
of radius r0; quantum corrections oscillate about it with frequency

    w = sqrt(3 + r0 V''(r0) / V'(r0)).

The shift beta = -(1/2 + (nr + 1/2) w) is chosen so the next-to-leading
energy coefficient vanishes, and the shifted quantum number lbar = l - beta
must satisfy lbar = sqrt(r0^3 V'(r0)) at the orbit radius.  Both conditions
combine into one scalar root problem

    F(r) = l + 1/2 + (nr + 1/2) w(r) - sqrt(r^3 V'(r)) = 0,

solved on the admissible window where V' > 0 and w^2 > 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf, sqrt

from .errors import AmbiguousRoot, BoundStateNotFound, ImaginaryFrequency, ZeroForce
from .potentials import PotentialKind, PotentialModel, ScreeningRule, screening_alpha
from .precision import root_tolerance, to_mpf

GOLDEN = (1 + sqrt(mpf(5))) / 2  # Yukawa admissible window: alpha * r < GOLDEN


@dataclass(frozen=True)
class QuantumProblem:
    """A bound-state query: quantum numbers plus the potential.

    ``mode`` records how the problem was posed ("scaled", "dimensional" or
    "custom") so reports can convert units; it does not affect the solve.
    """

    potential: PotentialModel
    l: int
    nr: int = 0
    mode: str = "custom"

    def __post_init__(self):
        if self.l < 0 or self.nr < 0:
            raise ValueError("quantum numbers l, nr must be >= 0")

    @classmethod
    def scaled(cls, alpha_prime, l: int, nr: int = 0,
               derivative_cap: int = 24) -> "QuantumProblem":
        """Dimensionless problem: unit strength, screening alpha' in [0, 0.4)."""
        ap = to_mpf(alpha_prime)
        pot = (PotentialModel.coulomb(1, derivative_cap) if ap == 0
               else PotentialModel.yukawa(1, ap, derivative_cap))
        return cls(pot, l, nr, mode="scaled")

    @classmethod
    def dimensional(cls, z: int, l: int, nr: int = 0,
                    rule: ScreeningRule | None = None,
                    derivative_cap: int = 24) -> "QuantumProblem":
        """Neutral-atom problem: strength Z, screening from the Z-rule."""
        rule = rule or ScreeningRule("dimensional")
        alpha = screening_alpha(rule, z)
        pot = PotentialModel.yukawa(z, alpha, derivative_cap)
        return cls(pot, l, nr, mode="dimensional")


@dataclass(frozen=True)
class OrbitConfig:
    """Solved leading-order configuration.

    ``q`` is the numeric value lbar^2; every downstream formula uses it in
    that form.  ``e_minus2``/``e_minus1`` are the two leading energy-series
    coefficients; the latter vanishes by the choice of beta.
    """

    problem: QuantumProblem
    r0: mpf
    w: mpf
    beta: mpf
    lbar: mpf
    q: mpf
    e_minus2: mpf
    e_minus1: mpf
    curvature: mpf   # d^2/dr0^2 of the leading coefficient at fixed q
    residual: mpf

    @property
    def leading_energy(self) -> mpf:
        return self.q * self.e_minus2


def frequency_w(potential: PotentialModel, r0) -> mpf:
    """Oscillation frequency about a circular orbit at r0."""
    r0 = to_mpf(r0)
    v1 = potential.derivative(r0, 1)
    if v1 == 0:
        raise ZeroForce(f"V'({r0}) = 0")
    radicand = 3 + r0 * potential.derivative(r0, 2) / v1
    if radicand <= 0:
        raise ImaginaryFrequency(
            f"no stable orbit at r0 = {r0}: w^2 = {radicand}")
    return sqrt(radicand)


def _admissible_upper(potential: PotentialModel, l: int, nr: int) -> mpf:
    """Upper end of the radial window where V' > 0 and w^2 > 0."""
    if potential.alpha > 0:
        # Yukawa: w^2 > 0 iff -a^2 r^2 + a r + 1 > 0, i.e. a r < golden ratio
        return GOLDEN / potential.alpha * (1 - mpf("1e-12"))
    if potential.kind is not PotentialKind.CUSTOM:
        # Coulomb: w = 1 everywhere; cap where F is safely negative
        return 16 * mpf(l + nr + 2) ** 2 / potential.z
    # custom: geometric expansion until the window closes
    r = mpf(1)
    for _ in range(60):
        try:
            frequency_w(potential, r)
        except (ImaginaryFrequency, ZeroForce):
            return r
        r *= 2
    return r


def _objective(problem: QuantumProblem):
    pot = problem.potential
    half = mpf(1) / 2
    nr_w = problem.nr + half

    def f(r):
        v1 = pot.derivative(r, 1)
        if v1 <= 0:
            return None
        radicand = 3 + r * pot.derivative(r, 2) / v1
        if radicand <= 0:
            return None
        return problem.l + half + nr_w * sqrt(radicand) - sqrt(r ** 3 * v1)

    return f


def solve_r0(problem: QuantumProblem, scan_points: int = 512) -> OrbitConfig:
    """Locate the expansion radius and assemble the orbit configuration.

    Scans the admissible window on a geometric grid, bisects every sign
    change and polishes with Newton steps until the residual drops below
    the ambient-precision tolerance.  Among multiple roots the one with the
    lowest leading energy wins; a tie within 1e-12 relative is ambiguous.
    """
    pot = problem.potential
    f = _objective(problem)
    lo = mpf("1e-6")
    hi = _admissible_upper(pot, problem.l, problem.nr)
    if hi <= lo:
        raise BoundStateNotFound("admissible radial window is empty")

    ratio = (hi / lo) ** (mpf(1) / (scan_points - 1))
    grid = [lo * ratio ** i for i in range(scan_points)]
    vals = [f(r) for r in grid]

    roots = []
    for i in range(scan_points - 1):
        a, b = vals[i], vals[i + 1]
        if a is None or b is None:
            continue
        if a == 0:
            roots.append(grid[i])
        elif a * b < 0:
            roots.append(_refine_root(f, grid[i], grid[i + 1], a))
    if vals[-1] == 0:
        roots.append(grid[-1])
    if not roots:
        raise BoundStateNotFound(
            f"orbit equation has no root for l={problem.l}, nr={problem.nr}")

    configs = [_build_config(problem, r) for r in roots]
    configs.sort(key=lambda c: c.leading_energy)
    if len(configs) > 1:
        e0, e1 = configs[0].leading_energy, configs[1].leading_energy
        if abs(e0 - e1) <= mpf("1e-12") * max(abs(e0), mpf(1)):
            raise AmbiguousRoot(
                f"two classical minima tie: {e0} vs {e1}")
    return configs[0]


def _refine_root(f, lo, hi, f_lo) -> mpf:
    tol = root_tolerance()
    # bisection gets within Newton's basin, Newton finishes quadratically
    for _ in range(60):
        mid = (lo + hi) / 2
        fm = f(mid)
        if fm is None or fm == 0:
            break
        if f_lo * fm < 0:
            hi = mid
        else:
            lo, f_lo = mid, fm
    x = (lo + hi) / 2
    for _ in range(40):
        fx = f(x)
        if fx is None:
            x = (lo + hi) / 2
            fx = f(x)
        if abs(fx) < tol:
            break
        d = mp.diff(f, x)
        if d == 0:
            break
        step = fx / d
        nxt = x - step
        if not (lo < nxt < hi):  # keep the bracket
            nxt = (lo + hi) / 2
        if f(nxt) is not None and fx * f(nxt) < 0:
            lo, hi = min(x, nxt), max(x, nxt)
        x = nxt
    return x


def _build_config(problem: QuantumProblem, r0: mpf) -> OrbitConfig:
    pot = problem.potential
    half = mpf(1) / 2
    w = frequency_w(pot, r0)
    beta = -(half + (problem.nr + half) * w)
    lbar = problem.l - beta
    q = lbar ** 2
    e_minus2 = 1 / (2 * r0 ** 2) + pot.value(r0) / q
    e_minus1 = ((2 * beta + 1) / 2 + (problem.nr + half) * w) / r0 ** 2
    curvature = 3 / r0 ** 4 + pot.derivative(r0, 2) / q
    f = _objective(problem)
    residual = f(r0)
    return OrbitConfig(problem, r0, w, beta, lbar, q,
                       e_minus2, e_minus1, curvature, residual)
