"""Pseudoperturbation series engine.

After recentering on the orbit radius, the radial problem becomes a
one-dimensional anharmonic oscillator whose perturbation is organized in
half-powers of 1/lbar.  Writing the nodeless wavefunction as exp(U(x)) and
expanding its log-derivative as

    U'(x) = sum_n U_n(x) lbar^(-n/2) + sum_n G_n(x) lbar^(-(n+1)/2),

with U_n odd and G_n even polynomials, the Riccati equation decouples order
by order.  At half-order k the unknowns are U_k and G_{k-1}; the balance of
each power of x is linear in them with pivot w (since U_0 = -w x multiplies
every unknown), so the coefficients follow by descending through the
degrees.  The constant balance at even half-order 2j yields the j-th
eigenvalue correction.

Everything runs at the ambient mpmath precision: the recursion mixes large
coefficients of opposite signs and double precision would lose the high
orders.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from mpmath import exp as mp_exp, mp, mpf, sqrt

from .classical import OrbitConfig
from .errors import (DerivativeUnavailable, GridTooCoarse, HierarchyBreakdown,
                     OrderUnsupported)
from .potentials import PotentialModel
from .precision import to_mpf

DEFAULT_TERMS = 10


@dataclass(frozen=True)
class PerturbationPolynomials:
    """Coefficient tables of the perturbation at each half-order.

    ``polys[k][j]`` multiplies x^j at half-order k.  Order 0 holds the
    harmonic well w^2 x^2 / 2 plus a constant; order 1 is odd with powers
    {x, x^3}; order k >= 2 has exactly the powers {k-2, k, k+2}.
    """

    polys: list
    orbit: OrbitConfig

    @property
    def max_order(self) -> int:
        return len(self.polys) - 1


@dataclass(frozen=True)
class RiccatiSolution:
    """Log-derivative coefficient tables and eigenvalue corrections.

    ``odd_coeffs[n][m]`` multiplies x^(2m-1) in U_n (m = 0 entry is always
    zero: there is no 1/x term); ``even_coeffs[n][m]`` multiplies x^(2m) in
    G_n.  ``corrections[j]`` is the j-th eigenvalue correction of the
    oscillator problem.
    """

    odd_coeffs: list
    even_coeffs: list
    corrections: list
    orbit: OrbitConfig

    def odd_poly(self, n: int) -> list:
        """Dense coefficient list of U_n (index = power of x)."""
        out = [mpf(0)] * (2 * len(self.odd_coeffs[n]) - 1)
        for m, coeff in enumerate(self.odd_coeffs[n]):
            if m > 0:
                out[2 * m - 1] = coeff
        return out

    def even_poly(self, n: int) -> list:
        """Dense coefficient list of G_n."""
        out = [mpf(0)] * (2 * len(self.even_coeffs[n]) - 1)
        for m, coeff in enumerate(self.even_coeffs[n]):
            out[2 * m] = coeff
        return out


@dataclass(frozen=True)
class EnergySeries:
    """Energy-correction coefficients and their evaluation point.

    ``coefficients[k]`` multiplies lbar^(2-k); the leading entry is the
    classical term, the second vanishes by construction.  ``partial_sum``
    evaluates the truncated series at the physical lbar.
    """

    coefficients: list
    lbar: mpf
    orbit: OrbitConfig

    @property
    def n_terms(self) -> int:
        return len(self.coefficients)

    def coefficient(self, n: int) -> mpf:
        """Coefficient of lbar^(-n); n runs from -2 upward."""
        return self.coefficients[n + 2]

    def partial_sum(self, terms: int | None = None) -> mpf:
        if terms is None:
            terms = self.n_terms
        return self.lbar ** 2 * horner(self.coefficients[:terms], 1 / self.lbar)

    def term_values(self) -> list:
        """Individual series terms, for convergence diagnostics."""
        lam = 1 / self.lbar
        return [self.lbar ** 2 * c * lam ** k
                for k, c in enumerate(self.coefficients)]


def horner(coeffs, x):
    acc = mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def required_derivative_order(n_terms: int) -> int:
    """Highest potential-derivative order an n_terms series consumes."""
    return max(2, 2 * (n_terms - 2) + 2)


def build_perturbation_polynomials(orbit: OrbitConfig, potential: PotentialModel,
                                   order: int) -> PerturbationPolynomials:
    """Perturbation coefficient tables up to half-order ``order``.

    Half-order k >= 2 needs the (k+2)-th potential derivative at r0.
    """
    if order + 2 > potential.derivative_cap:
        raise DerivativeUnavailable(
            f"half-order {order} needs derivative order {order + 2}, "
            f"cap is {potential.derivative_cap}")
    r0, w, beta, q = orbit.r0, orbit.w, orbit.beta, orbit.q
    two_beta_1 = 2 * beta + 1
    polys = [[two_beta_1 / 2, mpf(0), w ** 2 / 2]]
    if order >= 1:
        b1 = -2 + r0 ** 5 * potential.derivative(r0, 3) / (6 * q)
        polys.append([mpf(0), -two_beta_1, mpf(0), b1])
    fact = mpf(6)  # (n+1)! running value, seeded at n = 2
    for n in range(2, order + 1):
        fact *= n + 2
        sign = -1 if n % 2 else 1
        row = [mpf(0)] * (n + 3)
        row[n] = sign * two_beta_1 * mpf(n + 1) / 2
        row[n - 2] += sign * beta * (beta + 1) / 2 * (n - 1)
        row[n + 2] = (sign * mpf(n + 3) / 2
                      + r0 ** (n + 4) * potential.derivative(r0, n + 2) / (q * fact))
        polys.append(row)
    return PerturbationPolynomials(polys, orbit)


def _accumulate_product(out, a, b, scale):
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += scale * ai * bj


def solve_riccati_hierarchy(polys: PerturbationPolynomials, orbit: OrbitConfig,
                            order: int) -> RiccatiSolution:
    """Solve the coefficient hierarchy for ``order`` eigenvalue corrections.

    Runs through half-orders k = 1 .. 2*order.  At each k the balances
    split by parity: the odd-in-x part determines G_{k-1}, the even part
    determines U_k, and at even k the leftover constant gives the next
    eigenvalue correction.  At odd k the constant must cancel identically,
    which is checked.
    """
    if orbit.problem.nr != 0:
        raise OrderUnsupported(
            "corrections beyond the leading terms assume a nodeless state (nr = 0)")
    w, beta = orbit.w, orbit.beta
    if w == 0:
        raise HierarchyBreakdown("oscillation frequency w = 0")
    k_max = 2 * order
    if polys.max_order < k_max:
        raise DerivativeUnavailable(
            f"need perturbation polynomials to half-order {k_max}, "
            f"have {polys.max_order}")
    v = polys.polys
    half = mpf(1) / 2
    consistency_tol = mpf(10) ** (-(mp.dps - 12))

    u_dense = [[mpf(0), -w]]            # U_0 = -w x
    g_dense = []
    odd_coeffs = [[mpf(0), -w]]         # D_{m,0}
    even_coeffs = []
    corrections = []

    for k in range(1, k_max + 1):
        known = [mpf(0)] * (2 * k + 3)
        for j, c in enumerate(v[k]):
            known[j] += c
        # products of already-solved terms; the (0, k) pairs stay on the
        # unknown side as the w*x pivot
        for n in range(1, k):
            p = k - n
            if n <= p:
                _accumulate_product(known, u_dense[n], u_dense[p],
                                    mpf(-1) if n < p else -half)
        for n in range(0, k - 1):
            p = k - 2 - n
            if n <= p:
                _accumulate_product(known, g_dense[n], g_dense[p],
                                    mpf(-1) if n < p else -half)
        for n in range(1, k):
            p = k - 1 - n
            _accumulate_product(known, u_dense[n], g_dense[p], mpf(-1))

        # odd balances, descending: w*C_m at degree 2m+1 against the
        # derivative of the next coefficient up
        c_row = [mpf(0)] * (k + 1)
        for d in range(2 * k + 1, 0, -2):
            m = (d - 1) // 2
            upper = c_row[m + 1] if m + 1 <= k else mpf(0)
            c_row[m] = (mpf(d + 1) / 2 * upper - known[d]) / w
        g_poly = [mpf(0)] * (2 * k + 1)
        for m, coeff in enumerate(c_row):
            g_poly[2 * m] = coeff
        g_dense.append(g_poly)
        even_coeffs.append(c_row)

        # even balances, descending, for U_k
        d_row = [mpf(0)] * (k + 2)
        for d in range(2 * k + 2, 1, -2):
            m = d // 2
            upper = d_row[m + 1] if m + 1 <= k + 1 else mpf(0)
            d_row[m] = (mpf(d + 1) / 2 * upper - known[d]) / w
        u_poly = [mpf(0)] * (2 * k + 2)
        for m in range(1, k + 2):
            u_poly[2 * m - 1] = d_row[m]
        u_dense.append(u_poly)
        odd_coeffs.append(d_row)

        # constant balance: eigenvalue correction at even k, identity at odd k
        constant = -half * d_row[1] + known[0]
        if k % 2 == 0:
            extra = beta * (beta + 1) / 2 if k == 2 else mpf(0)
            corrections.append(constant - extra)
        else:
            scale = max(max(abs(x) for x in d_row),
                        max(abs(x) for x in c_row), mpf(1))
            if abs(constant) > consistency_tol * scale:
                raise HierarchyBreakdown(
                    f"constant balance at odd half-order {k} is {constant}")

    return RiccatiSolution(odd_coeffs, even_coeffs, corrections, orbit)


def assemble_energy_series(riccati: RiccatiSolution | None, orbit: OrbitConfig,
                           order: int = DEFAULT_TERMS) -> EnergySeries:
    """Collect ``order`` energy coefficients from the solved hierarchy.

    The first two come from the orbit configuration; correction j lands at
    coefficient j + 2 divided by r0^2 (the constant shift beta(beta+1)/2
    joins the first correction).  Orders <= 2 need no hierarchy.
    """
    coeffs = [orbit.e_minus2, orbit.e_minus1]
    if order > 2:
        if riccati is None:
            raise OrderUnsupported("hierarchy solution required beyond two terms")
        need = order - 2
        if len(riccati.corrections) < need:
            raise DerivativeUnavailable(
                f"{order}-term series needs {need} corrections, "
                f"have {len(riccati.corrections)}")
        r0_sq = orbit.r0 ** 2
        lam0 = riccati.corrections[0]
        coeffs.append((orbit.beta * (orbit.beta + 1) / 2 + lam0) / r0_sq)
        for j in range(1, need):
            coeffs.append(riccati.corrections[j] / r0_sq)
    return EnergySeries(coeffs[:order], orbit.lbar, orbit)


def energy_series(problem, n_terms: int = DEFAULT_TERMS) -> EnergySeries:
    """Full chain: orbit solve, hierarchy, assembled series."""
    from .classical import solve_r0

    orbit = solve_r0(problem)
    if n_terms <= 2 or problem.nr != 0:
        if n_terms > 2:
            raise OrderUnsupported(
                "corrections beyond the leading terms assume nr = 0")
        return assemble_energy_series(None, orbit, n_terms)
    polys = build_perturbation_polynomials(orbit, problem.potential,
                                           2 * (n_terms - 2))
    riccati = solve_riccati_hierarchy(polys, orbit, n_terms - 2)
    return assemble_energy_series(riccati, orbit, n_terms)


def reconstruct_wavefunction(riccati: RiccatiSolution, orbit: OrbitConfig,
                             grid, normalize: bool = False) -> np.ndarray:
    """Unnormalized nodeless wavefunction exp(U(x)) on a radial grid.

    Integrates each log-derivative monomial analytically, evaluates at
    x(r) = sqrt(lbar) (r - r0)/r0 and exponentiates.  With ``normalize``
    the result is scaled to unit L2 norm by trapezoidal quadrature, which
    needs at least 16 grid points.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if normalize and grid.size < 16:
        raise GridTooCoarse(
            f"normalization needs >= 16 grid points, got {grid.size}")
    if np.any(grid <= 0):
        raise ValueError("wavefunction grid must be at r > 0")

    lbar = orbit.lbar
    scale = 1 / sqrt(lbar)
    n_half_orders = len(riccati.odd_coeffs)
    # antiderivative of U_k + G_{k-1}, weighted by lbar^(-k/2)
    antiderivative = {}
    for k in range(n_half_orders):
        terms = list(riccati.odd_poly(k))
        if k >= 1:
            g = riccati.even_poly(k - 1)
            terms += [mpf(0)] * (len(g) - len(terms))
            for j, c in enumerate(g):
                terms[j] += c
        weight = scale ** k
        for j, c in enumerate(terms):
            if c:
                antiderivative[j + 1] = antiderivative.get(j + 1, mpf(0)) + weight * c / (j + 1)

    powers = sorted(antiderivative)
    root_lbar = sqrt(lbar)
    values = np.empty(grid.size, dtype=np.float64)
    for i, r in enumerate(grid):
        x = root_lbar * (to_mpf(float(r)) - orbit.r0) / orbit.r0
        u = mpf(0)
        for j in powers:
            u += antiderivative[j] * x ** j
        values[i] = float(mp_exp(u))
    if normalize:
        norm = np.sqrt(np.trapezoid(values ** 2, grid))
        if norm > 0:
            values /= norm
    return values
