"""Radial potential models and the Z-dependent screening rules.

The screened-Coulomb (Yukawa) family V(r) = -Z exp(-alpha r)/r is the
workhorse; alpha = 0 reduces it to the pure Coulomb potential exactly,
value and derivatives alike.  Every model supplies d^n V/dr^n at any
r > 0 in extended precision, which the pseudoperturbation series consumes
up to high order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np
from mpmath import mp, mpf, exp as mp_exp

from .errors import InvalidCharge, NonPositiveRadius, OrderTooLarge
from .precision import to_mpf

DEFAULT_DERIVATIVE_CAP = 24


class PotentialKind(str, Enum):
    COULOMB = "coulomb"
    YUKAWA = "yukawa"
    CUSTOM = "custom"


@dataclass(frozen=True)
class PotentialModel:
    """A radial potential with closed-form derivatives of arbitrary order.

    Immutable after construction; safe to share across concurrent solves.
    For the Yukawa family the n-th derivative follows from the Leibniz rule
    applied to (-Z e^{-alpha r}) * (1/r):

        d^n V/dr^n = -Z e^{-alpha r} (-1)^n
                      sum_k C(n,k) alpha^k (n-k)! / r^{n-k+1}

    All summands share one sign, so the sum is free of cancellation.
    """

    kind: PotentialKind
    z: mpf
    alpha: mpf
    derivative_cap: int = DEFAULT_DERIVATIVE_CAP
    provider: Optional[Callable] = field(default=None, compare=False)
    reduced_precision: bool = False

    def __post_init__(self):
        if self.z <= 0:
            raise ValueError("potential strength Z must be positive")
        if self.alpha < 0:
            raise ValueError("screening alpha must be non-negative")

    @classmethod
    def coulomb(cls, z, derivative_cap: int = DEFAULT_DERIVATIVE_CAP) -> "PotentialModel":
        return cls(PotentialKind.COULOMB, to_mpf(z), mpf(0), derivative_cap)

    @classmethod
    def yukawa(cls, z, alpha, derivative_cap: int = DEFAULT_DERIVATIVE_CAP) -> "PotentialModel":
        return cls(PotentialKind.YUKAWA, to_mpf(z), to_mpf(alpha), derivative_cap)

    @classmethod
    def custom(cls, provider: Callable, z=1, alpha=0,
               derivative_cap: int = DEFAULT_DERIVATIVE_CAP,
               reduced_precision: bool = False) -> "PotentialModel":
        """Custom potential from an analytic derivative provider(r, order)."""
        return cls(PotentialKind.CUSTOM, to_mpf(z), to_mpf(alpha), derivative_cap,
                   provider=provider, reduced_precision=reduced_precision)

    @classmethod
    def custom_from_value(cls, value_fn: Callable, z=1, alpha=0,
                          derivative_cap: int = DEFAULT_DERIVATIVE_CAP) -> "PotentialModel":
        """Custom potential from a value-only function, differentiated numerically.

        High-order numerical differentiation is fragile; results built on this
        fallback carry ``reduced_precision=True`` so downstream reports can
        flag them.
        """

        def provider(r, order):
            if order == 0:
                return to_mpf(value_fn(r))
            return mp.diff(value_fn, r, order)

        return cls.custom(provider, z=z, alpha=alpha, derivative_cap=derivative_cap,
                          reduced_precision=True)

    # -- evaluation --

    def value(self, r) -> mpf:
        return self.derivative(r, 0)

    def derivative(self, r, n: int) -> mpf:
        """d^n V/dr^n at r > 0, exact closed form for Coulomb/Yukawa."""
        r = to_mpf(r)
        if r <= 0:
            raise NonPositiveRadius(f"potential evaluated at r = {r}")
        if n < 0 or n > self.derivative_cap:
            raise OrderTooLarge(
                f"derivative order {n} exceeds cap {self.derivative_cap}")
        if self.kind is PotentialKind.CUSTOM:
            return to_mpf(self.provider(r, n))
        s = mpf(0)
        for k in range(n + 1):
            s += (math.comb(n, k) * self.alpha ** k * math.factorial(n - k)
                  / r ** (n - k + 1))
        sign = -1 if n % 2 == 0 else 1
        if self.alpha == 0:
            return sign * self.z * s
        return sign * self.z * mp_exp(-self.alpha * r) * s

    def value_floats(self, r: np.ndarray) -> np.ndarray:
        """Vectorized float64 values for grid-based solvers."""
        r = np.asarray(r, dtype=np.float64)
        if self.kind is PotentialKind.CUSTOM:
            return np.array([float(self.provider(float(ri), 0)) for ri in r])
        return -float(self.z) * np.exp(-float(self.alpha) * r) / r


@dataclass(frozen=True)
class ScreeningRule:
    """Z-dependence of the neutral-atom screening parameter.

    Dimensional mode: alpha(Z) = alpha0 * Z^(1/3) * (1 - 1/Z)^(2/3).
    Scaled mode divides by Z; the result is zero at Z = 1, peaks at Z = 2
    (0.38891326...) and decreases toward zero, so physically eligible scaled
    screenings always lie in [0, 0.4).

    ``alpha0`` stays a decimal string until use so it picks up the ambient
    precision of the computation it enters.
    """

    mode: str = "dimensional"  # "dimensional" | "scaled"
    alpha0: str = "0.98"

    def __post_init__(self):
        if self.mode not in ("dimensional", "scaled"):
            raise ValueError(f"unknown screening mode {self.mode!r}")


def screening_alpha(rule: ScreeningRule, z) -> mpf:
    """Evaluate the screening rule at integer nuclear charge Z >= 1."""
    if isinstance(z, float) and not z.is_integer():
        raise InvalidCharge(f"Z must be an integer >= 1, got {z}")
    z = int(z)
    if z < 1:
        raise InvalidCharge(f"Z must be an integer >= 1, got {z}")
    zm = mpf(z)
    alpha = to_mpf(rule.alpha0) * zm ** (mpf(1) / 3) * (1 - 1 / zm) ** (mpf(2) / 3)
    if rule.mode == "scaled":
        return alpha / zm
    return alpha
