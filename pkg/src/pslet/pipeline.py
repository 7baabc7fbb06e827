"""End-to-end runs: solve bundles, flat records, and the built-in tables.

A record carries everything a table row needs, as plain floats rounded to
15 significant digits so that emitted csv/json round-trips exactly.  The
built-in table ids reproduce the reference data sets:

    T1  K-shell (l=0) neutral-atom binding energies in keV, Z = 3..84
    T2  L-shell (l=1) neutral-atom binding energies in keV, Z = 9..84
    T3  scaled screened-Coulomb ground state, alpha' in {0.1,0.2,0.3,0.4}
    T4  scaled screened-Coulomb ground state, alpha' in {0.01,0.02,0.03}
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from mpmath import mp, mpf

from .classical import OrbitConfig, QuantumProblem, solve_r0
from .errors import PsletError
from .oracle import RadialGrid, oracle_eigenvalue
from .pade import PadeEstimate, pade_table, stability_report
from .precision import DEFAULT_DPS
from .series import (DEFAULT_TERMS, EnergySeries, assemble_energy_series,
                     build_perturbation_polynomials, solve_riccati_hierarchy)

EV_PER_HARTREE = "27.196"  # the 2 Ry convention the reference tables use

# Pade spread above this (relative) marks a row as low-confidence: the
# series is too divergent for the acceleration to pin the value down.
LOW_CONFIDENCE_SPREAD = 1e-3


def convert_units(value, target: str):
    """Convert an energy in hartree to hartree/eV/keV (2 Ry = 27.196 eV)."""
    if target == "hartree":
        return value
    if target == "eV":
        return value * mpf(EV_PER_HARTREE)
    if target == "keV":
        return value * mpf(EV_PER_HARTREE) / 1000
    raise ValueError(f"unknown unit {target!r}")


@dataclass(frozen=True)
class SolveResult:
    """Full-precision bundle from one series solve."""

    problem: QuantumProblem
    orbit: OrbitConfig
    series: EnergySeries
    pade: PadeEstimate


def solve_problem(problem: QuantumProblem, n_terms: int = DEFAULT_TERMS,
                  dps: int = DEFAULT_DPS, max_n: int = 4,
                  max_m: int = 5) -> SolveResult:
    """Orbit solve, coefficient hierarchy, series and Pade table."""
    with mp.workdps(dps):
        orbit = solve_r0(problem)
        polys = build_perturbation_polynomials(orbit, problem.potential,
                                               2 * (n_terms - 2))
        riccati = solve_riccati_hierarchy(polys, orbit, n_terms - 2)
        series = assemble_energy_series(riccati, orbit, n_terms)
        pade = pade_table(series, max_n=max_n, max_m=max_m)
        return SolveResult(problem, orbit, series, pade)


def _round15(x) -> Optional[float]:
    if x is None:
        return None
    return float(f"{float(x):.15g}")


@dataclass
class EnergyRecord:
    """Flat, unit-annotated result row for table and CLI output."""

    mode: str
    z: Optional[int]
    alpha_prime: Optional[float]
    l: int
    nr: int
    r0: float
    w: float
    beta: float
    lbar: float
    energy_sum: float            # truncated-series value, hartree-scale units
    energy_pade44: float
    energy_pade45: Optional[float]
    uncertainty: float
    agreement_digits: int
    energy_kev: Optional[float] = None      # dimensional rows only
    oracle_energy: Optional[float] = None
    oracle_diff: Optional[float] = None
    low_confidence: bool = False
    flags: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "z": self.z,
            "alpha_prime": self.alpha_prime,
            "l": self.l,
            "nr": self.nr,
            "r0": self.r0,
            "w": self.w,
            "beta": self.beta,
            "lbar": self.lbar,
            "energy_sum": self.energy_sum,
            "energy_pade44": self.energy_pade44,
            "energy_pade45": self.energy_pade45,
            "uncertainty": self.uncertainty,
            "agreement_digits": self.agreement_digits,
            "energy_kev": self.energy_kev,
            "oracle_energy": self.oracle_energy,
            "oracle_diff": self.oracle_diff,
            "low_confidence": self.low_confidence,
        }


def make_record(problem: QuantumProblem, n_terms: int = DEFAULT_TERMS,
                dps: int = DEFAULT_DPS, with_oracle: bool = False,
                oracle_points: int = 20000) -> EnergyRecord:
    result = solve_problem(problem, n_terms=n_terms, dps=dps)
    with mp.workdps(dps):
        report = stability_report(result.pade)
        raw = result.series.partial_sum()
        best = result.pade.best
        refined = result.pade.refined

        z = alpha_prime = None
        energy_kev = None
        if problem.mode == "dimensional":
            z = int(problem.potential.z)
            energy_kev = _round15(convert_units(best, "keV"))
        elif problem.mode == "scaled":
            alpha_prime = _round15(problem.potential.alpha)

        spread = float(abs(report.uncertainty)) / max(abs(float(best)), 1e-300)
        low_confidence = spread > LOW_CONFIDENCE_SPREAD
        flags = ["low-confidence"] if low_confidence else []
        if problem.potential.reduced_precision:
            flags.append("reduced-precision")

        oracle_energy = oracle_diff = None
        if with_oracle:
            grid = RadialGrid.default_for(float(result.orbit.leading_energy),
                                          count=oracle_points)
            oracle = oracle_eigenvalue(problem.potential, problem.l, problem.nr,
                                       grid=grid)
            oracle_energy = _round15(oracle.energy)
            oracle_diff = _round15(abs(float(best) - oracle.energy))

        return EnergyRecord(
            mode=problem.mode, z=z, alpha_prime=alpha_prime,
            l=problem.l, nr=problem.nr,
            r0=_round15(result.orbit.r0), w=_round15(result.orbit.w),
            beta=_round15(result.orbit.beta), lbar=_round15(result.orbit.lbar),
            energy_sum=_round15(raw), energy_pade44=_round15(best),
            energy_pade45=_round15(refined) if refined is not None else None,
            uncertainty=_round15(report.uncertainty),
            agreement_digits=report.agreement_digits,
            energy_kev=energy_kev, oracle_energy=oracle_energy,
            oracle_diff=oracle_diff, low_confidence=low_confidence,
            flags=flags)


@dataclass(frozen=True)
class TableSpec:
    table_id: str
    mode: str
    l: int
    z_values: tuple = ()
    alpha_primes: tuple = ()


TABLES = {
    "T1": TableSpec("T1", "dimensional", 0,
                    z_values=(3, 6, 9, 14, 19, 24, 29, 34, 39, 44, 49, 54,
                              59, 64, 69, 74, 79, 84)),
    "T2": TableSpec("T2", "dimensional", 1,
                    z_values=(9, 14, 19, 24, 29, 34, 39, 44, 49, 54,
                              59, 64, 69, 74, 79, 84)),
    "T3": TableSpec("T3", "scaled", 0, alpha_primes=("0.1", "0.2", "0.3", "0.4")),
    "T4": TableSpec("T4", "scaled", 0, alpha_primes=("0.01", "0.02", "0.03")),
}


def table_problems(table_id: str) -> list:
    spec = TABLES[table_id]
    if spec.mode == "dimensional":
        return [QuantumProblem.dimensional(z, spec.l) for z in spec.z_values]
    return [QuantumProblem.scaled(ap, spec.l) for ap in spec.alpha_primes]


def run_table(table_id: str, n_terms: int = DEFAULT_TERMS,
              dps: int = DEFAULT_DPS, with_oracle: bool = False):
    """All rows of a built-in table, in input order.

    Rows that fail keep their slot in the failure list and do not abort the
    run; callers decide how to surface them.
    """
    if table_id not in TABLES:
        raise ValueError(f"unknown table id {table_id!r}; choose from {sorted(TABLES)}")
    records, failures = [], []
    for problem in table_problems(table_id):
        try:
            records.append(make_record(problem, n_terms=n_terms, dps=dps,
                                       with_oracle=with_oracle))
        except PsletError as exc:
            failures.append((problem, exc))
    return records, failures


@dataclass(frozen=True)
class ComparisonRow:
    alpha_prime: float
    series_energy: float
    oracle_energy: Optional[float]
    difference: Optional[float]
    agreement_digits: Optional[int]
    passed: Optional[bool]
    note: str = ""


def compare_table(table_id: str = "T3", tolerance: float = 1e-6,
                  n_terms: int = DEFAULT_TERMS, dps: int = DEFAULT_DPS):
    """Series-vs-oracle comparison over a scaled table's rows."""
    spec = TABLES[table_id]
    if spec.mode != "scaled":
        raise ValueError("comparison runs need a scaled table (T3 or T4)")
    rows = []
    for ap in spec.alpha_primes:
        problem = QuantumProblem.scaled(ap, spec.l)
        record = make_record(problem, n_terms=n_terms, dps=dps)
        try:
            grid = RadialGrid.default_for(record.energy_sum)
            oracle = oracle_eigenvalue(problem.potential, problem.l, problem.nr,
                                       grid=grid)
        except PsletError as exc:
            rows.append(ComparisonRow(float(mpf(ap)), record.energy_pade44,
                                      None, None, None, None,
                                      note=f"oracle failed: {exc}"))
            continue
        diff = abs(record.energy_pade44 - oracle.energy)
        digits = _agreement_digits(record.energy_pade44, oracle.energy)
        note = "low-confidence" if record.low_confidence else ""
        rows.append(ComparisonRow(float(mpf(ap)), record.energy_pade44,
                                  _round15(oracle.energy), _round15(diff),
                                  digits, diff < tolerance, note))
    return rows


def _agreement_digits(a: float, b: float) -> int:
    import math

    scale = max(abs(a), abs(b))
    if scale == 0:
        return 15
    diff = abs(a - b)
    if diff == 0:
        return 15
    return max(0, int(math.floor(-math.log10(diff / scale))))
