"""Bound-state eigenvalues of screened-Coulomb potentials.

A pseudoperturbative expansion in the inverse shifted angular momentum
1/lbar, carried to high order in extended precision, accelerated with Pade
approximants, and cross-checked by an independent Numerov shooting solver.
"""

from .classical import OrbitConfig, QuantumProblem, frequency_w, solve_r0
from .oracle import OracleResult, RadialGrid, oracle_eigenvalue
from .pade import PadeEstimate, StabilityReport, pade_table, stability_report
from .pipeline import (EnergyRecord, SolveResult, compare_table, convert_units,
                       make_record, run_table, solve_problem)
from .potentials import PotentialModel, ScreeningRule, screening_alpha
from .series import (EnergySeries, PerturbationPolynomials, RiccatiSolution,
                     assemble_energy_series, build_perturbation_polynomials,
                     energy_series, reconstruct_wavefunction,
                     solve_riccati_hierarchy)

__version__ = "0.1.0"

__all__ = [
    "EnergyRecord", "EnergySeries", "OracleResult", "OrbitConfig",
    "PadeEstimate", "PerturbationPolynomials", "PotentialModel",
    "QuantumProblem", "RadialGrid", "RiccatiSolution", "ScreeningRule",
    "SolveResult", "StabilityReport", "assemble_energy_series",
    "build_perturbation_polynomials", "compare_table", "convert_units",
    "energy_series", "frequency_w", "make_record", "oracle_eigenvalue",
    "pade_table", "reconstruct_wavefunction", "run_table",
    "screening_alpha", "solve_problem", "solve_r0", "solve_riccati_hierarchy",
    "stability_report",
]
