import pytest

from pslet import QuantumProblem, solve_problem


@pytest.fixture(scope="session")
def solved():
    """Memoized full solves, shared across the whole run."""
    cache = {}

    def get(mode, value, l, nr=0, n_terms=10, dps=50):
        key = (mode, str(value), l, nr, n_terms, dps)
        if key not in cache:
            if mode == "scaled":
                problem = QuantumProblem.scaled(value, l, nr)
            else:
                problem = QuantumProblem.dimensional(value, l, nr)
            cache[key] = solve_problem(problem, n_terms=n_terms, dps=dps)
        return cache[key]

    return get
