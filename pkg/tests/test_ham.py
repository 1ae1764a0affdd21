import numpy as np
import pytest

from symplindex.cz import cz_index
from symplindex.errors import StepTooLarge
from symplindex.forms import STANDARD
from symplindex.ham import (LinearHamiltonianSystem, catalog, extend_periodic, harmonic, hyperbolic,
                            index_table, integrate_fundamental, iterate_index_report, seam_gap)
from symplindex.sympl import rotation, symplectic_defect


@pytest.fixture(scope="module")
def harmonic_solution():
    return integrate_fundamental(harmonic(), 1000)


def test_harmonic_endpoint(harmonic_solution):
    assert np.linalg.norm(harmonic_solution.path.end - rotation(np.pi / 2), 2) <= 1e-6


def test_per_step_defect(harmonic_solution):
    for M in harmonic_solution.path.matrices:
        assert symplectic_defect(M) <= 1e-10 * np.linalg.norm(M, 2) ** 2
    assert harmonic_solution.max_defect <= 1e-10


def test_hyperbolic_closed_form():
    sol = integrate_fundamental(hyperbolic(), 1000)
    X = np.array([[0.0, 1.0], [1.0, 0.0]])
    t = sol.system.T
    assert np.allclose(sol.path.end, np.cosh(t) * np.eye(2) + np.sinh(t) * X, atol=1e-8)


def test_zero_hessian_is_stationary():
    sol = integrate_fundamental(LinearHamiltonianSystem.constant(np.zeros((2, 2)), 1.0), 50)
    assert np.allclose(sol.path.matrices, np.eye(2))
    rep = iterate_index_report(sol.system, 3, sol=sol)
    assert all(r.index == 0 for r in rep.rows)


def test_periodic_extension(harmonic_solution):
    assert np.array_equal(extend_periodic(harmonic_solution, 1).matrices, harmonic_solution.path.matrices)
    assert np.allclose(extend_periodic(harmonic_solution, 4).end, np.eye(2), atol=1e-6)
    assert seam_gap(harmonic_solution, 4) < 1e-8


def test_harmonic_table(harmonic_solution):
    rep = iterate_index_report(harmonic(), 8, STANDARD, sol=harmonic_solution)
    assert [int(abs(r.index)) for r in rep.rows] == [1, 1, 1, 2, 3, 3, 3, 4]
    table = index_table(rep)
    assert [row["k"] for row in table] == list(range(1, 9))
    assert rep.full_bound_holds


def test_hyperbolic_iterates_vanish():
    rep = iterate_index_report(hyperbolic(), 4, STANDARD)
    assert all(r.index == 0 and r.deviation == 0 for r in rep.rows)


@pytest.mark.parametrize("system", catalog(), ids=lambda s: s.name)
def test_extension_matches_power(system):
    rep = iterate_index_report(system, 8, STANDARD)
    assert rep.extension_matches_power
    assert rep.full_bound_holds


def test_halving_step_keeps_indices():
    sys = catalog()[-1]
    a = extend_periodic(integrate_fundamental(sys, 200), 3)
    b = extend_periodic(integrate_fundamental(sys, 400), 3)
    assert cz_index(a) == cz_index(b)


def test_errors():
    with pytest.raises(StepTooLarge):
        integrate_fundamental(LinearHamiltonianSystem.constant(100 * np.eye(2), 10.0), 10)
    with pytest.raises(ValueError, match="symmetric"):
        LinearHamiltonianSystem(1, 1.0, lambda t: np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError, match="periodic"):
        LinearHamiltonianSystem(1, 1.0, lambda t: t * np.eye(2))
    with pytest.raises(ValueError):
        extend_periodic(integrate_fundamental(harmonic(), 100), 0)
