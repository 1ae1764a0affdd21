"""One pass/fail test per acceptance criterion, at the stated trial counts."""

import time

import numpy as np

from symplindex.cli import main
from symplindex.cz import iterate_cz
from symplindex.forms import PAPER, STANDARD
from symplindex.ham import catalog, harmonic, integrate_fundamental, iterate_index_report
from symplindex.lagr import vertical
from symplindex.maslov import maslov_index
from symplindex.meta import GeneratingFunction, nu_vs_cz
from symplindex.serialize import load
from symplindex.sympl import SymplecticPath, rotation, symplectic_defect
from symplindex.verify import SUITES, run_check

from conftest import fixture_path

SEED = 2024


def check(suite, name, trials, min_passed=None):
    idx = [n for n, _, _ in SUITES[suite]].index(name)
    r = run_check(suite, idx, SEED, trials)
    assert r.failed == 0, r.as_dict()
    assert r.passed >= (trials if min_passed is None else min_passed), r.as_dict()
    return r


def test_criterion_01_cayley_symmetry_and_antisymmetry():
    start = time.perf_counter()
    check("cayley", "symmetry_and_antisymmetry", 1000)
    assert time.perf_counter() - start < 10.0


def test_criterion_02_generalized_cayley_kernel_law():
    r = check("cayley", "kernel_law", 500)
    assert r.skipped == 0


def test_criterion_03_inverse_difference_identity():
    check("forms", "inverse_difference_identity", 1000)


def test_criterion_04_kashiwara_index():
    for name in ("kashiwara_antisymmetry", "kashiwara_symplectic_invariance", "kashiwara_cocycle",
                 "kashiwara_projection_agreement"):
        check("lagr", name, 500)


def test_criterion_05_maslov_engine():
    for name in ("chart_independence", "concatenation_additivity", "refinement_stability",
                 "symplectic_invariance"):
        check("maslov", name, 300)
    path = load(fixture_path("rotation_lagrangian_path.json"), "lagrangian_path")
    assert maslov_index(path, vertical(1), PAPER) == 1
    assert maslov_index(path, vertical(1), STANDARD) == -1


def test_criterion_06_hormander_consistency():
    for name in ("hormander_path_independence", "hormander_kashiwara_route",
                 "hormander_closed_form_route", "hormander_three_signature_route"):
        check("maslov", name, 300)
    r = check("maslov", "calibration_vector", 1)
    assert r.trials == 1


def test_criterion_07_product_formulas():
    check("product", "first_product_formula", 500)
    # nondegenerate and psi formulas count only legal trials
    check("product", "cayley_product_formula", 300, min_passed=250)
    check("product", "psi_product_formula", 300, min_passed=250)
    check("product", "quarter_rotation_vector", 1)


def test_criterion_08_iteration_bound():
    check("iterate", "random_iteration_bound", 200)
    for system in catalog():
        assert iterate_index_report(system, 8, STANDARD).full_bound_holds, system.name
    quarter = SymplecticPath.from_function(rotation, np.linspace(0, np.pi / 2, 41))
    rows = iterate_cz(quarter, 8, STANDARD)
    assert [r.k for r in rows if not r.within_half_bound]
    assert all(r.within_full_bound for r in rows)


def test_criterion_09_hamiltonian_harness():
    sol = integrate_fundamental(harmonic(), 1000)
    assert np.linalg.norm(sol.path.end - rotation(np.pi / 2), 2) <= 1e-6
    assert all(symplectic_defect(M) <= 1e-10 * np.linalg.norm(M, 2) ** 2 for M in sol.path.matrices)
    rep = iterate_index_report(harmonic(), 8, STANDARD, sol=sol)
    assert [int(abs(r.index)) for r in rep.rows] == [1, 1, 1, 2, 3, 3, 3, 4]
    for system in catalog():
        assert iterate_index_report(system, 8, STANDARD).extension_matches_power, system.name


def test_criterion_10_metaplectic():
    check("metaplectic", "determinant_identity", 500)
    check("metaplectic", "generating_function_round_trip", 500)
    check("metaplectic", "inert_integrality", 500)
    check("metaplectic", "compose_matches_factorization_formula", 200)
    z = np.zeros((1, 1))
    for k, m in ((1.0, 0), (-1.0, 1)):
        for conv in (PAPER, STANDARD):
            r = nu_vs_cz(GeneratingFunction(z, [[k]], z), m, conv=conv)
            assert r.unique_matches and r.consistent
    check("metaplectic", "nu_vs_cz", 100)


def test_criterion_11_full_verify_run(capsys):
    start = time.perf_counter()
    code = main(["verify", "all", "--seed", "42", "--trials", "200"])
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    assert code == 0
    assert elapsed < 300.0
