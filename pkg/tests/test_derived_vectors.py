"""Hand-derived closed-form vectors shipped in ``fixtures/derived_vectors.json``."""

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import load_fixture
from symplindex.cayley import cayley, psi_cayley
from symplindex.cz import (admissibility_margin, cz_index, cz_inverse_defect, find_admissible_psi,
                           iterate_cz, product_cz, product_cz_nondegenerate, product_cz_psi,
                           shifted_cz, Side)
from symplindex.forms import PAPER, STANDARD, inertia, inverse_difference_identity_defect
from symplindex.ham import (extend_periodic, harmonic, hyperbolic, integrate_fundamental,
                            iterate_index_report)
from symplindex.lagr import (LagrangianFrame, antidiagonal, chart_matrix, chart_swap_defect,
                             diagonal, horizontal, kashiwara, kashiwara_via_projection, transverse,
                             vertical)
from symplindex.maslov import (IndexValue, LagrangianPath, hormander_by_definition,
                               hormander_closed_form, maslov_index)
from symplindex.meta import (GeneratingFunction, MetaplecticElement, free_matrix, inert,
                             matrix_to_w, nu, nu_compose, nu_vs_cz, wxx)
from symplindex.sympl import (SymplecticPath, SymplecticSpace, graph_lagrangian, rotation,
                              standard_j)

PLANE = SymplecticSpace.standard(1)
CONVS = {"paper": PAPER, "standard": STANDARD}
VECTORS = load_fixture("derived_vectors.json")["vectors"]


def line(*v) -> LagrangianFrame:
    return LagrangianFrame(PLANE, np.array(v, dtype=float))


def w1(k: float) -> GeneratingFunction:
    z = np.zeros((1, 1))
    return GeneratingFunction(z, np.array([[k]]), z)


def quarter() -> SymplecticPath:
    return SymplecticPath.from_function(rotation, np.linspace(0.0, np.pi / 2, 41))


def iv(text) -> IndexValue:
    return IndexValue.parse(str(text))


def per_convention(v, func):
    for name, conv in CONVS.items():
        expected = v["expected"][name]
        got = func(conv)
        assert (got == iv(expected)) if isinstance(got, IndexValue) else got == expected, name


def check_inertia(v):
    t = inertia(np.array(v["matrix"]))
    assert (t.n_minus, t.n_zero, t.n_plus) == tuple(v["expected"][k] for k in ("n_minus", "n_zero", "n_plus"))


def check_inverse_difference(v):
    for conv in CONVS.values():
        assert inverse_difference_identity_defect(np.array(v["U"]), np.array(v["Z"]), conv) == 0


def check_diagonal_transverse(v):
    R = rotation(v["theta"])
    assert transverse(diagonal(PLANE), graph_lagrangian(R))[0] is v["expected"]["transverse"]
    assert np.isclose(np.linalg.det(R - np.eye(2)), v["expected"]["det_phi_minus_id"])


def check_chart_lines(v):
    got = chart_matrix(vertical(1), horizontal(1), line(*v["line"]))
    assert np.allclose(got, v["expected"]["matrix"])


def check_chart_diagonal_rotation(v):
    # frame v -> (v, v) has squared length 2, the orthonormal one 1
    got = chart_matrix(diagonal(PLANE), antidiagonal(PLANE), graph_lagrangian(rotation(v["theta"])))
    assert np.allclose(got, v["expected"]["orthonormal_scale"] * np.eye(2))
    assert np.allclose(2 * got, v["expected"]["unnormalized_scale"] * np.eye(2))


def check_chart_swap(v):
    for conv in CONVS.values():
        assert chart_swap_defect(vertical(1), horizontal(1), line(*v["line"]), conv) == 0


def check_kashiwara(v):
    per_convention(v, lambda c: kashiwara(horizontal(1), line(1, 1), vertical(1), c))


def check_kashiwara_projection(v):
    per_convention(v, lambda c: kashiwara_via_projection(horizontal(1), line(1, 1), vertical(1), c))


def check_maslov_rotation(v):
    ts = np.linspace(*v["interval"], v["samples"])
    path = LagrangianPath(PLANE, ts, np.array([[[np.cos(t)], [np.sin(t)]] for t in ts]))
    per_convention(v, lambda c: maslov_index(path, vertical(1), c))


def check_maslov_constant(v):
    path = LagrangianPath.constant(line(1.0, 0.5), samples=5)
    per_convention(v, lambda c: maslov_index(path, vertical(1), c))


def check_calibration_vector(v):
    D = diagonal(PLANE)
    A, B = graph_lagrangian(rotation(-np.pi / 2)), graph_lagrangian(rotation(np.pi / 2))
    per_convention(v, lambda c: hormander_by_definition(D, A, D, B, c))


def check_closed_form_lines(v):
    for conv in CONVS.values():
        a = hormander_closed_form(vertical(1), line(1, 1), line(1, -1), horizontal(1), conv)
        b = hormander_by_definition(vertical(1), line(1, 1), vertical(1), line(1, -1), conv)
        assert abs(a) == iv(v["expected"]["magnitude"])
        assert (a == b) is v["expected"]["agrees_with_definition"]


def check_doubled_chart_difference(v):
    D, Do = diagonal(PLANE), antidiagonal(PLANE)
    A, B = graph_lagrangian(rotation(-np.pi / 2)), graph_lagrangian(rotation(np.pi / 2))
    diff = chart_matrix(Do, D, A) - chart_matrix(Do, D, B)
    assert np.allclose(2 * diff, v["expected"]["chart_difference_over_identity"] * np.eye(2))
    for conv in CONVS.values():
        assert abs(hormander_closed_form(D, A, B, Do, conv)) == iv(v["expected"]["magnitude"])


def check_cayley_matrix(v):
    Phi = np.array(v["Phi"]) if "Phi" in v else rotation(v["theta"])
    assert np.allclose(cayley(Phi).matrix, v["expected"]["matrix"])


def check_psi_cayley(v):
    psi = -np.eye(2) if "psi_theta" not in v else rotation(v["psi_theta"])
    assert np.allclose(psi_cayley(psi, rotation(v["theta"])).matrix, v["expected"]["matrix"])


def check_cz_rotation(v):
    path = SymplecticPath.from_function(rotation, np.linspace(*v["interval"], v["samples"]))
    per_convention(v, lambda c: cz_index(path, c))


def check_cz_inverse(v):
    for conv in CONVS.values():
        assert cz_inverse_defect(quarter(), conv) == iv(v["expected"]["defect"])


def check_cz_shift(v):
    for conv in CONVS.values():
        for side in Side:
            r = shifted_cz(rotation(v["psi_theta"]), quarter(), side, conv)
            assert r.right == iv(v["expected"]["right_segment"])
            assert r.consistent is v["expected"]["consistent"]


def check_cz_product(v):
    for conv in CONVS.values():
        r = product_cz(quarter(), quarter(), conv)
        assert (r.direct == cz_index(quarter(), conv)) is v["expected"]["product_equals_single"]
        assert r.consistent is v["expected"]["consistent"]


def check_cz_product_cayley(v):
    M = cayley(rotation(np.pi / 2)).matrix
    assert np.allclose(M + M, v["expected"]["cayley_sum"])
    for conv in CONVS.values():
        assert product_cz_nondegenerate(quarter(), quarter(), conv).consistent is v["expected"]["consistent"]


def check_cz_product_psi(v):
    psi = -np.eye(2)
    assert np.allclose(psi_cayley(psi, rotation(-np.pi / 2)).matrix, v["expected"]["c_minus"])
    assert np.allclose(psi_cayley(psi, rotation(np.pi / 2)).matrix, v["expected"]["c_plus"])
    for conv in CONVS.values():
        r = product_cz_psi(quarter(), quarter(), psi, conv)
        assert abs(r.correction) == iv(v["expected"]["bracket_magnitude"])
        assert r.consistent is v["expected"]["consistent"]


def check_cz_iterate(v):
    rows = iterate_cz(quarter(), v["N"], STANDARD)
    assert [abs(r.index) for r in rows] == [iv(x) for x in v["expected"]["magnitudes"]]
    assert rows[-1].deviation == iv(v["expected"]["deviation_at_N"])
    assert (not rows[-1].within_half_bound) is v["expected"]["exceeds_half_bound"]


def check_admissible_psi(v):
    psi = find_admissible_psi(rotation(np.pi / 2), v["N"], seed=0)
    assert (admissibility_margin(psi, rotation(np.pi / 2), v["N"]) >= 1e-6) is v["expected"]["found"]


def check_harmonic_endpoint(v):
    sol = integrate_fundamental(harmonic(), v["steps"])
    assert np.linalg.norm(sol.path.end - expm(np.pi / 2 * standard_j(1))) <= v["expected"]["max_error"]
    assert np.linalg.norm(sol.path.end - rotation(np.pi / 2)) <= v["expected"]["max_error"]


def check_hyperbolic_closed_form(v):
    sol = integrate_fundamental(hyperbolic(v["t"]), 1000)
    assert np.allclose(sol.path.end, v["expected"]["matrix"], atol=1e-9)


def check_harmonic_periods(v):
    sol = integrate_fundamental(harmonic(), 1000)
    assert np.allclose(extend_periodic(sol, v["N"]).end, v["expected"]["matrix"], atol=1e-9)


def check_harmonic_iterates(v):
    rep = iterate_index_report(harmonic(), v["N"], STANDARD)
    assert [abs(r.index) for r in rep.rows] == [iv(x) for x in v["expected"]["magnitudes"]]


def check_hyperbolic_iterates(v):
    for conv in CONVS.values():
        rep = iterate_index_report(hyperbolic(), v["N"], conv)
        assert [r.index for r in rep.rows] == [iv(x) for x in v["expected"]["indices"]]


def check_free_matrix(v):
    assert np.allclose(free_matrix(w1(v["K"])), v["expected"]["matrix"])


def check_matrix_to_w(v):
    W = matrix_to_w(rotation(v["theta"]))
    assert np.allclose([W.P[0, 0], W.K[0, 0], W.Q[0, 0]], [v["expected"][k] for k in "PKQ"])


def check_determinant_identity(v):
    W = w1(v["K"])
    assert np.allclose(wxx(W), v["expected"]["wxx"])
    assert np.isclose(np.linalg.det(free_matrix(W) - np.eye(2)), v["expected"]["det_phi_minus_id"])


def check_nu(v):
    assert nu(MetaplecticElement(w1(v["K"]), v["m"])) == v["expected"]["nu"]


def check_inert(v):
    per_convention(v, lambda c: inert(horizontal(1), line(1, 1), vertical(1), c))


def check_nu_compose(v):
    e = MetaplecticElement(w1(v["K"]), v["m"])
    for conv in CONVS.values():
        assert nu_compose(e, e, conv).value in v["expected"]["allowed"]


def check_nu_vs_cz(v):
    for conv in CONVS.values():
        assert nu_vs_cz(w1(v["K"]), v["m"], conv=conv).consistent is v["expected"]["consistent"]


CHECKS = {
    "inertia_triple_form": check_inertia,
    "inverse_difference_scalar": check_inverse_difference,
    "inverse_difference_mixed": check_inverse_difference,
    "diagonal_transverse_quarter_graph": check_diagonal_transverse,
    "chart_vertical_horizontal": check_chart_lines,
    "chart_diagonal_rotation": check_chart_diagonal_rotation,
    "chart_swap_defect": check_chart_swap,
    "kashiwara_three_lines": check_kashiwara,
    "kashiwara_projection_three_lines": check_kashiwara_projection,
    "maslov_rotation_family": check_maslov_rotation,
    "maslov_constant_path": check_maslov_constant,
    "hormander_calibration_vector": check_calibration_vector,
    "hormander_closed_form_lines": check_closed_form_lines,
    "hormander_doubled_chart_difference": check_doubled_chart_difference,
    "cayley_hyperbolic": check_cayley_matrix,
    "cayley_quarter": check_cayley_matrix,
    "psi_cayley_minus_identity": check_psi_cayley,
    "psi_cayley_rotation": check_psi_cayley,
    "cz_rotation": check_cz_rotation,
    "cz_inverse_quarter": check_cz_inverse,
    "cz_shift_quarter": check_cz_shift,
    "cz_product_quarter": check_cz_product,
    "cz_product_cayley_quarter": check_cz_product_cayley,
    "cz_product_psi_quarter": check_cz_product_psi,
    "cz_iterate_quarter": check_cz_iterate,
    "admissible_psi_quarter": check_admissible_psi,
    "harmonic_endpoint": check_harmonic_endpoint,
    "hyperbolic_closed_form": check_hyperbolic_closed_form,
    "harmonic_four_periods": check_harmonic_periods,
    "harmonic_iterates": check_harmonic_iterates,
    "hyperbolic_iterates": check_hyperbolic_iterates,
    "free_matrix": check_free_matrix,
    "matrix_to_w_quarter": check_matrix_to_w,
    "determinant_identity_unit": check_determinant_identity,
    "nu": check_nu,
    "inert_three_lines": check_inert,
    "nu_compose_quarter": check_nu_compose,
    "nu_vs_cz_fixture": check_nu_vs_cz,
}


def test_every_vector_has_a_check():
    assert {v["id"] for v in VECTORS} == set(CHECKS)


@pytest.mark.parametrize("vector", VECTORS, ids=[f"{i:02d}-{v['id']}" for i, v in enumerate(VECTORS)])
def test_derived_vector(vector):
    CHECKS[vector["id"]](vector)


def test_index_value_strings():
    assert str(IndexValue(3)) == "+3/2"
    assert str(IndexValue(-2)) == "-1"
    assert str(IndexValue(0)) == "0"
