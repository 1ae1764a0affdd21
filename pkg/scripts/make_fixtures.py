"""Regenerate the shipped fixture documents.

Input documents are written with the library dumpers. Expected values in
``derived_vectors.json`` are hand-derived closed forms, never library output.
"""

from pathlib import Path

import numpy as np

from symplindex import serialize
from symplindex.ham import harmonic
from symplindex.lagr import LagrangianFrame, vertical
from symplindex.maslov import LagrangianPath
from symplindex.meta import GeneratingFunction, MetaplecticElement
from symplindex.sympl import SymplecticPath, SymplecticSpace, rotation

OUT = Path(__file__).resolve().parents[1] / "src" / "symplindex" / "fixtures"
PLANE = SymplecticSpace.standard(1)


def line_path(ts) -> LagrangianPath:
    return LagrangianPath(PLANE, ts, np.array([[[np.cos(t)], [np.sin(t)]] for t in ts]))


def element(k: float, m: int) -> MetaplecticElement:
    z = np.zeros((1, 1))
    return MetaplecticElement(GeneratingFunction(z, np.array([[k]]), z), m)


DERIVED = {
    "schemaVersion": 1,
    "kind": "derived_vectors",
    "vectors": [
        {"id": "inertia_triple_form", "matrix": [[0, 0.5, -0.5], [0.5, 0, 0.5], [-0.5, 0.5, 0]],
         "expected": {"n_minus": 1, "n_zero": 0, "n_plus": 2}},
        {"id": "inverse_difference_scalar", "U": [[1, 0], [0, 1]], "Z": [[2, 0], [0, 2]],
         "expected": {"defect": 0}},
        {"id": "inverse_difference_mixed", "U": [[1, 0], [0, -1]], "Z": [[3, 0], [0, 1]],
         "expected": {"defect": 0}},
        {"id": "diagonal_transverse_quarter_graph", "theta": np.pi / 2,
         "expected": {"transverse": True, "det_phi_minus_id": 2}},
        {"id": "chart_vertical_horizontal", "line": [1, 1], "expected": {"matrix": [[1]]}},
        {"id": "chart_vertical_horizontal", "line": [1, -1], "expected": {"matrix": [[-1]]}},
        {"id": "chart_diagonal_rotation", "theta": 0.7,
         "expected": {"unnormalized_scale": 2 * np.tan(0.35), "orthonormal_scale": np.tan(0.35)}},
        {"id": "chart_swap_defect", "line": [1, 1], "expected": {"defect": 0}},
        {"id": "kashiwara_three_lines",
         "expected": {"paper": -1, "standard": 1}},
        {"id": "kashiwara_projection_three_lines", "expected": {"paper": -1, "standard": 1}},
        {"id": "maslov_rotation_family", "samples": 21, "interval": [np.pi / 4, 3 * np.pi / 4],
         "expected": {"paper": "+1", "standard": "-1"}},
        {"id": "maslov_constant_path", "expected": {"paper": "0", "standard": "0"}},
        {"id": "hormander_calibration_vector", "expected": {"paper": "+1", "standard": "-1"}},
        {"id": "hormander_closed_form_lines",
         "expected": {"magnitude": "1/2", "agrees_with_definition": True}},
        {"id": "hormander_doubled_chart_difference",
         "expected": {"chart_difference_over_identity": 4, "magnitude": "1"}},
        {"id": "cayley_hyperbolic", "Phi": [[2, 0], [0, 0.5]],
         "expected": {"matrix": [[0, -1.5], [-1.5, 0]]}},
        {"id": "cayley_quarter", "theta": np.pi / 2, "expected": {"matrix": [[-0.5, 0], [0, -0.5]]}},
        {"id": "psi_cayley_minus_identity", "theta": np.pi / 2,
         "expected": {"matrix": [[2, 0], [0, 2]]}},
        {"id": "psi_cayley_rotation", "psi_theta": 3 * np.pi / 2, "theta": np.pi / 2,
         "expected": {"matrix": [[1, 0], [0, 1]]}},
        {"id": "cz_rotation", "interval": [0, np.pi / 2], "samples": 41,
         "expected": {"paper": "-1", "standard": "+1"}},
        {"id": "cz_rotation", "interval": [0, np.pi], "samples": 81,
         "expected": {"paper": "-1", "standard": "+1"}},
        {"id": "cz_rotation", "interval": [0, 2 * np.pi], "samples": 161,
         "expected": {"paper": "-2", "standard": "+2"}},
        {"id": "cz_inverse_quarter", "expected": {"defect": "0"}},
        {"id": "cz_shift_quarter", "psi_theta": np.pi / 2,
         "expected": {"right_segment": "0", "consistent": True}},
        {"id": "cz_product_quarter", "expected": {"product_equals_single": True, "consistent": True}},
        {"id": "cz_product_cayley_quarter", "expected": {"cayley_sum": [[-1, 0], [0, -1]],
                                                         "consistent": True}},
        {"id": "cz_product_psi_quarter", "expected": {"c_minus": [[-2, 0], [0, -2]],
                                                      "c_plus": [[2, 0], [0, 2]],
                                                      "bracket_magnitude": "1", "consistent": True}},
        {"id": "cz_iterate_quarter", "N": 3,
         "expected": {"magnitudes": ["1", "1", "1"], "deviation_at_N": "2",
                      "exceeds_half_bound": True}},
        {"id": "admissible_psi_quarter", "N": 4, "expected": {"found": True}},
        {"id": "harmonic_endpoint", "steps": 1000, "expected": {"max_error": 1e-6}},
        {"id": "hyperbolic_closed_form", "t": 0.25,
         "expected": {"matrix": [[np.cosh(0.25), np.sinh(0.25)], [np.sinh(0.25), np.cosh(0.25)]]}},
        {"id": "harmonic_four_periods", "N": 4, "expected": {"matrix": [[1, 0], [0, 1]]}},
        {"id": "harmonic_iterates", "N": 8,
         "expected": {"magnitudes": ["1", "1", "1", "2", "3", "3", "3", "4"]}},
        {"id": "hyperbolic_iterates", "N": 8, "expected": {"indices": ["0"] * 8}},
        {"id": "free_matrix", "K": 1, "expected": {"matrix": [[0, 1], [-1, 0]]}},
        {"id": "free_matrix", "K": -1, "expected": {"matrix": [[0, -1], [1, 0]]}},
        {"id": "matrix_to_w_quarter", "theta": -np.pi / 2, "expected": {"P": 0, "K": 1, "Q": 0}},
        {"id": "determinant_identity_unit", "K": 1,
         "expected": {"wxx": -2, "det_phi_minus_id": 2}},
        {"id": "nu", "K": 1, "m": 0, "expected": {"nu": 3}},
        {"id": "nu", "K": 1, "m": 2, "expected": {"nu": 1}},
        {"id": "nu", "K": -1, "m": 1, "expected": {"nu": 1}},
        {"id": "inert_three_lines", "expected": {"paper": 0, "standard": 1}},
        {"id": "nu_compose_quarter", "K": 1, "m": 0, "expected": {"allowed": [1, 3]}},
        {"id": "nu_vs_cz_fixture", "K": 1, "m": 0, "expected": {"consistent": True}},
        {"id": "nu_vs_cz_fixture", "K": -1, "m": 1, "expected": {"consistent": True}},
    ],
}


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    docs = {
        "rotation_lagrangian_path.json": serialize.dump_lagrangian_path(
            line_path(np.linspace(np.pi / 4, 3 * np.pi / 4, 21))),
        "vertical_lagrangian.json": serialize.dump_lagrangian(vertical(1)),
        "constant_lagrangian_path.json": serialize.dump_lagrangian_path(LagrangianPath(
            PLANE, [0.0, 0.5, 1.0], [LagrangianFrame(PLANE, [1.0, 0.5])] * 3)),
        "undersampled_lagrangian_path.json": serialize.dump_lagrangian_path(
            line_path(np.arange(4) * np.pi / 2)),
        "quarter_rotation_path.json": serialize.dump_path(
            SymplecticPath.from_function(rotation, np.linspace(0.0, np.pi / 2, 41))),
        "harmonic_system.json": serialize.dump_system(harmonic()),
        "element_k1_m0.json": serialize.dump_element(element(1.0, 0)),
        "element_km1_m1.json": serialize.dump_element(element(-1.0, 1)),
        "derived_vectors.json": DERIVED,
    }
    for name, doc in docs.items():
        (OUT / name).write_text(serialize.dumps(doc))
        print(OUT / name)


if __name__ == "__main__":
    main()
