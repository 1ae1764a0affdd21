"""Recorded sign constants for the closed-form Hormander routes.

Each closed form for ``q`` is compared with the definitional route (a Maslov
index difference along synthesized paths) on the doubled-space rotation vector
``q(Delta, Gr(R(-pi/2)); Delta, Gr(R(pi/2)))``. The resulting signs do not
depend on the signature convention, because both sides negate together.
:func:`calibrate` recomputes them; the test suite checks the recomputation
against the values recorded here.
"""

from __future__ import annotations

EPSILON_Q = -1
"""Sign applied to the chart-difference closed form."""

KASHIWARA_SIGN = 1
"""Sign applied to the Kashiwara-difference route."""

THREE_SIGNATURE_SIGN = 1
"""Sign applied to the three-signature (psi-Cayley) route."""

ROUTES = ("chart_difference", "kashiwara_difference", "three_signature")

RECORDED = {
    "chart_difference": EPSILON_Q,
    "kashiwara_difference": KASHIWARA_SIGN,
    "three_signature": THREE_SIGNATURE_SIGN,
}


def calibration_vector(force_degenerate: bool = False):
    """``(L0, L1, L0', L1')`` of the rotation vector in the doubled plane.

    With ``force_degenerate`` the last entry is replaced by ``L1``, which makes
    every route vanish and leaves the sign undetermined.
    """
    import numpy as np

    from .lagr import diagonal
    from .sympl import SymplecticSpace, graph_lagrangian, rotation

    space = SymplecticSpace.standard(1)
    D = diagonal(space)
    A = graph_lagrangian(rotation(-np.pi / 2))
    B = A if force_degenerate else graph_lagrangian(rotation(np.pi / 2))
    return D, A, D, B


def calibrate(conv="paper", seed=0, force_degenerate: bool = False) -> dict:
    """Recompute the route signs against the definitional Hormander index.

    Raises
    ------
    CalibrationAmbiguous
        If the definitional paths disagree, or a value needed to fix a sign
        is zero.
    """
    import numpy as np

    from .cz import three_signature_q
    from .errors import CalibrationAmbiguous, PathSynthesisError
    from .forms import SignConvention, signature
    from .lagr import antidiagonal, chart_matrix, kashiwara
    from .maslov import hormander_by_definition
    from .sympl import SymplecticSpace, rotation

    conv = SignConvention.parse(conv)
    L0, L1, L0p, L1p = calibration_vector(force_degenerate)
    try:
        ref = hormander_by_definition(L0, L1, L0p, L1p, conv, seed=seed)
    except PathSynthesisError as exc:
        raise CalibrationAmbiguous(f"definitional route is inconclusive: {exc}") from exc
    if abs(ref.twice) != 2:
        raise CalibrationAmbiguous(f"definitional value {ref} does not have magnitude 1")

    aux = antidiagonal(SymplecticSpace.standard(1))
    raw = {
        "chart_difference": signature(chart_matrix(aux, L0, L1) - chart_matrix(aux, L0, L1p), conv),
        "kashiwara_difference": kashiwara(L1, L0p, L1p, conv) - kashiwara(L0, L0p, L1p, conv),
    }
    # the three-signature route reads the graphs back as matrices
    phi2 = rotation(-np.pi / 2) if force_degenerate else rotation(np.pi / 2)
    raw["three_signature"] = (
        three_signature_q(rotation(-np.pi / 2), phi2, -np.eye(2), conv)[0].twice
        * THREE_SIGNATURE_SIGN)
    signs = {}
    raw = {k: int(v) for k, v in raw.items()}
    for route, value in raw.items():
        if value == 0:
            raise CalibrationAmbiguous(f"route {route} vanishes on the calibration vector")
        signs[route] = 1 if (value > 0) == (ref.twice > 0) else -1
    return {
        "convention": conv.value,
        "definitional": str(ref),
        "raw_twice": raw,
        "signs": signs,
        "epsilon_q": signs["chart_difference"],
        "matches_recorded": signs == RECORDED,
        "vector": "q(Delta, Gr(R(-pi/2)); Delta, Gr(R(pi/2))) in the doubled plane",
    }
