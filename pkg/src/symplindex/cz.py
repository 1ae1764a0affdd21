"""Conley-Zehnder index of symplectic paths and the product formulas."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import expm

from . import calibration
from .cayley import cayley, psi_cayley, smallest_singular
from .errors import DegenerateEndpoint, SearchExhausted
from .forms import DEFAULT_TOL, PAPER, SignConvention, ToleranceContext, signature
from .lagr import diagonal
from .maslov import IndexValue, LagrangianPath, hormander_by_definition, maslov_index
from .sympl import (SymplecticPath, graph_lagrangian, inverse, product, random_symmetric,
                    standard_j)

ADMISSIBLE_MARGIN = 1e-6


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


def graph_path(path: SymplecticPath) -> LagrangianPath:
    """``t -> Gr(Phi(t))`` in the doubled space."""
    space = path.space
    I = np.broadcast_to(np.eye(space.dim), path.matrices.shape)
    frames = np.concatenate([I, path.matrices], axis=1)
    return LagrangianPath(space.doubled(), path.times, frames)


def cz_index(path: SymplecticPath, conv: SignConvention = PAPER,
             tol: ToleranceContext = DEFAULT_TOL, seed=0) -> IndexValue:
    """Diagonal-Maslov index of the graph path."""
    return maslov_index(graph_path(path), diagonal(path.space), conv, tol, seed=seed)


def cz_inverse_defect(path: SymplecticPath, conv: SignConvention = PAPER,
                      tol: ToleranceContext = DEFAULT_TOL) -> IndexValue:
    """``i(Phi^{-1}) + i(Phi)``; zero for every path."""
    return cz_index(path.inverse(), conv, tol) + cz_index(path, conv, tol)


def _q(L0, L1, L0p, L1p, conv, tol, seed) -> IndexValue:
    return hormander_by_definition(L0, L1, L0p, L1p, conv, tol, seed=seed)


@dataclass(frozen=True)
class ShiftResult:
    left: IndexValue
    right: IndexValue
    base: IndexValue
    correction: IndexValue

    @property
    def predicted(self) -> IndexValue:
        return self.base + self.correction

    @property
    def consistent(self) -> bool:
        return self.left == self.right == self.predicted


def shifted_cz(psi_star, path: SymplecticPath, side: Optional[Side] = None,
               conv: SignConvention = PAPER, tol: ToleranceContext = DEFAULT_TOL,
               seed=0) -> ShiftResult:
    """Index of ``psi* . Phi`` and ``Phi . psi*`` against the Hormander-corrected prediction.

    ``side`` is accepted for symmetry with the two products; both are always
    computed.
    """
    psi_star = np.asarray(psi_star, dtype=float)
    left = cz_index(path.left(psi_star).densified(relative=True), conv, tol)
    right = cz_index(path.right(psi_star).densified(relative=True), conv, tol)
    base = cz_index(path, conv, tol)
    D = diagonal(path.space)
    corr = _q(D, graph_lagrangian(inverse(psi_star)), graph_lagrangian(path.start),
              graph_lagrangian(path.end), conv, tol, seed)
    return ShiftResult(left, right, base, corr)


@dataclass(frozen=True)
class ProductReport:
    direct: IndexValue
    first: IndexValue
    second: IndexValue
    q_start: IndexValue
    q_end: IndexValue

    @property
    def decomposition(self) -> IndexValue:
        return self.first + self.second + self.q_start + self.q_end

    @property
    def consistent(self) -> bool:
        return self.direct == self.decomposition


def pointwise_product(path1: SymplecticPath, path2: SymplecticPath) -> SymplecticPath:
    return product(path1, path2).densified(relative=True)


def product_cz(path1: SymplecticPath, path2: SymplecticPath, conv: SignConvention = PAPER,
               tol: ToleranceContext = DEFAULT_TOL, seed=0) -> ProductReport:
    """Index of the pointwise product and its decomposition with two Hormander terms."""
    direct = cz_index(pointwise_product(path1, path2), conv, tol)
    i1 = cz_index(path1, conv, tol)
    i2 = cz_index(path2, conv, tol)
    D = diagonal(path1.space)
    gr = graph_lagrangian
    q0 = _q(D, gr(inverse(path2.start)), gr(path1.start), gr(path1.end), conv, tol, seed)
    q1 = _q(D, gr(inverse(path1.end)), gr(path2.start), gr(path2.end), conv, tol, seed + 1)
    return ProductReport(direct, i1, i2, q0, q1)


@dataclass(frozen=True)
class NondegenerateProductReport:
    direct: IndexValue
    swapped: IndexValue
    first: IndexValue
    second: IndexValue
    correction: IndexValue

    @property
    def predicted(self) -> IndexValue:
        return self.first + self.second + self.correction

    @property
    def consistent(self) -> bool:
        return self.direct == self.swapped == self.predicted


def _require_identity_start(path: SymplecticPath, name: str) -> None:
    if np.linalg.norm(path.start - np.eye(len(path.start)), 2) > 1e-9:
        raise ValueError(f"{name} must start at the identity")


def cayley_sum_correction(end1, end2, conv: SignConvention = PAPER,
                          tol: ToleranceContext = DEFAULT_TOL) -> IndexValue:
    """Calibrated correction ``-EPSILON_Q * sign(M_1 + M_2) / 2`` for paths from ``Id``."""
    try:
        M1 = cayley(end1, tol).matrix
        M2 = cayley(end2, tol).matrix
    except Exception as exc:
        raise DegenerateEndpoint(f"endpoint has eigenvalue 1: {exc}") from exc
    return IndexValue(-calibration.EPSILON_Q * signature(M1 + M2, conv, tol))


def product_cz_nondegenerate(path1: SymplecticPath, path2: SymplecticPath,
                             conv: SignConvention = PAPER,
                             tol: ToleranceContext = DEFAULT_TOL) -> NondegenerateProductReport:
    """Product index from the classical Cayley transforms of both endpoints."""
    _require_identity_start(path1, "path1")
    _require_identity_start(path2, "path2")
    corr = cayley_sum_correction(path1.end, path2.end, conv, tol)
    direct = cz_index(pointwise_product(path1, path2), conv, tol)
    swapped = cz_index(pointwise_product(path2, path1), conv, tol)
    return NondegenerateProductReport(direct, swapped, cz_index(path1, conv, tol),
                                      cz_index(path2, conv, tol), corr)


def three_signature_q(phi1, phi2, psi, conv: SignConvention = PAPER,
                      tol: ToleranceContext = DEFAULT_TOL) -> tuple[IndexValue, Optional[IndexValue]]:
    """``q(Delta, Gr(phi1); Delta, Gr(phi2))`` through psi-Cayley transforms.

    Returns the calibrated three-signature value and, when both transforms are
    invertible, the calibrated inverse-difference value (``None`` otherwise).
    """
    C1 = psi_cayley(psi, phi1, tol).matrix
    C2 = psi_cayley(psi, phi2, tol).matrix
    s = calibration.THREE_SIGNATURE_SIGN
    bracket = signature(C2 - C1, conv, tol) - signature(C2, conv, tol) + signature(C1, conv, tol)
    shortcut = None
    if smallest_singular(C1) > tol.threshold(C1) and smallest_singular(C2) > tol.threshold(C2):
        shortcut = IndexValue(s * signature(np.linalg.inv(C1) - np.linalg.inv(C2), conv, tol))
    return IndexValue(s * bracket), shortcut


@dataclass(frozen=True)
class PsiProductReport:
    direct: IndexValue
    first: IndexValue
    second: IndexValue
    correction: IndexValue
    shortcut: Optional[IndexValue]
    displayed_bracket: IndexValue
    psi: np.ndarray = field(repr=False)

    @property
    def predicted(self) -> IndexValue:
        return self.first + self.second + self.correction

    @property
    def consistent(self) -> bool:
        ok = self.direct == self.predicted
        if self.shortcut is not None:
            ok = ok and self.shortcut == self.correction
        return ok


def product_cz_psi(path1: SymplecticPath, path2: SymplecticPath, psi,
                   conv: SignConvention = PAPER,
                   tol: ToleranceContext = DEFAULT_TOL) -> PsiProductReport:
    """Product index with the Hormander correction from psi-Cayley transforms.

    The correction is ``q(Delta, Gr(Phi1(1)^{-1}); Delta, Gr(Phi2(1)))``. The
    bracket built from ``C_psi(Phi1(1))`` instead of ``C_psi(Phi1(1)^{-1})`` is
    recorded as ``displayed_bracket`` but does not enter the prediction.
    """
    _require_identity_start(path1, "path1")
    _require_identity_start(path2, "path2")
    psi = np.asarray(psi, dtype=float)
    e1, e2 = path1.end, path2.end
    corr, shortcut = three_signature_q(inverse(e1), e2, psi, conv, tol)
    C1 = psi_cayley(psi, e1, tol).matrix
    C2 = psi_cayley(psi, e2, tol).matrix
    displayed = IndexValue(signature(C2 - C1, conv, tol) - signature(C2, conv, tol)
                           + signature(C1, conv, tol))
    direct = cz_index(pointwise_product(path1, path2), conv, tol)
    return PsiProductReport(direct, cz_index(path1, conv, tol), cz_index(path2, conv, tol),
                            corr, shortcut, displayed, psi)


@dataclass(frozen=True)
class IterateRow:
    k: int
    index: IndexValue
    deviation: IndexValue
    half_bound: IndexValue
    full_bound: IndexValue

    @property
    def within_half_bound(self) -> bool:
        return self.deviation <= self.half_bound

    @property
    def within_full_bound(self) -> bool:
        return self.deviation <= self.full_bound


def deviation_row(k: int, n: int, index_k: IndexValue, index_1: IndexValue) -> IterateRow:
    dev = abs(abs(index_k) - k * abs(index_1))
    return IterateRow(k, index_k, dev, IndexValue(n * (k - 1)), IndexValue(2 * n * (k - 1)))


def iterate_cz(path: SymplecticPath, N: int, conv: SignConvention = PAPER,
               tol: ToleranceContext = DEFAULT_TOL) -> list[IterateRow]:
    """Indices of the pointwise powers ``Phi^k``, ``k = 1..N``, with both bounds."""
    if N < 1:
        raise ValueError("N must be at least 1")
    _require_identity_start(path, "path")
    rows = []
    i1 = None
    for k in range(1, N + 1):
        p = path if k == 1 else path.power(k).densified(relative=True)
        ik = cz_index(p, conv, tol)
        if i1 is None:
            i1 = ik
        rows.append(deviation_row(k, path.n, ik, i1))
    return rows


def admissibility_margin(psi, endpoint, N: int) -> float:
    """``min(s(psi - Id), s(endpoint^j - psi) for j <= N)`` with ``s`` the smallest singular value."""
    psi = np.asarray(psi, dtype=float)
    E = np.asarray(endpoint, dtype=float)
    m = smallest_singular(psi - np.eye(len(psi)))
    P = np.eye(len(psi))
    for _ in range(N):
        P = P @ E
        m = min(m, smallest_singular(P - psi))
    return m


def find_admissible_psi(endpoint, N: int, seed=0, margin: float = ADMISSIBLE_MARGIN,
                        max_trials: int = 10_000, extra=()) -> np.ndarray:
    """Seeded search for ``psi = exp(J S)`` in ``Sp_0`` and in ``Sp_{endpoint^j}``, ``j <= N``.

    ``extra`` lists further matrices ``psi`` must stay away from.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    endpoint = np.asarray(endpoint, dtype=float)
    rng = np.random.default_rng(seed)
    J = standard_j(len(endpoint) // 2)
    for _ in range(max_trials):
        psi = expm(J @ random_symmetric(rng, len(endpoint), bound=3.0))
        m = admissibility_margin(psi, endpoint, N)
        for X in extra:
            m = min(m, smallest_singular(np.asarray(X) - psi))
        if m >= margin:
            return psi
    raise SearchExhausted(f"no admissible psi found in {max_trials} trials")
