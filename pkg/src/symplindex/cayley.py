"""Classical and psi-generalized symplectic Cayley transforms."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import AsymmetryError, DimensionMismatch, EigenvalueOne, PhiNotInSpPsi, PsiNotInSp0
from .forms import DEFAULT_TOL, ToleranceContext
from .sympl import standard_j

ASYMMETRY_LIMIT = 1e-6


class CayleyKind(enum.Enum):
    CLASSICAL = "classical"
    PSI = "psi"


@dataclass(frozen=True)
class CayleyValue:
    """Symmetric ``2n x 2n`` matrix with the relative asymmetry of the raw product."""

    matrix: np.ndarray
    kind: CayleyKind
    psi: Optional[np.ndarray] = None
    asymmetry: float = 0.0

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def _square(M, name: str) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise DimensionMismatch(f"{name} must be 2n x 2n, got {M.shape}")
    return M


def smallest_singular(A: np.ndarray) -> float:
    return float(np.linalg.svd(A, compute_uv=False)[-1])


def _margin_ok(A: np.ndarray, tol: ToleranceContext) -> tuple[bool, float]:
    s = smallest_singular(A)
    return s > tol.threshold(A), s


def relative_asymmetry(M: np.ndarray, reference: float = 0.0) -> float:
    """``||M - M^T|| / max(||M||, reference)``.

    ``reference`` is the magnitude of the operands ``M`` was computed from; it
    keeps rounding noise in a nearly vanishing product from counting as
    asymmetry.
    """
    scale = max(np.linalg.norm(M, 2), reference)
    if scale == 0:
        return 0.0
    return float(np.linalg.norm(M - M.T, 2) / scale)


def _finish(raw: np.ndarray, kind: CayleyKind, psi=None, reference: float = 0.0) -> CayleyValue:
    asym = relative_asymmetry(raw, reference)
    if asym > ASYMMETRY_LIMIT:
        raise AsymmetryError(f"Cayley product is not symmetric (relative defect {asym:.3e}); "
                             "the input is probably not symplectic")
    sym = (raw + raw.T) / 2
    sym.setflags(write=False)
    return CayleyValue(sym, kind, psi, asym)


def cayley(Phi, tol: ToleranceContext = DEFAULT_TOL) -> CayleyValue:
    """``M_Phi = J (Id + Phi)(Id - Phi)^{-1} / 2``.

    Raises
    ------
    EigenvalueOne
        If ``Id - Phi`` is singular under ``tol``.
    """
    Phi = _square(Phi, "Phi")
    I = np.eye(len(Phi))
    ok, s = _margin_ok(I - Phi, tol)
    if not ok:
        raise EigenvalueOne(f"Id - Phi is singular (smallest singular value {s:.3e})")
    J = standard_j(len(Phi) // 2)
    # (Id + Phi)(Id - Phi)^{-1} = ((Id - Phi)^{-T}(Id + Phi)^T)^T
    X = np.linalg.solve((I - Phi).T, (I + Phi).T).T
    return _finish(0.5 * J @ X, CayleyKind.CLASSICAL)


def in_sp_psi(Phi, psi, tol: ToleranceContext = DEFAULT_TOL) -> tuple[bool, float]:
    """Whether ``Phi - psi`` is invertible, with its smallest singular value."""
    Phi = _square(Phi, "Phi")
    psi = _square(psi, "psi")
    if Phi.shape != psi.shape:
        raise DimensionMismatch("Phi and psi act on different spaces")
    return _margin_ok(Phi - psi, tol)


def psi_cayley(psi, Phi, tol: ToleranceContext = DEFAULT_TOL) -> CayleyValue:
    """``C_psi(Phi) = J (psi - Id)(Phi - psi)^{-1}(Phi - Id)``."""
    Phi = _square(Phi, "Phi")
    psi = _square(psi, "psi")
    if Phi.shape != psi.shape:
        raise DimensionMismatch("Phi and psi act on different spaces")
    I = np.eye(len(Phi))
    ok, s = _margin_ok(psi - I, tol)
    if not ok:
        raise PsiNotInSp0(f"psi has eigenvalue 1 (smallest singular value of psi - Id {s:.3e})")
    ok, s = _margin_ok(Phi - psi, tol)
    if not ok:
        raise PhiNotInSpPsi(f"Phi - psi is singular (smallest singular value {s:.3e})")
    J = standard_j(len(Phi) // 2)
    inv = np.linalg.inv(Phi - psi)
    raw = J @ (psi - I) @ inv @ (Phi - I)
    reference = (np.linalg.norm(psi - I, 2) * np.linalg.norm(inv, 2)
                 * (1.0 + np.linalg.norm(Phi, 2)))
    return _finish(raw, CayleyKind.PSI, psi, reference)


def kernel_dim(A, tol: ToleranceContext = DEFAULT_TOL) -> int:
    """Number of singular values of ``A`` at or below the tolerance threshold."""
    A = np.asarray(A, dtype=float)
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(s <= tol.threshold(A)))


def rank(A, tol: ToleranceContext = DEFAULT_TOL) -> int:
    A = np.asarray(A, dtype=float)
    return A.shape[1] - kernel_dim(A, tol)


def kernel_law_defect(psi, Phi, tol: ToleranceContext = DEFAULT_TOL) -> int:
    """``rank C_psi(Phi) + dim Ker(Phi - Id) - 2n``; zero when the kernel law holds."""
    Phi = _square(Phi, "Phi")
    C = psi_cayley(psi, Phi, tol).matrix
    return rank(C, tol) + kernel_dim(Phi - np.eye(len(Phi)), tol) - len(Phi)


def classical_relation_defect(Phi, tol: ToleranceContext = DEFAULT_TOL) -> float:
    """Relative defect of ``C_{-Id}(Phi) = J M_Phi^{-1} J``.

    Both transforms are defined when ``Phi`` has neither ``1`` nor ``-1`` as an
    eigenvalue. The relation makes ``C_{-Id}(Phi)`` congruent to ``-M_Phi^{-1}``,
    so the two have opposite signatures.
    """
    Phi = _square(Phi, "Phi")
    J = standard_j(len(Phi) // 2)
    M = cayley(Phi, tol).matrix
    C = psi_cayley(-np.eye(len(Phi)), Phi, tol).matrix
    pred = J @ np.linalg.inv(M) @ J
    return float(np.linalg.norm(C - pred, 2) / max(np.linalg.norm(C, 2), 1e-300))
