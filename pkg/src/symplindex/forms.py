"""Inertia and signature of symmetric bilinear forms.

All index computations in the package funnel through :func:`inertia`, which
counts eigenvalues of a symmetric matrix against a single spectral threshold.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, DimensionMismatch, NonFiniteEntry

EPS = np.finfo(float).eps
SYMMETRY_RTOL = 1e-8


class SignConvention(enum.Enum):
    """Which difference of inertia counts is called the signature.

    ``PAPER`` is ``n_minus - n_plus``; ``STANDARD`` is ``n_plus - n_minus``.
    """

    PAPER = "paper"
    STANDARD = "standard"

    @classmethod
    def parse(cls, value) -> "SignConvention":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


PAPER = SignConvention.PAPER
STANDARD = SignConvention.STANDARD


@dataclass(frozen=True)
class ToleranceContext:
    rank_relative: float = 64 * EPS
    rank_absolute_floor: float = 1e-12

    def __post_init__(self):
        if not (self.rank_relative > 0 and self.rank_absolute_floor > 0):
            raise ValueError("tolerances must be positive")

    def threshold(self, A: np.ndarray) -> float:
        """Zero-eigenvalue threshold for the symmetric matrix ``A``."""
        dim = A.shape[0]
        if dim == 0:
            return self.rank_absolute_floor
        return max(self.rank_absolute_floor,
                   self.rank_relative * dim * np.linalg.norm(A, 2))


DEFAULT_TOL = ToleranceContext()


@dataclass(frozen=True)
class InertiaTriple:
    n_minus: int
    n_zero: int
    n_plus: int

    @property
    def dim(self) -> int:
        return self.n_minus + self.n_zero + self.n_plus

    def signature(self, conv: SignConvention = PAPER) -> int:
        if SignConvention.parse(conv) is PAPER:
            return self.n_minus - self.n_plus
        return self.n_plus - self.n_minus


class SymmetricForm:
    """Dense symmetric matrix, stored symmetrized as ``(A + A.T) / 2``.

    Raises ``ValueError`` if the input is asymmetric beyond
    ``SYMMETRY_RTOL`` relative to its norm.
    """

    __slots__ = ("entries",)

    def __init__(self, entries, rtol: float = SYMMETRY_RTOL):
        A = np.array(entries, dtype=float)
        if A.ndim == 0:
            A = A.reshape(1, 1)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
        if not np.all(np.isfinite(A)):
            raise NonFiniteEntry("form has NaN or infinite entries")
        scale = max(1.0, np.abs(A).max(initial=0.0))
        if np.abs(A - A.T).max(initial=0.0) > rtol * scale:
            raise ValueError("matrix is not symmetric within tolerance")
        self.entries = (A + A.T) / 2
        self.entries.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __repr__(self):
        return f"SymmetricForm({self.entries.tolist()!r})"


def _as_sym(form) -> np.ndarray:
    if isinstance(form, SymmetricForm):
        return form.entries
    A = np.asarray(form, dtype=float)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFiniteEntry("form has NaN or infinite entries")
    return (A + A.T) / 2


def inertia(form, tol: ToleranceContext = DEFAULT_TOL) -> InertiaTriple:
    """Count negative, zero and positive eigenvalues of a symmetric form.

    Eigenvalues within ``tol.threshold(form)`` of zero count as zero.
    Accepts a :class:`SymmetricForm` or any square array (symmetrized).
    """
    A = _as_sym(form)
    if A.shape[0] == 0:
        return InertiaTriple(0, 0, 0)
    w = np.linalg.eigvalsh(A)
    th = tol.threshold(A)
    n_minus = int(np.count_nonzero(w < -th))
    n_plus = int(np.count_nonzero(w > th))
    return InertiaTriple(n_minus, len(w) - n_minus - n_plus, n_plus)


def signature(form, conv: SignConvention = PAPER,
              tol: ToleranceContext = DEFAULT_TOL) -> int:
    return inertia(form, tol).signature(conv)


def is_nondegenerate(form, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    return inertia(form, tol).n_zero == 0


def inverse_difference_identity_defect(U, Z, conv: SignConvention = PAPER,
                                       tol: ToleranceContext = DEFAULT_TOL) -> int:
    """Defect of ``sign(Z) - sign(U) == sign(Z^-1 - U^-1) - sign(U - Z)``.

    Always zero for nondegenerate ``U``, ``Z`` and ``U - Z``.
    """
    U, Z = _as_sym(U), _as_sym(Z)
    if U.shape != Z.shape:
        raise DimensionMismatch(f"{U.shape} vs {Z.shape}")
    for name, A in (("U", U), ("Z", Z), ("U - Z", U - Z)):
        if inertia(A, tol).n_zero:
            raise DegenerateInput(f"{name} is degenerate")
    lhs = signature(Z, conv, tol) - signature(U, conv, tol)
    inv_diff = np.linalg.inv(Z) - np.linalg.inv(U)
    rhs = signature(inv_diff, conv, tol) - signature(U - Z, conv, tol)
    return lhs - rhs
