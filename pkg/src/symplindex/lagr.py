"""Lagrangian subspaces, the charts phi_{L0,L1}, and the Wall-Kashiwara index."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotLagrangian, NotTransverse
from .forms import DEFAULT_TOL, PAPER, SignConvention, SymmetricForm, ToleranceContext, signature
from .sympl import SymplecticSpace

RANK_THRESHOLD = 1e-10
ISOTROPY_TOL = 1e-8
TRANSVERSE_THRESHOLD = 1e-8


def orthonormal_basis(F: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the column span, made deterministic by sign."""
    Q, R = np.linalg.qr(F)
    d = np.sign(np.diagonal(R, axis1=-2, axis2=-1))
    d[d == 0] = 1.0
    return Q * d[..., None, :]


def orthonormal_frames(space: SymplecticSpace, frames) -> np.ndarray:
    """Validate and orthonormalize a stack of frames, shape ``(N, 2n, n)``."""
    F = np.asarray(frames, dtype=float)
    if F.ndim != 3 or F.shape[1:] != (space.dim, space.n):
        raise DimensionMismatch(f"frames must be (N, {space.dim}, {space.n}), got {F.shape}")
    if not np.all(np.isfinite(F)):
        raise NotLagrangian("frame has non-finite entries")
    s = np.linalg.svd(F, compute_uv=False)
    bad = np.flatnonzero(s[:, -1] <= RANK_THRESHOLD * np.maximum(1.0, s[:, 0]))
    if len(bad):
        raise NotLagrangian(f"frame {bad[0]} has dependent columns")
    Q = orthonormal_basis(F)
    iso = np.linalg.norm(np.swapaxes(Q, 1, 2) @ space.gram @ Q, ord=2, axis=(1, 2))
    bad = np.flatnonzero(iso > ISOTROPY_TOL)
    if len(bad):
        raise NotLagrangian(f"frame {bad[0]} is not isotropic (defect {iso[bad[0]]:.3e})")
    return Q


class LagrangianFrame:
    """Orthonormal ``2n x n`` frame of a Lagrangian subspace.

    The input columns may be any basis; they are orthonormalized on
    construction so downstream tolerances do not depend on the representative.
    ``source`` keeps the basis as given, for serialization.
    """

    __slots__ = ("space", "columns", "source")

    def __init__(self, space: SymplecticSpace, columns, check: bool = True):
        F = np.asarray(columns, dtype=float)
        if F.ndim == 1:
            F = F[:, None]
        if F.shape != (space.dim, space.n):
            raise DimensionMismatch(
                f"frame must be {space.dim} x {space.n}, got {F.shape}")
        if not np.all(np.isfinite(F)):
            raise NotLagrangian("frame has non-finite entries")
        if check:
            s = np.linalg.svd(F, compute_uv=False)
            if s[-1] <= RANK_THRESHOLD * max(1.0, s[0]):
                raise NotLagrangian("frame columns are not independent")
        Q = orthonormal_basis(F)
        if check:
            iso = np.linalg.norm(Q.T @ space.gram @ Q, 2)
            if iso > ISOTROPY_TOL:
                raise NotLagrangian(f"frame is not isotropic (defect {iso:.3e})")
        Q.setflags(write=False)
        F = F.copy()
        F.setflags(write=False)
        self.space = space
        self.columns = Q
        self.source = F

    @property
    def n(self) -> int:
        return self.space.n

    def projector(self) -> np.ndarray:
        return self.columns @ self.columns.T

    def transformed(self, M) -> "LagrangianFrame":
        """Image under a linear map (symplectic or anti-symplectic)."""
        return LagrangianFrame(self.space, np.asarray(M) @ self.columns)

    def companion(self) -> "LagrangianFrame":
        """``J L``: the orthogonal complement, itself Lagrangian and transverse."""
        return LagrangianFrame(self.space, self.space.J @ self.columns, check=False)

    def __repr__(self):
        return f"LagrangianFrame(n={self.n}, columns={np.round(self.columns, 6).tolist()})"


def vertical(n: int) -> LagrangianFrame:
    """``{0} + R^n``, the momentum Lagrangian."""
    return LagrangianFrame(SymplecticSpace.standard(n), np.vstack([np.zeros((n, n)), np.eye(n)]))


def horizontal(n: int) -> LagrangianFrame:
    """``R^n + {0}``, the position Lagrangian."""
    return LagrangianFrame(SymplecticSpace.standard(n), np.vstack([np.eye(n), np.zeros((n, n))]))


def diagonal(space: SymplecticSpace) -> LagrangianFrame:
    """The diagonal of the doubled space of ``space``."""
    I = np.eye(space.dim)
    return LagrangianFrame(space.doubled(), np.vstack([I, I]))


def antidiagonal(space: SymplecticSpace) -> LagrangianFrame:
    """``{(v, -v)}``, the graph of ``-Id``."""
    I = np.eye(space.dim)
    return LagrangianFrame(space.doubled(), np.vstack([I, -I]))


def is_lagrangian(columns, space: SymplecticSpace) -> bool:
    try:
        LagrangianFrame(space, columns)
    except (NotLagrangian, DimensionMismatch):
        return False
    return True


def _same_space(*frames: LagrangianFrame) -> None:
    s = frames[0].space
    for f in frames[1:]:
        if f.space != s:
            raise DimensionMismatch("Lagrangians live in different spaces")


def transversality_margin(L: LagrangianFrame, Lp: LagrangianFrame) -> float:
    """Smallest singular value of ``[L | L']``; zero iff they intersect."""
    _same_space(L, Lp)
    return float(np.linalg.svd(np.hstack([L.columns, Lp.columns]), compute_uv=False)[-1])


def transverse(L: LagrangianFrame, Lp: LagrangianFrame,
               threshold: float = TRANSVERSE_THRESHOLD) -> tuple[bool, float]:
    m = transversality_margin(L, Lp)
    return m > threshold, m


def intersection_dim(L: LagrangianFrame, Lp: LagrangianFrame,
                     threshold: float = TRANSVERSE_THRESHOLD) -> int:
    _same_space(L, Lp)
    s = np.linalg.svd(np.hstack([L.columns, Lp.columns]), compute_uv=False)
    return int(np.count_nonzero(s <= threshold))


def subspace_distance(L: LagrangianFrame, Lp: LagrangianFrame) -> float:
    """Operator-norm distance of the orthogonal projectors."""
    _same_space(L, Lp)
    return float(np.linalg.norm(L.projector() - Lp.projector(), 2))


def same_subspace(L: LagrangianFrame, Lp: LagrangianFrame, tol: float = 1e-8) -> bool:
    return subspace_distance(L, Lp) <= tol


@dataclass(frozen=True)
class ChartValue:
    base: LagrangianFrame
    form: SymmetricForm


def _require_transverse(A: LagrangianFrame, B: LagrangianFrame, what: str,
                        threshold: float) -> None:
    ok, m = transverse(A, B, threshold)
    if not ok:
        raise NotTransverse(f"{what} (margin {m:.3e})")


def chart_matrix(L0: LagrangianFrame, L1: LagrangianFrame, L: LagrangianFrame) -> np.ndarray:
    """Unchecked matrix of ``phi_{L0,L1}(L)`` in the columns of ``L0``.

    For each base vector ``v`` solve ``v + T v in L`` with ``T v in L1`` and
    return ``[omega(T v_i, v_j)]``, symmetrized.
    """
    n = L0.n
    ab = np.linalg.solve(np.hstack([L.columns, -L1.columns]), L0.columns)
    TL0 = L1.columns @ ab[n:]
    B = TL0.T @ L0.space.gram @ L0.columns
    return (B + B.T) / 2


def chart(L0: LagrangianFrame, L1: LagrangianFrame, L: LagrangianFrame,
          threshold: float = TRANSVERSE_THRESHOLD) -> ChartValue:
    _same_space(L0, L1, L)
    _require_transverse(L0, L1, "base and auxiliary Lagrangians intersect", threshold)
    _require_transverse(L, L1, "Lagrangian is not transverse to the auxiliary", threshold)
    return ChartValue(L0, SymmetricForm(chart_matrix(L0, L1, L)))


def chart_swap_defect(L0: LagrangianFrame, L1: LagrangianFrame, L: LagrangianFrame,
                      conv: SignConvention = PAPER,
                      tol: ToleranceContext = DEFAULT_TOL) -> int:
    """``sign phi_{L,L1}(L0) + sign phi_{L0,L1}(L)``; zero by the swap identity."""
    _require_transverse(L0, L, "base Lagrangians intersect", TRANSVERSE_THRESHOLD)
    a = chart(L, L1, L0).form
    b = chart(L0, L1, L).form
    return signature(a, conv, tol) + signature(b, conv, tol)


def change_of_chart_pair(L0: LagrangianFrame, L1: LagrangianFrame, L: LagrangianFrame,
                         Lp: LagrangianFrame) -> tuple[np.ndarray, np.ndarray]:
    """``phi_{L,L1}(L')`` and ``phi_{L0,L1}(L') - phi_{L0,L1}(L)``.

    The two forms live on different Lagrangians but have equal signature.
    """
    direct = chart(L, L1, Lp).form.entries
    diff = chart(L0, L1, Lp).form.entries - chart(L0, L1, L).form.entries
    return direct, diff


def kashiwara_form(L0: LagrangianFrame, L1: LagrangianFrame, L2: LagrangianFrame) -> np.ndarray:
    """Quadratic form ``omega(z0,z1) + omega(z1,z2) + omega(z2,z0)`` on ``L0+L1+L2``."""
    _same_space(L0, L1, L2)
    n = L0.n
    G = L0.space.gram
    frames = (L0.columns, L1.columns, L2.columns)
    B = np.zeros((3 * n, 3 * n))
    for i, j in ((0, 1), (1, 2), (2, 0)):
        g = frames[i].T @ G @ frames[j]
        B[i * n:(i + 1) * n, j * n:(j + 1) * n] += g / 2
        B[j * n:(j + 1) * n, i * n:(i + 1) * n] += g.T / 2
    return B


def kashiwara(L0: LagrangianFrame, L1: LagrangianFrame, L2: LagrangianFrame,
              conv: SignConvention = PAPER, tol: ToleranceContext = DEFAULT_TOL) -> int:
    """Wall-Kashiwara index ``tau(L0, L1, L2)``."""
    return signature(kashiwara_form(L0, L1, L2), conv, tol)


def projection(onto: LagrangianFrame, along: LagrangianFrame) -> np.ndarray:
    """Projection onto ``onto`` along ``along`` (requires transversality)."""
    n = onto.n
    A = np.hstack([onto.columns, along.columns])
    return onto.columns @ np.linalg.solve(A, np.eye(A.shape[0]))[:n]


def intersection_basis(L: LagrangianFrame, Lp: LagrangianFrame,
                       threshold: float = TRANSVERSE_THRESHOLD) -> np.ndarray:
    """Orthonormal basis (columns) of ``L cap L'``."""
    _same_space(L, Lp)
    n = L.n
    _, s, Vt = np.linalg.svd(np.hstack([L.columns, -Lp.columns]))
    k = int(np.count_nonzero(s <= threshold))
    if k == 0:
        return np.zeros((L.space.dim, 0))
    coeffs = Vt[-k:].T[:n]
    return orthonormal_basis(L.columns @ coeffs)


def sum_of_intersections(L: LagrangianFrame, Lp: LagrangianFrame, Lpp: LagrangianFrame,
                         threshold: float = TRANSVERSE_THRESHOLD) -> bool:
    """True iff ``L = L cap L' + L cap L''``."""
    B = np.hstack([intersection_basis(L, Lp, threshold), intersection_basis(L, Lpp, threshold)])
    if B.shape[1] < L.n:
        return False
    s = np.linalg.svd(B, compute_uv=False)
    return int(np.count_nonzero(s > threshold)) == L.n


def kashiwara_via_projection(L: LagrangianFrame, Lp: LagrangianFrame, Lpp: LagrangianFrame,
                             conv: SignConvention = PAPER,
                             tol: ToleranceContext = DEFAULT_TOL) -> int:
    """``tau(L, L', L'')`` as the signature of ``z' -> omega(Pr z', z')`` on ``L'``.

    ``Pr`` projects onto ``L`` along ``L''``.  When ``L`` meets ``L''`` the
    value is only available in the split case ``L = L cap L' + L cap L''``,
    where it is zero.
    """
    _same_space(L, Lp, Lpp)
    ok, m = transverse(L, Lpp)
    if not ok:
        if sum_of_intersections(L, Lp, Lpp):
            return 0
        raise NotTransverse(f"L meets L'' (margin {m:.3e})")
    P = projection(L, Lpp)
    Z = Lp.columns
    B = (P @ Z).T @ L.space.gram @ Z
    return signature((B + B.T) / 2, conv, tol)
