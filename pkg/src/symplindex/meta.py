"""Generating functions, free symplectic matrices and metaplectic indices.

A quadratic generating function ``W(x, x') = <Px,x>/2 - <Kx,x'> + <Qx',x'>/2``
determines the free symplectic matrix ``Phi_W``. A metaplectic element is a pair
``(W, m)`` with ``m`` taken mod 4 and its parity tied to the sign of ``det K``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import polar, schur

from .cz import cayley_sum_correction, cz_index
from .errors import (DegenerateEndpoint, NonIntegerResult, NotFree, NotInSp0, SearchExhausted,
                     SingularK)
from .forms import DEFAULT_TOL, PAPER, STANDARD, SignConvention, ToleranceContext, inertia
from .lagr import LagrangianFrame, intersection_dim, kashiwara, vertical
from .maslov import IndexValue
from .sympl import (SymplecticPath, concatenate, inverse, is_symplectic, random_symmetric)

DET_IDENTITY_RTOL = 1e-8
FREE_MARGIN = 1e-8


@dataclass(frozen=True)
class Mod4Value:
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % 4)

    def __add__(self, other):
        if isinstance(other, Mod4Value):
            other = other.value
        if isinstance(other, IndexValue):
            other = int(other)
        if not isinstance(other, int):
            return NotImplemented
        return Mod4Value(self.value + other)

    __radd__ = __add__

    def __neg__(self):
        return Mod4Value(-self.value)

    def __sub__(self, other):
        if isinstance(other, Mod4Value):
            other = other.value
        if isinstance(other, IndexValue):
            other = int(other)
        if not isinstance(other, int):
            return NotImplemented
        return Mod4Value(self.value - other)

    def __eq__(self, other):
        if isinstance(other, Mod4Value):
            return self.value == other.value
        if isinstance(other, int):
            return self.value == other % 4
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __str__(self):
        return str(self.value)


def _sym(A, name: str, tol: float = 1e-9) -> np.ndarray:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square")
    if np.linalg.norm(A - A.T) > tol * max(1.0, np.linalg.norm(A)):
        raise ValueError(f"{name} must be symmetric")
    return (A + A.T) / 2


@dataclass(frozen=True, eq=False)
class GeneratingFunction:
    """Data ``(P, K, Q)`` of a nondegenerate quadratic generating function."""

    P: np.ndarray
    K: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        P = _sym(self.P, "P")
        Q = _sym(self.Q, "Q")
        K = np.atleast_2d(np.asarray(self.K, dtype=float))
        if not (P.shape == Q.shape == K.shape):
            raise ValueError("P, K, Q must share one n x n shape")
        s = np.linalg.svd(K, compute_uv=False)
        if s[-1] <= FREE_MARGIN * max(1.0, s[0]):
            raise SingularK(f"K is singular (smallest singular value {s[-1]:.3e})")
        for A in (P, Q, K):
            A.setflags(write=False)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "K", K)

    @property
    def n(self) -> int:
        return self.K.shape[0]

    @property
    def det_k(self) -> float:
        return float(np.linalg.det(self.K))

    def adjoint(self) -> "GeneratingFunction":
        """``W*(x, x') = -W(x', x)``: generates the inverse matrix."""
        return GeneratingFunction(-self.Q, -self.K.T, -self.P)

    def __call__(self, x, xp) -> float:
        x = np.asarray(x, dtype=float)
        xp = np.asarray(xp, dtype=float)
        return float(0.5 * x @ self.P @ x - (self.K @ x) @ xp + 0.5 * xp @ self.Q @ xp)

    def allclose(self, other: "GeneratingFunction", atol: float = 1e-10) -> bool:
        return all(np.allclose(a, b, rtol=0, atol=atol * max(1.0, np.abs(a).max()))
                   for a, b in ((self.P, other.P), (self.K, other.K), (self.Q, other.Q)))

    def __eq__(self, other):
        return isinstance(other, GeneratingFunction) and self.allclose(other, 0.0)

    __hash__ = None


def parity_of(W: GeneratingFunction) -> int:
    """``0`` when ``det K > 0``, ``1`` otherwise."""
    return 0 if W.det_k > 0 else 1


@dataclass(frozen=True)
class MetaplecticElement:
    W: GeneratingFunction
    m: int

    def __post_init__(self):
        m = int(self.m) % 4
        if m % 2 != parity_of(self.W):
            raise ValueError(f"m = {m} has the wrong parity for det K = {self.W.det_k:.6g}")
        object.__setattr__(self, "m", m)

    @property
    def n(self) -> int:
        return self.W.n

    @property
    def matrix(self) -> np.ndarray:
        return free_matrix(self.W)

    def inverse(self) -> "MetaplecticElement":
        return MetaplecticElement(self.W.adjoint(), self.n - self.m)


def free_matrix(W: GeneratingFunction) -> np.ndarray:
    """``[[K^-1 Q, K^-1], [P K^-1 Q - K^T, P K^-1]]``."""
    Kinv = np.linalg.inv(W.K)
    return np.block([[Kinv @ W.Q, Kinv], [W.P @ Kinv @ W.Q - W.K.T, W.P @ Kinv]])


def matrix_to_w(Phi, tol: float = FREE_MARGIN) -> GeneratingFunction:
    """Generating function of a free symplectic matrix ``[[A, B], [C, D]]``.

    ``K = B^-1``, ``Q = B^-1 A`` and ``P = D B^-1``.
    """
    Phi = np.asarray(Phi, dtype=float)
    n = Phi.shape[0] // 2
    A, B, D = Phi[:n, :n], Phi[:n, n:], Phi[n:, n:]
    s = np.linalg.svd(B, compute_uv=False)
    if s[-1] <= tol * max(1.0, np.linalg.norm(Phi, 2)):
        raise NotFree(f"upper-right block is singular (smallest singular value {s[-1]:.3e})")
    K = np.linalg.inv(B)
    Q = np.linalg.solve(B, A)
    P = D @ K
    for name, X in (("P", P), ("Q", Q)):
        if np.linalg.norm(X - X.T) > 1e-6 * max(1.0, np.linalg.norm(X)):
            raise NotFree(f"{name} is not symmetric; the input is not symplectic")
    return GeneratingFunction(P, K, Q)


def is_free(Phi, tol: float = FREE_MARGIN) -> bool:
    Phi = np.asarray(Phi, dtype=float)
    n = Phi.shape[0] // 2
    s = np.linalg.svd(Phi[:n, n:], compute_uv=False)
    return bool(s[-1] > tol * max(1.0, np.linalg.norm(Phi, 2)))


def wxx(W: GeneratingFunction) -> np.ndarray:
    """Hessian of ``x -> W(x, x)``: ``P + Q - K - K^T``."""
    return W.P + W.Q - W.K - W.K.T


def determinant_identity_defect(W: GeneratingFunction) -> float:
    """Relative defect of ``det(Phi_W - Id) = (-1)^n det(K^-1) det(W_xx)``."""
    lhs = np.linalg.det(free_matrix(W) - np.eye(2 * W.n))
    rhs = (-1) ** W.n * np.linalg.det(wxx(W)) / W.det_k
    return float(abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300))


def is_free_sp0(W: GeneratingFunction, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """Whether ``Phi_W`` has no eigenvalue 1, i.e. ``W_xx`` is nondegenerate."""
    defect = determinant_identity_defect(W)
    if defect > DET_IDENTITY_RTOL and np.linalg.cond(wxx(W)) < 1e8:
        raise ArithmeticError(f"determinant identity fails (relative defect {defect:.3e})")
    return inertia(wxx(W), tol).n_zero == 0


def nu(element: MetaplecticElement, tol: ToleranceContext = DEFAULT_TOL) -> Mod4Value:
    """``m - n_-(W_xx) mod 4``."""
    if not is_free_sp0(element.W, tol):
        raise NotInSp0("Phi_W has eigenvalue 1 (W_xx is degenerate)")
    return Mod4Value(element.m - inertia(wxx(element.W), tol).n_minus)


def inert(L: LagrangianFrame, Lp: LagrangianFrame, Lpp: LagrangianFrame,
          conv: SignConvention = PAPER, tol: ToleranceContext = DEFAULT_TOL) -> int:
    """``(tau(L, L', L'') + n + dim(L^L') - dim(L^L'') + dim(L'^L'')) / 2``."""
    tau = kashiwara(L, Lp, Lpp, conv, tol)
    ddim = intersection_dim(L, Lp) - intersection_dim(L, Lpp) + intersection_dim(Lp, Lpp)
    total = tau + L.n + ddim
    if total % 2:
        raise NonIntegerResult(f"tau + n + ddim = {total} is odd (tau={tau}, ddim={ddim})")
    return total // 2


def def54_value(e1: MetaplecticElement, e2: MetaplecticElement,
                tol: ToleranceContext = DEFAULT_TOL) -> Mod4Value:
    """``m + m' - n_-(P' + Q) mod 4`` for the factorization ``e1 e2``."""
    return Mod4Value(e1.m + e2.m - inertia(e2.W.P + e1.W.Q, tol).n_minus)


@dataclass(frozen=True)
class ComposeReport:
    value: Mod4Value
    inert_standard: int
    inert_convention: int
    verbatim: Mod4Value
    def54: Mod4Value

    @property
    def consistent(self) -> bool:
        return self.value == self.def54


def compose_report(e1: MetaplecticElement, e2: MetaplecticElement,
                   conv: SignConvention = PAPER,
                   tol: ToleranceContext = DEFAULT_TOL) -> ComposeReport:
    """Maslov index of ``e1 e2`` from the Inert cocycle, with both readings.

    The composed value is ``m + m' - Inert(L0, Phi L0, Phi Phi' L0)`` with the
    Kashiwara index in the STANDARD convention; this is the reading that
    reproduces ``m + m' - n_-(P' + Q)``. ``verbatim`` keeps
    ``m + m' + Inert`` under ``conv`` for the record.
    """
    L0 = vertical(e1.n)
    A, B = e1.matrix, e2.matrix
    L1, L2 = L0.transformed(A), L0.transformed(A @ B)
    i_std = inert(L0, L1, L2, STANDARD, tol)
    i_conv = i_std if SignConvention.parse(conv) is STANDARD else inert(L0, L1, L2, conv, tol)
    return ComposeReport(Mod4Value(e1.m + e2.m - i_std), i_std, i_conv,
                         Mod4Value(e1.m + e2.m + i_conv), def54_value(e1, e2, tol))


def compose_maslov(e1: MetaplecticElement, e2: MetaplecticElement,
                   conv: SignConvention = PAPER,
                   tol: ToleranceContext = DEFAULT_TOL) -> Mod4Value:
    return compose_report(e1, e2, conv, tol).value


def compose(e1: MetaplecticElement, e2: MetaplecticElement,
            tol: ToleranceContext = DEFAULT_TOL) -> MetaplecticElement:
    """The product element, when ``Phi_W Phi_W'`` is itself free."""
    W = matrix_to_w(e1.matrix @ e2.matrix)
    return MetaplecticElement(W, compose_maslov(e1, e2, tol=tol).value)


def nu_compose(e1: MetaplecticElement, e2: MetaplecticElement, conv: SignConvention = PAPER,
               tol: ToleranceContext = DEFAULT_TOL) -> Mod4Value:
    """``nu(e1) + nu(e2) - c`` with ``c`` the calibrated Cayley-sum correction.

    ``c`` is the correction of the product formula for Conley-Zehnder indices
    of paths from ``Id`` ending at ``Phi_W`` and ``Phi_W'``; in the PAPER
    convention it equals ``sign(M_{Phi_W} + M_{Phi_W'}) / 2``.
    """
    c = cayley_sum_correction(e1.matrix, e2.matrix, conv, tol)
    if not c.is_integer():
        raise DegenerateEndpoint("M_{Phi_W} + M_{Phi_W'} is degenerate with odd signature")
    return nu(e1, tol) + nu(e2, tol) - int(c)


# -- paths to free matrices ----------------------------------------------------

def _unitary_power(U: np.ndarray, t: float, theta: np.ndarray, V: np.ndarray) -> np.ndarray:
    u = (V * np.exp(1j * t * theta)) @ V.conj().T
    return np.block([[u.real, -u.imag], [u.imag, u.real]])


def polar_path(Phi, max_step: float = 0.1) -> SymplecticPath:
    """Path ``t -> U^t P^t`` from ``Id`` to ``Phi = U P`` (polar factors)."""
    Phi = np.asarray(Phi, dtype=float)
    n = Phi.shape[0] // 2
    U, P = polar(Phi)
    u = U[:n, :n] + 1j * U[n:, :n]
    T, V = schur(u, output="complex")
    theta = np.angle(np.diag(T))
    lam, Qp = np.linalg.eigh((P + P.T) / 2)
    loglam = np.log(lam)

    def func(t: float) -> np.ndarray:
        Pt = (Qp * np.exp(t * loglam)) @ Qp.T
        return _unitary_power(U, t, theta, V) @ Pt

    spread = max(np.abs(theta).max(initial=0.0), np.abs(loglam).max(initial=0.0))
    k = max(9, int(np.ceil(spread * np.linalg.norm(Phi, 2) / max_step)) + 1)
    path = SymplecticPath.from_function(func, np.linspace(0.0, 1.0, k)).densified(max_step)
    end_err = np.linalg.norm(path.end - Phi, 2) / max(1.0, np.linalg.norm(Phi, 2))
    if end_err > 1e-8:
        raise ArithmeticError(f"polar path misses its endpoint by {end_err:.3e}")
    return path


def full_loop(n: int, samples: int = 81) -> SymplecticPath:
    """One full rotation in the first ``(x_1, p_1)`` plane."""
    def func(t: float) -> np.ndarray:
        M = np.eye(2 * n)
        c, s = np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)
        M[0, 0], M[0, n], M[n, 0], M[n, n] = c, -s, s, c
        return M
    return SymplecticPath.from_function(func, np.linspace(0.0, 1.0, samples))


@dataclass(frozen=True)
class PathClassResult:
    label: str
    cz: IndexValue
    minus_cz_mod4: Mod4Value
    matches: tuple
    matched_m: Optional[int]


@dataclass(frozen=True)
class NuVsCzReport:
    nu_by_m: dict
    classes: tuple
    given_m: int
    loop_contribution: IndexValue

    @property
    def unique_matches(self) -> bool:
        return all(len(c.matches) == 1 for c in self.classes)

    @property
    def shift_consistent(self) -> bool:
        a, b = self.classes
        if a.matched_m is None or b.matched_m is None:
            return False
        return (b.matched_m - a.matched_m) % 4 == (-int(self.loop_contribution)) % 4

    @property
    def consistent(self) -> bool:
        return self.unique_matches and self.shift_consistent


def nu_vs_cz(W: GeneratingFunction, m: int, seed=0, conv: SignConvention = PAPER,
             tol: ToleranceContext = DEFAULT_TOL) -> NuVsCzReport:
    """Compare ``nu`` with ``-i_CZ mod 4`` on two path classes ending at ``Phi_W``.

    For each class the parity-legal ``m`` whose ``nu`` equals ``-i_CZ mod 4``
    is reported. The second class prepends one full loop to the first. ``seed``
    is accepted for reproducible reports; the polar path is deterministic.
    """
    if not is_free_sp0(W, tol):
        raise NotInSp0("Phi_W has eigenvalue 1 (W_xx is degenerate)")
    m0 = parity_of(W)
    nus = {mm: nu(MetaplecticElement(W, mm), tol) for mm in (m0, m0 + 2)}
    base = polar_path(free_matrix(W))
    looped = concatenate([full_loop(W.n), base.shifted(1.0)])
    classes = []
    values = []
    for label, path in (("polar", base), ("polar+loop", looped)):
        c = cz_index(path, conv, tol)
        if not c.is_integer():
            raise NonIntegerResult(f"CZ index {c} of a path into Sp0 is not an integer")
        target = Mod4Value(-int(c))
        matches = tuple(mm for mm, v in nus.items() if v == target)
        classes.append(PathClassResult(label, c, target, matches,
                                       matches[0] if len(matches) == 1 else None))
        values.append(c)
    return NuVsCzReport(nus, tuple(classes), int(m) % 4, values[1] - values[0])


# -- random data and factorizations ---------------------------------------------

def random_generating_function(rng: np.random.Generator, n: int, scale: float = 1.0,
                               min_singular: float = 0.2) -> GeneratingFunction:
    while True:
        K = rng.normal(size=(n, n)) * scale
        if np.linalg.svd(K, compute_uv=False)[-1] >= min_singular:
            break
    P = random_symmetric(rng, n, 2.0 * scale)
    Q = random_symmetric(rng, n, 2.0 * scale)
    return GeneratingFunction(P, K, Q)


def random_element(rng: np.random.Generator, n: int, require_sp0: bool = True,
                   margin: float = 1e-3) -> MetaplecticElement:
    for _ in range(1000):
        W = random_generating_function(rng, n)
        if require_sp0 and np.linalg.svd(wxx(W), compute_uv=False)[-1] < margin:
            continue
        m = parity_of(W) + 2 * int(rng.integers(2))
        return MetaplecticElement(W, m)
    raise SearchExhausted("no free element in Sp0 found")


def factor_free_pair(Phi, seed=0, max_trials: int = 1000,
                     margin: float = 1e-3) -> tuple[GeneratingFunction, GeneratingFunction]:
    """Generating functions ``W, W'`` with ``Phi_W Phi_W' = Phi``, both in ``Sp0``."""
    Phi = np.asarray(Phi, dtype=float)
    ok, defect = is_symplectic(Phi)
    if not ok:
        raise ValueError(f"Phi is not symplectic (defect {defect:.3e})")
    n = Phi.shape[0] // 2
    rng = np.random.default_rng(seed)
    for _ in range(max_trials):
        W = random_generating_function(rng, n)
        A = free_matrix(W)
        rest = inverse(A) @ Phi
        if not is_free(rest, margin):
            continue
        Wp = matrix_to_w(rest)
        if min(np.linalg.svd(wxx(W), compute_uv=False)[-1],
               np.linalg.svd(wxx(Wp), compute_uv=False)[-1]) < margin:
            continue
        return W, Wp
    raise SearchExhausted(f"no free factorization found in {max_trials} trials")
