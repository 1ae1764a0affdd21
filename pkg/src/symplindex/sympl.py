"""Linear symplectic algebra on (R^2n, omega_0) and on the doubled space.

Conventions: ``z = (x, p)``, ``J = [[0, -I], [I, 0]]`` and
``omega(z, z') = <J z, z'>``.  The doubled space ``V + V`` carries
``omega + (-omega)``, whose complex structure is ``diag(J, -J)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import expm, logm

from .errors import DimensionMismatch, NotSymplectic

SYMPLECTIC_RTOL = 1e-9
PATH_STEP = 0.1


def standard_j(n: int) -> np.ndarray:
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, -I], [I, Z]])


@dataclass(frozen=True, eq=False)
class SymplecticSpace:
    """Real vector space with a compatible complex structure ``J``.

    ``omega(a, b) = <J a, b>``; ``n`` is half the dimension, i.e. the
    dimension of every Lagrangian subspace.
    """

    J: np.ndarray
    doubled_from: Optional["SymplecticSpace"] = None

    def __post_init__(self):
        J = np.asarray(self.J, dtype=float)
        if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] % 2:
            raise DimensionMismatch(f"J must be square of even size, got {J.shape}")
        J.setflags(write=False)
        object.__setattr__(self, "J", J)

    @classmethod
    def standard(cls, n: int) -> "SymplecticSpace":
        if n < 1:
            raise ValueError("n must be positive")
        return cls(standard_j(n))

    def doubled(self) -> "SymplecticSpace":
        Z = np.zeros_like(self.J)
        return SymplecticSpace(np.block([[self.J, Z], [Z, -self.J]]), doubled_from=self)

    @property
    def dim(self) -> int:
        return self.J.shape[0]

    @property
    def n(self) -> int:
        return self.J.shape[0] // 2

    @property
    def gram(self) -> np.ndarray:
        """Matrix ``G`` with ``omega(a, b) = a @ G @ b``."""
        return self.J.T

    def omega(self, a, b):
        return np.asarray(a).T @ self.J.T @ np.asarray(b)

    def __eq__(self, other):
        return isinstance(other, SymplecticSpace) and self.J.shape == other.J.shape \
            and np.array_equal(self.J, other.J)

    def __hash__(self):
        return hash((self.J.shape, self.J.tobytes()))


def _space_for(M: np.ndarray, space: Optional[SymplecticSpace]) -> SymplecticSpace:
    if space is None:
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
            raise DimensionMismatch(f"expected a 2n x 2n matrix, got {M.shape}")
        return SymplecticSpace.standard(M.shape[0] // 2)
    if M.shape != space.J.shape:
        raise DimensionMismatch(f"matrix {M.shape} does not act on a space of dim {space.dim}")
    return space


def symplectic_defect(M, space: Optional[SymplecticSpace] = None) -> float:
    M = np.asarray(M, dtype=float)
    J = _space_for(M, space).J
    return float(np.linalg.norm(M.T @ J @ M - J, 2))


def is_symplectic(M, space: Optional[SymplecticSpace] = None,
                  rtol: float = SYMPLECTIC_RTOL) -> tuple[bool, float]:
    """Return ``(ok, defect)`` with ``defect = ||M^T J M - J||``.

    ``ok`` is true iff the defect is at most ``rtol * ||M||^2``.
    """
    M = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(M)):
        return False, float("inf")
    defect = symplectic_defect(M, space)
    return defect <= rtol * max(1.0, np.linalg.norm(M, 2)) ** 2, defect


def check_symplectic(M, space: Optional[SymplecticSpace] = None,
                     rtol: float = SYMPLECTIC_RTOL) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    ok, defect = is_symplectic(M, space, rtol)
    if not ok:
        raise NotSymplectic(f"symplectic defect {defect:.3e}")
    return M


def inverse(M, space: Optional[SymplecticSpace] = None) -> np.ndarray:
    """Inverse of a symplectic matrix as ``-J M^T J``."""
    M = np.asarray(M, dtype=float)
    J = _space_for(M, space).J
    return -J @ M.T @ J


def rotation(theta: float, n: int = 1) -> np.ndarray:
    """``exp(theta J)``: the rotation by ``theta`` in every (x_i, p_i) plane."""
    c, s = np.cos(theta), np.sin(theta)
    I = np.eye(n)
    return np.block([[c * I, -s * I], [s * I, c * I]])


def hamiltonian_matrix(S) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    return standard_j(S.shape[0] // 2) @ S


def graph_lagrangian(Phi, space: Optional[SymplecticSpace] = None):
    """Graph ``{(v, Phi v)}`` as a Lagrangian frame of the doubled space."""
    from .lagr import LagrangianFrame

    Phi = np.asarray(Phi, dtype=float)
    space = _space_for(Phi, space)
    return LagrangianFrame(space.doubled(), np.vstack([np.eye(space.dim), Phi]))


def swap_map(space: SymplecticSpace) -> np.ndarray:
    """Matrix of ``(v1, v2) -> (v2, v1)`` on the doubled space."""
    I = np.eye(space.dim)
    Z = np.zeros_like(I)
    return np.block([[Z, I], [I, Z]])


def random_symmetric(rng: np.random.Generator, dim: int, bound: float = 1.0) -> np.ndarray:
    """Random symmetric matrix with spectral norm at most ``bound``."""
    S = rng.normal(size=(dim, dim))
    S = (S + S.T) / 2
    return S * (bound / max(np.linalg.norm(S, 2), 1e-300)) * rng.uniform(0.2, 1.0)


def _generators(seed, n: int, steps: int) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    J = standard_j(n)
    return [J @ random_symmetric(rng, 2 * n) for _ in range(steps)]


def random_symplectic(seed, n: int, steps: int = 3) -> np.ndarray:
    """Product of ``steps`` exponentials ``exp(J S_i)`` with ``||S_i|| <= 1``."""
    M = np.eye(2 * n)
    for X in _generators(seed, n, steps):
        M = expm(X) @ M
    return M


@dataclass(frozen=True, eq=False)
class SymplecticPath:
    """Time-stamped samples ``(t_i, Phi_i)`` of a continuous symplectic path.

    ``func``, when present, evaluates the underlying path exactly and is used
    for resampling; otherwise resampling interpolates geodesically between
    neighbouring samples.
    """

    times: np.ndarray
    matrices: np.ndarray
    func: Optional[Callable[[float], np.ndarray]] = field(default=None, repr=False)
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        M = np.asarray(self.matrices, dtype=float)
        if t.ndim != 1 or len(t) < 2:
            raise ValueError("a path needs at least two samples")
        if M.ndim != 3 or M.shape[0] != len(t) or M.shape[1] != M.shape[2] or M.shape[1] % 2:
            raise DimensionMismatch(f"matrices must have shape (N, 2n, 2n), got {M.shape}")
        if np.any(np.diff(t) <= 0):
            raise ValueError("sample times must be strictly increasing")
        if self.validate:
            for i, Phi in enumerate(M):
                ok, defect = is_symplectic(Phi)
                if not ok:
                    raise NotSymplectic(f"sample {i} has symplectic defect {defect:.3e}")
        t.setflags(write=False)
        M.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "matrices", M)

    @classmethod
    def from_function(cls, func: Callable[[float], np.ndarray], times) -> "SymplecticPath":
        times = np.asarray(times, dtype=float)
        return cls(times, np.array([func(t) for t in times]), func=func)

    @classmethod
    def constant(cls, Phi, t0: float = 0.0, t1: float = 1.0) -> "SymplecticPath":
        Phi = np.asarray(Phi, dtype=float)
        return cls.from_function(lambda t: Phi, [t0, t1])

    @property
    def space(self) -> SymplecticSpace:
        return SymplecticSpace.standard(self.n)

    @property
    def n(self) -> int:
        return self.matrices.shape[1] // 2

    def __len__(self):
        return len(self.times)

    @property
    def start(self) -> np.ndarray:
        return self.matrices[0]

    @property
    def end(self) -> np.ndarray:
        return self.matrices[-1]

    def max_step(self) -> float:
        d = np.diff(self.matrices, axis=0)
        return float(max(np.linalg.norm(x, 2) for x in d))

    def at(self, t: float) -> np.ndarray:
        if self.func is not None:
            return np.asarray(self.func(t), dtype=float)
        times = self.times
        if t <= times[0]:
            return self.matrices[0]
        if t >= times[-1]:
            return self.matrices[-1]
        i = int(np.searchsorted(times, t, side="right")) - 1
        if t == times[i]:
            return self.matrices[i]
        s = (t - times[i]) / (times[i + 1] - times[i])
        A, B = self.matrices[i], self.matrices[i + 1]
        step = np.real(logm(inverse(A) @ B))
        return A @ expm(s * step)

    def resample(self, times) -> "SymplecticPath":
        times = np.asarray(times, dtype=float)
        if self.func is not None:
            return SymplecticPath.from_function(self.func, times)
        mats = np.array([self.at(t) for t in times])
        return SymplecticPath(times, mats, validate=False)

    def refined(self, factor: int = 2) -> "SymplecticPath":
        """Insert ``factor - 1`` evenly spaced samples in every interval."""
        t = self.times
        fine = np.concatenate([np.linspace(t[i], t[i + 1], factor + 1)[:-1]
                               for i in range(len(t) - 1)] + [t[-1:]])
        return self.resample(fine)

    def densified(self, max_step: float = PATH_STEP, max_rounds: int = 12,
                  relative: bool = False) -> "SymplecticPath":
        """Refine intervals until consecutive samples differ by < ``max_step``.

        With ``relative`` the difference is divided by ``max(1, ||Phi_i||)``.
        """
        path = self
        for _ in range(max_rounds):
            M = path.matrices
            d = np.linalg.norm(np.diff(M, axis=0), ord=2, axis=(1, 2))
            if relative:
                d = d / np.maximum(1.0, np.linalg.norm(M[:-1], ord=2, axis=(1, 2)))
            if d.max() < max_step:
                return path
            t = path.times
            new = [t[0]]
            for i, di in enumerate(d):
                k = int(np.ceil(di / (0.8 * max_step))) if di >= max_step else 1
                new.extend(np.linspace(t[i], t[i + 1], k + 1)[1:])
            path = path.resample(np.array(new))
        return path

    def inverse(self) -> "SymplecticPath":
        func = None if self.func is None else (lambda t, f=self.func: inverse(f(t)))
        return SymplecticPath(self.times, np.array([inverse(M) for M in self.matrices]),
                              func=func, validate=False)

    def left(self, psi) -> "SymplecticPath":
        psi = np.asarray(psi, dtype=float)
        func = None if self.func is None else (lambda t, f=self.func: psi @ f(t))
        return SymplecticPath(self.times, psi @ self.matrices, func=func, validate=False)

    def right(self, psi) -> "SymplecticPath":
        psi = np.asarray(psi, dtype=float)
        func = None if self.func is None else (lambda t, f=self.func: f(t) @ psi)
        return SymplecticPath(self.times, self.matrices @ psi, func=func, validate=False)

    def power(self, k: int) -> "SymplecticPath":
        func = None if self.func is None else (
            lambda t, f=self.func: np.linalg.matrix_power(f(t), k))
        mats = np.array([np.linalg.matrix_power(M, k) for M in self.matrices])
        return SymplecticPath(self.times, mats, func=func, validate=False)

    def shifted(self, dt: float) -> "SymplecticPath":
        func = None if self.func is None else (lambda t, f=self.func: f(t - dt))
        return SymplecticPath(self.times + dt, self.matrices, func=func, validate=False)

    def reparametrized(self, t0: float, t1: float) -> "SymplecticPath":
        """Same samples, affinely mapped onto ``[t0, t1]``."""
        a, b = self.times[0], self.times[-1]
        new = t0 + (self.times - a) * (t1 - t0) / (b - a)
        func = None if self.func is None else (
            lambda t, f=self.func: f(a + (t - t0) * (b - a) / (t1 - t0)))
        return SymplecticPath(new, self.matrices, func=func, validate=False)

    def split(self, index: int) -> tuple["SymplecticPath", "SymplecticPath"]:
        if not 0 < index < len(self) - 1:
            raise ValueError("split index must be interior")
        a = SymplecticPath(self.times[: index + 1], self.matrices[: index + 1],
                           func=self.func, validate=False)
        b = SymplecticPath(self.times[index:], self.matrices[index:],
                           func=self.func, validate=False)
        return a, b


def concatenate(paths: Sequence[SymplecticPath], tol: float = 1e-8) -> SymplecticPath:
    """Concatenate paths whose endpoints match; times are shifted to follow on."""
    times = [paths[0].times]
    mats = [paths[0].matrices]
    for p in paths[1:]:
        prev_end = mats[-1][-1]
        if np.linalg.norm(p.start - prev_end, 2) > tol * max(1.0, np.linalg.norm(prev_end, 2)):
            raise ValueError("paths do not join")
        shift = times[-1][-1] - p.times[0]
        times.append(p.times[1:] + shift)
        mats.append(p.matrices[1:])
    return SymplecticPath(np.concatenate(times), np.concatenate(mats), validate=False)


def product(p1: SymplecticPath, p2: SymplecticPath) -> SymplecticPath:
    """Pointwise product ``t -> p1(t) p2(t)`` on the union of both time grids."""
    if p1.n != p2.n:
        raise DimensionMismatch("paths act on different spaces")
    if not (np.isclose(p1.times[0], p2.times[0]) and np.isclose(p1.times[-1], p2.times[-1])):
        p2 = p2.reparametrized(p1.times[0], p1.times[-1])
    grid = np.union1d(p1.times, p2.times)
    grid = grid[np.concatenate([[True], np.diff(grid) > 1e-12 * max(1.0, abs(grid[-1]))])]
    a, b = p1.resample(grid), p2.resample(grid)
    func = None
    if p1.func is not None and p2.func is not None:
        func = lambda t, f=a.func, g=b.func: f(t) @ g(t)
    return SymplecticPath(grid, a.matrices @ b.matrices, func=func, validate=False)


def random_symplectic_path(seed, n: int, samples: int = 33, steps: int = 3,
                           max_step: float = PATH_STEP) -> SymplecticPath:
    """Samples of ``t -> prod_i exp(t J S_i)`` on ``[0, 1]``.

    At least ``samples`` points; more are inserted wherever consecutive
    samples would differ by ``max_step`` or more in operator norm.
    """
    if samples < 2:
        raise ValueError("samples must be at least 2")
    gens = _generators(seed, n, steps)

    def func(t: float) -> np.ndarray:
        M = np.eye(2 * n)
        for X in gens:
            M = expm(t * X) @ M
        return M

    return SymplecticPath.from_function(func, np.linspace(0.0, 1.0, samples)).densified(max_step)
