"""Linear Hamiltonian systems, fundamental solutions and iterate indices."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import expm

from .cz import IterateRow, cz_index, deviation_row
from .errors import StepTooLarge
from .forms import DEFAULT_TOL, PAPER, SignConvention, ToleranceContext
from .maslov import IndexValue
from .sympl import PATH_STEP, SymplecticPath, standard_j, symplectic_defect

STEP_DEFECT_RTOL = 1e-10
PERIODICITY_TOL = 1e-9


@dataclass(frozen=True)
class LinearHamiltonianSystem:
    """``v' = J S(t) v`` with ``S`` symmetric and ``T``-periodic.

    ``description`` keeps the serializable description the system was built from.
    """

    n: int
    T: float
    hessian: Callable[[float], np.ndarray] = field(repr=False)
    name: str = ""
    description: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1 or not self.T > 0:
            raise ValueError("need n >= 1 and T > 0")
        for t in np.linspace(0.0, self.T, 7):
            S = np.asarray(self.hessian(t), dtype=float)
            if S.shape != (2 * self.n, 2 * self.n):
                raise ValueError(f"hessian must be {2 * self.n} x {2 * self.n}")
            if np.linalg.norm(S - S.T) > 1e-12 * max(1.0, np.linalg.norm(S)):
                raise ValueError("hessian must be symmetric")
            if np.linalg.norm(S - self.hessian(t + self.T)) > PERIODICITY_TOL * max(1.0, np.linalg.norm(S)):
                raise ValueError("hessian is not T-periodic")

    @classmethod
    def constant(cls, S, T: float, name: str = "") -> "LinearHamiltonianSystem":
        S = np.asarray(S, dtype=float)
        S = (S + S.T) / 2
        return cls(len(S) // 2, float(T), lambda t: S, name,
                   {"kind": "constant", "matrix": S.tolist()})

    @classmethod
    def fourier(cls, S0, terms, T: float, name: str = "") -> "LinearHamiltonianSystem":
        """``S(t) = S0 + sum_k (A_k cos(2 pi k t / T) + B_k sin(2 pi k t / T))``.

        ``terms`` is a sequence of ``(k, A_k, B_k)``.
        """
        S0 = np.asarray(S0, dtype=float)
        parsed = [(int(k), np.asarray(A, dtype=float), np.asarray(B, dtype=float))
                  for k, A, B in terms]
        w = 2 * np.pi / T

        def hess(t: float) -> np.ndarray:
            S = S0.copy()
            for k, A, B in parsed:
                S = S + A * np.cos(w * k * t) + B * np.sin(w * k * t)
            return S

        description = {"kind": "fourier", "constant": S0.tolist(),
                "terms": [{"k": k, "cos": A.tolist(), "sin": B.tolist()} for k, A, B in parsed]}
        return cls(len(S0) // 2, float(T), hess, name, description)


def harmonic(T: float = np.pi / 2) -> LinearHamiltonianSystem:
    return LinearHamiltonianSystem.constant(np.eye(2), T, "harmonic")


def anisotropic(a: float = 1.0, b: float = 2.0, T: float = np.pi / 2) -> LinearHamiltonianSystem:
    return LinearHamiltonianSystem.constant(np.diag([a, b, a, b]), T, "anisotropic")


def hyperbolic(T: float = 0.25) -> LinearHamiltonianSystem:
    return LinearHamiltonianSystem.constant(np.diag([1.0, -1.0]), T, "hyperbolic")


def kicked(T: float = 1.0, strength: float = 0.8) -> LinearHamiltonianSystem:
    """Oscillator with a periodically modulated stiffness."""
    A = np.diag([strength, 0.0])
    return LinearHamiltonianSystem.fourier(np.diag([1.5, 1.0]), [(1, A, np.zeros((2, 2)))],
                                           T, "kicked")


def catalog() -> list[LinearHamiltonianSystem]:
    return [harmonic(), anisotropic(), hyperbolic(), kicked()]


@dataclass(frozen=True)
class FundamentalSolution:
    system: LinearHamiltonianSystem
    path: SymplecticPath
    max_defect: float


def integrate_fundamental(system: LinearHamiltonianSystem, steps: int = 1000) -> FundamentalSolution:
    """``Phi' = J S(t) Phi``, ``Phi(0) = Id``, by midpoint-frozen exponential steps.

    Raises
    ------
    StepTooLarge
        If consecutive samples differ by ``PATH_STEP`` or more in operator norm.
    """
    if steps < 8:
        raise ValueError("steps must be at least 8")
    J = standard_j(system.n)
    h = system.T / steps
    times = np.linspace(0.0, system.T, steps + 1)
    mats = np.empty((steps + 1, 2 * system.n, 2 * system.n))
    mats[0] = np.eye(2 * system.n)
    worst = 0.0
    for i in range(steps):
        S = np.asarray(system.hessian(times[i] + h / 2), dtype=float)
        mats[i + 1] = expm(h * J @ ((S + S.T) / 2)) @ mats[i]
        d = np.linalg.norm(mats[i + 1] - mats[i], 2)
        if d >= PATH_STEP:
            raise StepTooLarge(f"step {i} moves {d:.3g} >= {PATH_STEP}; increase steps")
        rel = symplectic_defect(mats[i + 1]) / np.linalg.norm(mats[i + 1], 2) ** 2
        worst = max(worst, rel)
    return FundamentalSolution(system, SymplecticPath(times, mats, validate=False), worst)


def extend_periodic(sol: FundamentalSolution, N: int) -> SymplecticPath:
    """The solution on ``[0, N T]`` via ``Phi(t + kT) = Phi(t) Phi(T)^k``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    p = sol.path
    T = sol.system.T
    end = p.end
    times = [p.times]
    mats = [p.matrices]
    power = np.eye(len(end))
    for k in range(1, N):
        power = power @ end
        times.append(p.times[1:] + k * T)
        mats.append(p.matrices[1:] @ power)
    return SymplecticPath(np.concatenate(times), np.concatenate(mats), validate=False)


def seam_gap(sol: FundamentalSolution, N: int) -> float:
    """Largest jump at the seams ``kT`` of the periodic extension."""
    p = sol.path
    end = p.end
    power = np.eye(len(end))
    gap = 0.0
    for _ in range(1, N):
        left = p.matrices[-1] @ power
        power = power @ end
        right = p.matrices[0] @ power
        gap = max(gap, float(np.linalg.norm(left - right, 2)))
    return gap


@dataclass(frozen=True)
class IterateReport:
    system: str
    rows: tuple
    power_indices: tuple

    @property
    def extension_matches_power(self) -> bool:
        return all(r.index == p for r, p in zip(self.rows, self.power_indices))

    @property
    def half_bound_violations(self) -> list[int]:
        return [r.k for r in self.rows if not r.within_half_bound]

    @property
    def full_bound_holds(self) -> bool:
        return all(r.within_full_bound for r in self.rows)


def iterate_index_report(system: LinearHamiltonianSystem, N: int, conv: SignConvention = PAPER,
                         tol: ToleranceContext = DEFAULT_TOL, steps: int = 400,
                         sol: FundamentalSolution | None = None) -> IterateReport:
    """Index of the ``k``-fold periodic extension for ``k = 1..N``.

    Each extension is compared with the pointwise ``k``-th power of the
    one-period path.
    """
    if sol is None:
        sol = integrate_fundamental(system, steps)
    rows = []
    powers = []
    i1 = None
    for k in range(1, N + 1):
        ik = cz_index(extend_periodic(sol, k), conv, tol)
        pk = ik if k == 1 else cz_index(sol.path.power(k).densified(relative=True), conv, tol)
        if i1 is None:
            i1 = ik
        rows.append(deviation_row(k, system.n, ik, i1))
        powers.append(pk)
    return IterateReport(system.name, tuple(rows), tuple(powers))


def index_table(report: IterateReport) -> list[dict]:
    return [{"k": r.k, "index": str(r.index), "deviation": str(r.deviation),
             "half_bound": str(r.half_bound), "full_bound": str(r.full_bound),
             "within_half_bound": r.within_half_bound, "within_full_bound": r.within_full_bound}
            for r in report.rows]


__all__ = ["LinearHamiltonianSystem", "FundamentalSolution", "IterateReport", "IterateRow",
           "IndexValue", "harmonic", "anisotropic", "hyperbolic", "kicked", "catalog",
           "integrate_fundamental", "extend_periodic", "seam_gap", "iterate_index_report",
           "index_table"]
