"""Maslov index of sampled Lagrangian paths and the Hormander index.

The Maslov index is evaluated chart by chart: the sample sequence is cut into
windows, each covered by one auxiliary Lagrangian ``L1`` transverse to ``L0``
and to every sample of the window, and each window contributes
``(sign phi_{L0,L1}(end) - sign phi_{L0,L1}(start)) / 2``.

A sample only counts as transverse to ``L1`` when its margin exceeds the
distance to its neighbours, so the unsampled stretch between two samples
cannot cross the Maslov cycle of ``L1`` unnoticed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import schur

from . import calibration
from .errors import ChartGapError, DimensionMismatch, NotTransverse, PathSynthesisError
from .forms import DEFAULT_TOL, PAPER, SignConvention, ToleranceContext, signature
from .lagr import (LagrangianFrame, chart_matrix, orthonormal_basis, orthonormal_frames, transverse,
                   TRANSVERSE_THRESHOLD)
from .sympl import SymplecticSpace

CHART_MARGIN = 1e-6
CANDIDATE_BATCH = 16
MAX_CANDIDATE_BATCHES = 24
SYNTH_STEP = 0.05


@dataclass(frozen=True, order=True)
class IndexValue:
    """Exact half-integer, stored as twice its value."""

    twice: int

    def __post_init__(self):
        if isinstance(self.twice, (bool, float)) or int(self.twice) != self.twice:
            raise TypeError("IndexValue.twice must be an integer")
        object.__setattr__(self, "twice", int(self.twice))

    @classmethod
    def half(cls, k: int) -> "IndexValue":
        return cls(int(k))

    @classmethod
    def of(cls, value) -> "IndexValue":
        f = Fraction(value) * 2
        if f.denominator != 1:
            raise ValueError(f"{value} is not a half-integer")
        return cls(int(f))

    @classmethod
    def parse(cls, text: str) -> "IndexValue":
        return cls.of(Fraction(text.replace("+", "")))

    def as_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __int__(self):
        if self.twice % 2:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def __float__(self):
        return self.twice / 2

    def __add__(self, other):
        if isinstance(other, int):
            other = IndexValue(2 * other)
        if not isinstance(other, IndexValue):
            return NotImplemented
        return IndexValue(self.twice + other.twice)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = IndexValue(2 * other)
        if not isinstance(other, IndexValue):
            return NotImplemented
        return IndexValue(self.twice - other.twice)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return IndexValue(-self.twice)

    def __abs__(self):
        return IndexValue(abs(self.twice))

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return IndexValue(self.twice * k)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, IndexValue):
            return self.twice == other.twice
        if isinstance(other, (int, Fraction)):
            return Fraction(self.twice, 2) == other
        if isinstance(other, float):
            return self.twice / 2 == other
        return NotImplemented

    def __hash__(self):
        return hash(Fraction(self.twice, 2))

    def __str__(self):
        f = Fraction(self.twice, 2)
        return f"+{f}" if f > 0 else str(f)

    def __repr__(self):
        return f"IndexValue({self})"


ZERO = IndexValue(0)


class LagrangianPath:
    """Samples ``(t_i, L_i)`` of a continuous path of Lagrangians."""

    __slots__ = ("space", "times", "columns", "source")

    def __init__(self, space: SymplecticSpace, times, frames):
        t = np.asarray(times, dtype=float)
        if t.ndim != 1 or len(t) < 2:
            raise ValueError("a path needs at least two samples")
        if np.any(np.diff(t) <= 0):
            raise ValueError("sample times must be strictly increasing")
        if len(frames) != len(t):
            raise ValueError("one frame per time stamp")
        if isinstance(frames, np.ndarray):
            raw = np.asarray(frames, dtype=float)
            cols = orthonormal_frames(space, raw)
        else:
            raw = []
            for F in frames:
                if isinstance(F, LagrangianFrame):
                    if F.space != space:
                        raise DimensionMismatch("frame lives in another space")
                    raw.append(F.source)
                else:
                    F = np.asarray(F, dtype=float)
                    raw.append(F[:, None] if F.ndim == 1 else F)
            raw = np.array(raw, dtype=float)
            cols = orthonormal_frames(space, raw)
        raw = raw.copy()
        raw.setflags(write=False)
        self.space = space
        self.times = t
        self.columns = cols
        self.source = raw

    @classmethod
    def from_function(cls, space: SymplecticSpace, func: Callable[[float], np.ndarray],
                      times) -> "LagrangianPath":
        times = np.asarray(times, dtype=float)
        return cls(space, times, [func(t) for t in times])

    @classmethod
    def constant(cls, L: LagrangianFrame, samples: int = 2) -> "LagrangianPath":
        return cls(L.space, np.linspace(0.0, 1.0, samples), [L] * samples)

    def __len__(self):
        return len(self.times)

    def frame(self, i: int) -> LagrangianFrame:
        return LagrangianFrame(self.space, self.columns[i], check=False)

    @property
    def start(self) -> LagrangianFrame:
        return self.frame(0)

    @property
    def end(self) -> LagrangianFrame:
        return self.frame(-1)

    def transformed(self, M) -> "LagrangianPath":
        M = np.asarray(M, dtype=float)
        return LagrangianPath(self.space, self.times, [M @ F for F in self.columns])

    def slice(self, i: int, j: int) -> "LagrangianPath":
        """Samples ``i..j`` inclusive."""
        return LagrangianPath(self.space, self.times[i:j + 1],
                              [self.frame(k) for k in range(i, j + 1)])

    def reversed(self) -> "LagrangianPath":
        t = self.times
        return LagrangianPath(self.space, (t[-1] + t[0]) - t[::-1],
                              [self.frame(k) for k in range(len(t) - 1, -1, -1)])

    def step_distances(self) -> np.ndarray:
        """Projector distance between consecutive samples."""
        return _projector_distances(self.columns[:-1], self.columns[1:])


def concatenate(paths: Sequence[LagrangianPath], tol: float = 1e-8) -> LagrangianPath:
    space = paths[0].space
    times = [paths[0].times]
    cols = [paths[0].columns]
    for p in paths[1:]:
        if p.space != space:
            raise DimensionMismatch("paths live in different spaces")
        d = _projector_distances(cols[-1][-1:], p.columns[:1])[0]
        if d > tol:
            raise ValueError(f"paths do not join (gap {d:.3e})")
        times.append(p.times[1:] + (times[-1][-1] - p.times[0]))
        cols.append(p.columns[1:])
    return LagrangianPath(space, np.concatenate(times),
                          np.concatenate(cols))


def _projector_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    # sin of the largest principal angle, from the residual of B off span(A)
    R = B - A @ (np.swapaxes(A, -1, -2) @ B)
    return np.linalg.norm(R, ord=2, axis=(-2, -1))


def _margins(cands: np.ndarray, samples: np.ndarray) -> np.ndarray:
    """``sigma_min([L1 | L])`` for each candidate/sample pair, shape (C, N)."""
    prod = np.einsum("cdk,ndl->cnkl", cands, samples)
    top = np.linalg.norm(prod, ord=2, axis=(-2, -1))
    return np.sqrt(np.clip(1.0 - top, 0.0, None))


class _Candidates:
    """Auxiliary Lagrangians transverse to ``L0``: ``span(J L0 + L0 S)``, S symmetric."""

    def __init__(self, L0: LagrangianFrame, seed, deterministic_first: bool = True):
        self.L0 = L0
        self.E = L0.space.J @ L0.columns
        self.rng = np.random.default_rng(seed)
        self.batches = 0
        self.deterministic_first = deterministic_first

    def _frame(self, S: np.ndarray) -> np.ndarray:
        return orthonormal_basis(self.E + self.L0.columns @ S)

    def next_batch(self) -> np.ndarray:
        n = self.L0.n
        out = []
        if self.batches == 0 and self.deterministic_first:
            for theta in np.linspace(-1.2, 1.2, 9):
                out.append(self._frame(np.tan(theta) * np.eye(n)))
        for _ in range(CANDIDATE_BATCH - len(out)):
            S = self.rng.normal(size=(n, n))
            S = (S + S.T) * (self.rng.uniform(0.3, 3.0) / 2)
            out.append(self._frame(S))
        self.batches += 1
        return np.array(out)


@dataclass(frozen=True)
class Window:
    start: int
    end: int
    auxiliary: np.ndarray = field(repr=False)
    min_margin: float
    start_signature: int
    end_signature: int

    @property
    def contribution(self) -> IndexValue:
        return IndexValue(self.end_signature - self.start_signature)


@dataclass(frozen=True)
class MaslovReport:
    index: IndexValue
    windows: tuple
    candidates_tried: int

    def diagnostics(self) -> list[dict]:
        return [{"start": w.start, "end": w.end, "min_margin": round(w.min_margin, 9),
                 "contribution": str(w.contribution)} for w in self.windows]


def _check_common(path: LagrangianPath, L0: LagrangianFrame) -> None:
    if path.space != L0.space:
        raise DimensionMismatch("path and reference Lagrangian live in different spaces")


def maslov_report(path: LagrangianPath, L0: LagrangianFrame,
                  conv: SignConvention = PAPER, tol: ToleranceContext = DEFAULT_TOL,
                  seed=0, delta: float = CHART_MARGIN,
                  deterministic_first: bool = True) -> MaslovReport:
    """Maslov index with the window decomposition used to compute it."""
    _check_common(path, L0)
    conv = SignConvention.parse(conv)
    F = path.columns
    N = len(F)
    steps = path.step_distances()
    need = np.full(N, delta)
    need[:-1] = np.maximum(need[:-1], steps)
    need[1:] = np.maximum(need[1:], steps)

    gen = _Candidates(L0, seed, deterministic_first)
    cands = np.zeros((0,) + L0.columns.shape)
    margins = np.zeros((0, N))
    ok = np.zeros((0, N), dtype=bool)

    def add_batch():
        nonlocal cands, margins, ok
        batch = gen.next_batch()
        base = _margins(batch, L0.columns[None])[:, 0]
        batch = batch[base >= delta]
        m = _margins(batch, F)
        cands = np.concatenate([cands, batch])
        margins = np.concatenate([margins, m])
        ok = np.concatenate([ok, m >= need[None, :]])

    add_batch()
    G = L0.space.gram
    windows = []
    total = 0
    s = 0
    while s < N - 1:
        while True:
            live = ok[:, s] & ok[:, s + 1]
            if live.any():
                break
            if gen.batches >= MAX_CANDIDATE_BATCHES:
                raise ChartGapError(
                    f"samples {s} and {s + 1} (t={path.times[s]:.6g}..{path.times[s + 1]:.6g}) "
                    f"admit no common auxiliary Lagrangian with margin >= "
                    f"{max(need[s], need[s + 1]):.3g}; refine the sampling there")
            add_batch()
        best = None
        for c in np.flatnonzero(live):
            run = ok[c, s:]
            stop = np.flatnonzero(~run)
            e = s + (int(stop[0]) - 1 if len(stop) else len(run) - 1)
            slack = float(np.min(margins[c, s:e + 1] / need[s:e + 1]))
            key = (e, slack)
            if best is None or key > best[0]:
                best = (key, c)
        (e, _), c = best
        L1 = cands[c]
        sig_s = _chart_signature(L0.columns, L1, F[s], G, conv, tol)
        sig_e = _chart_signature(L0.columns, L1, F[e], G, conv, tol)
        windows.append(Window(s, e, L1, float(np.min(margins[c, s:e + 1])), sig_s, sig_e))
        total += sig_e - sig_s
        s = e
    return MaslovReport(IndexValue(total), tuple(windows), len(cands))


def _chart_signature(L0c, L1c, Lc, gram, conv, tol) -> int:
    n = L0c.shape[1]
    ab = np.linalg.solve(np.hstack([Lc, -L1c]), L0c)
    B = (L1c @ ab[n:]).T @ gram @ L0c
    return signature((B + B.T) / 2, conv, tol)


def maslov_index(path: LagrangianPath, L0: LagrangianFrame,
                 conv: SignConvention = PAPER, tol: ToleranceContext = DEFAULT_TOL,
                 seed=0, delta: float = CHART_MARGIN,
                 deterministic_first: bool = True) -> IndexValue:
    """``L0``-Maslov index of a sampled Lagrangian path, as an exact half-integer."""
    return maslov_report(path, L0, conv, tol, seed, delta, deterministic_first).index


# -- path synthesis -----------------------------------------------------------

def _unitary_coordinates(A: np.ndarray, B: np.ndarray, J: np.ndarray) -> np.ndarray:
    """``B`` in the unitary frame ``(A, J A)``: the matrix ``X + iY``."""
    return A.T @ B + 1j * ((J @ A).T @ B)


def _unitary_frame(A: np.ndarray, J: np.ndarray, u: np.ndarray) -> np.ndarray:
    return A @ u.real + (J @ A) @ u.imag


def geodesic_path(L0: LagrangianFrame, L1: LagrangianFrame, step: float = SYNTH_STEP,
                  t0: float = 0.0, t1: float = 1.0) -> LagrangianPath:
    """Path ``t -> exp(t log U) L0`` with ``U`` unitary and ``U L0 = L1``."""
    if L0.space != L1.space:
        raise DimensionMismatch("Lagrangians live in different spaces")
    J = L0.space.J
    A = L0.columns
    u = _unitary_coordinates(A, L1.columns, J)
    T, V = schur(u, output="complex")
    theta = np.angle(np.diag(T))
    k = max(2, int(np.ceil(np.abs(theta).max(initial=0.0) / step)) + 1)
    ts = np.linspace(0.0, 1.0, k)
    frames = []
    for s in ts:
        us = (V * np.exp(1j * s * theta)) @ V.conj().T
        frames.append(_unitary_frame(A, J, us))
    frames[-1] = L1.columns
    return LagrangianPath(L0.space, t0 + ts * (t1 - t0), frames)


def random_lagrangian(space: SymplecticSpace, rng: np.random.Generator,
                      reference: Optional[LagrangianFrame] = None) -> LagrangianFrame:
    n = space.n
    if reference is None:
        I = np.eye(space.dim)
        reference = LagrangianFrame(space, I[:, :n] if space.doubled_from is None
                                    else np.vstack([np.eye(n), np.eye(n)]))
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(Z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return LagrangianFrame(space, _unitary_frame(reference.columns, space.J, q))


def synthesize_paths(L0p: LagrangianFrame, L1p: LagrangianFrame, seed=0,
                     step: float = SYNTH_STEP) -> tuple[LagrangianPath, LagrangianPath]:
    """Two independently built connecting paths from ``L0p`` to ``L1p``.

    The first is the unitary geodesic; the second detours through a random
    Lagrangian.
    """
    rng = np.random.default_rng(seed)
    direct = geodesic_path(L0p, L1p, step)
    mid = random_lagrangian(L0p.space, rng, L0p)
    detour = concatenate([geodesic_path(L0p, mid, step), geodesic_path(mid, L1p, step)])
    return direct, detour


# -- Hormander index -----------------------------------------------------------

def hormander_by_definition(L0: LagrangianFrame, L1: LagrangianFrame,
                            L0p: LagrangianFrame, L1p: LagrangianFrame,
                            conv: SignConvention = PAPER, tol: ToleranceContext = DEFAULT_TOL,
                            seed=0, retries: int = 4) -> IndexValue:
    """``mu_{L1}(gamma) - mu_{L0}(gamma)`` for a path ``gamma`` from ``L0p`` to ``L1p``.

    Evaluated on two independently synthesized paths; they must agree.
    """
    rng = np.random.default_rng(seed)
    last_error = None
    for _ in range(retries):
        sub = int(rng.integers(2**32))
        try:
            paths = synthesize_paths(L0p, L1p, sub)
            values = [maslov_index(p, L1, conv, tol, seed=sub) - maslov_index(p, L0, conv, tol, seed=sub)
                      for p in paths]
        except ChartGapError as exc:
            last_error = exc
            continue
        if values[0] != values[1]:
            raise PathSynthesisError(
                f"connecting paths disagree ({values[0]} vs {values[1]}); "
                "Hormander index is path independent, so the sampling is inadequate")
        return values[0]
    raise PathSynthesisError(f"no adequately sampled connecting path found: {last_error}")


def hormander_by_kashiwara(L0: LagrangianFrame, L1: LagrangianFrame,
                           L0p: LagrangianFrame, L1p: LagrangianFrame,
                           conv: SignConvention = PAPER,
                           tol: ToleranceContext = DEFAULT_TOL) -> IndexValue:
    """``(tau(L1, L0', L1') - tau(L0, L0', L1')) / 2``, times its calibrated sign."""
    from .lagr import kashiwara

    raw = kashiwara(L1, L0p, L1p, conv, tol) - kashiwara(L0, L0p, L1p, conv, tol)
    return IndexValue(calibration.KASHIWARA_SIGN * raw)


def hormander_closed_form(L0: LagrangianFrame, L: LagrangianFrame, Lp: LagrangianFrame,
                          L1aux: LagrangianFrame, conv: SignConvention = PAPER,
                          tol: ToleranceContext = DEFAULT_TOL) -> IndexValue:
    """``q(L0, L; L0, L')`` from the chart difference ``phi_{L1,L0}(L) - phi_{L1,L0}(L')``.

    The half signature is multiplied by the calibrated constant ``EPSILON_Q``.
    """
    for X, name in ((L, "L"), (Lp, "L'"), (L1aux, "auxiliary")):
        ok, m = transverse(X, L0, TRANSVERSE_THRESHOLD)
        if not ok:
            raise NotTransverse(f"{name} is not transverse to L0 (margin {m:.3e})")
    diff = chart_matrix(L1aux, L0, L) - chart_matrix(L1aux, L0, Lp)
    return IndexValue(calibration.EPSILON_Q * signature(diff, conv, tol))
