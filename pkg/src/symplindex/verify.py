"""Randomized invariant batteries, one suite per module.

Every check is a function ``check(rng) -> (ok, detail)``. ``ok`` is ``None``
when the drawn trial violates the check's preconditions and is skipped. Each
trial gets its own generator derived from ``(seed, suite, check, trial)``, so
results do not depend on the order or the process in which trials run.
"""

from __future__ import annotations

import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import calibration
from .cayley import (classical_relation_defect, cayley, kernel_law_defect, psi_cayley,
                     smallest_singular)
from .cz import (cz_index, cz_inverse_defect, find_admissible_psi, iterate_cz, pointwise_product,
                 product_cz, product_cz_nondegenerate, product_cz_psi, shifted_cz,
                 three_signature_q)
from .errors import DegenerateEndpoint, SearchExhausted
from .forms import (PAPER, STANDARD, inertia, inverse_difference_identity_defect,
                    signature)
from .ham import catalog, harmonic, iterate_index_report
from .lagr import (LagrangianFrame, antidiagonal, change_of_chart_pair, chart_matrix,
                   chart_swap_defect, diagonal, kashiwara, kashiwara_via_projection, transverse,
                   vertical)
from .maslov import (IndexValue, LagrangianPath, hormander_by_definition, hormander_by_kashiwara,
                     hormander_closed_form, maslov_index, random_lagrangian)
from .meta import (MetaplecticElement, Mod4Value, compose, compose_report, determinant_identity_defect,
                   factor_free_pair, free_matrix, inert, is_free, matrix_to_w, nu_compose, nu_vs_cz,
                   polar_path, random_element, random_generating_function)
from .sympl import (SymplecticPath, SymplecticSpace, graph_lagrangian, inverse, random_symplectic,
                    random_symplectic_path, rotation)

Check = Callable[[np.random.Generator], tuple]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    trials: int
    passed: int
    skipped: int
    counterexamples: tuple = field(default=())

    @property
    def failed(self) -> int:
        return self.trials - self.passed - self.skipped

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def as_dict(self) -> dict:
        return {"suite": self.suite, "check": self.name, "trials": self.trials,
                "passed": self.passed, "skipped": self.skipped, "failed": self.failed,
                "pass": self.ok, "counterexamples": list(self.counterexamples)}


# -- random inputs ---------------------------------------------------------------

def _seed(rng: np.random.Generator) -> int:
    return int(rng.integers(2**31))


def _n(rng, hi: int) -> int:
    return int(rng.integers(1, hi + 1))


def _gapped_symmetric(rng, dim: int, zeros: int = 0, lo: float = 0.3, hi: float = 3.0) -> np.ndarray:
    lam = rng.uniform(lo, hi, dim) * rng.choice([-1.0, 1.0], dim)
    lam[:zeros] = 0.0
    Q, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    return Q @ np.diag(lam) @ Q.T


def _well_conditioned(rng, dim: int) -> np.ndarray:
    G = rng.normal(size=(dim, dim))
    return np.eye(dim) + 0.4 * G / np.linalg.norm(G, 2)


def _lagrangians(rng, space, k: int) -> list:
    return [random_lagrangian(space, rng) for _ in range(k)]


def _lagrangian_path(rng, n: int) -> tuple[LagrangianPath, SymplecticPath]:
    sp = random_symplectic_path(_seed(rng), n, samples=17, steps=int(rng.integers(1, 5)))
    L = random_lagrangian(SymplecticSpace.standard(n), rng)
    frames = sp.matrices @ L.columns
    return LagrangianPath(L.space, sp.times, frames), sp


def _tolist(x):
    return np.asarray(x).tolist()


# -- forms -----------------------------------------------------------------------

def forms_congruence(rng):
    dim = _n(rng, 6)
    A = _gapped_symmetric(rng, dim, zeros=int(rng.integers(0, dim)))
    G = _well_conditioned(rng, dim)
    a, b = inertia(A), inertia(G.T @ A @ G)
    return a == b, {"A": _tolist(A), "G": _tolist(G)}


def forms_negation(rng):
    dim = _n(rng, 6)
    A = _gapped_symmetric(rng, dim, zeros=int(rng.integers(0, dim)))
    ok = all(signature(-A, c) == -signature(A, c) for c in (PAPER, STANDARD))
    ok = ok and signature(A, PAPER) == -signature(A, STANDARD)
    return ok, {"A": _tolist(A)}


def _nondegenerate_triple(rng, dim: int, margin: float = 1e-3):
    for _ in range(50):
        U = _gapped_symmetric(rng, dim)
        Z = _gapped_symmetric(rng, dim)
        if min(np.abs(np.linalg.eigvalsh(X)).min() for X in (U, Z, U - Z)) >= margin:
            return U, Z
    return None


def forms_inverse_difference(rng):
    dim = _n(rng, 6)
    pair = _nondegenerate_triple(rng, dim)
    if pair is None:
        return None, {}
    U, Z = pair
    ok = all(inverse_difference_identity_defect(U, Z, c) == 0 for c in (PAPER, STANDARD))
    return ok, {"U": _tolist(U), "Z": _tolist(Z)}


def forms_difference_bound(rng):
    dim = _n(rng, 6)
    pair = _nondegenerate_triple(rng, dim)
    if pair is None:
        return None, {}
    B1, B2 = pair
    # the bracket of the product formula obeys the bound; the all-minus
    # combination reaches 3n and is reported only
    bracket = signature(B2 - B1) - signature(B2) + signature(B1)
    all_minus = signature(B2 - B1) - signature(B2) - signature(B1)
    return abs(bracket) <= dim, {"B1": _tolist(B1), "B2": _tolist(B2), "bracket": bracket,
                                 "all_minus": all_minus}


# -- lagr ------------------------------------------------------------------------

def lagr_antisymmetry(rng):
    space = SymplecticSpace.standard(_n(rng, 3))
    a, b, c = _lagrangians(rng, space, 3)
    t = kashiwara(a, b, c)
    ok = kashiwara(b, a, c) == -t and kashiwara(a, c, b) == -t and kashiwara(c, b, a) == -t
    return ok, {"tau": t}


def lagr_invariance(rng):
    n = _n(rng, 3)
    space = SymplecticSpace.standard(n)
    a, b, c = _lagrangians(rng, space, 3)
    M = random_symplectic(_seed(rng), n)
    ok = kashiwara(a.transformed(M), b.transformed(M), c.transformed(M)) == kashiwara(a, b, c)
    return ok, {"M": _tolist(M)}


def lagr_cocycle(rng):
    space = SymplecticSpace.standard(_n(rng, 3))
    L0, L1, L2, L3 = _lagrangians(rng, space, 4)
    v = kashiwara(L1, L2, L3) - kashiwara(L0, L2, L3) + kashiwara(L0, L1, L3) - kashiwara(L0, L1, L2)
    return v == 0, {"value": v}


def lagr_projection(rng):
    space = SymplecticSpace.standard(_n(rng, 3))
    L, Lp, Lpp = _lagrangians(rng, space, 3)
    if not transverse(L, Lpp)[0]:
        return None, {}
    ok = all(kashiwara_via_projection(L, Lp, Lpp, c) == kashiwara(L, Lp, Lpp, c)
             for c in (PAPER, STANDARD))
    return ok, {}


def lagr_chart_swap(rng):
    space = SymplecticSpace.standard(_n(rng, 3))
    L0, L1, L = _lagrangians(rng, space, 3)
    return chart_swap_defect(L0, L1, L) == 0, {}


def lagr_change_of_chart(rng):
    space = SymplecticSpace.standard(_n(rng, 3))
    L0, L1, L, Lp = _lagrangians(rng, space, 4)
    direct, diff = change_of_chart_pair(L0, L1, L, Lp)
    return signature(direct) == signature(diff), {}


def lagr_graph_chart(rng):
    n = _n(rng, 3)
    space = SymplecticSpace.standard(n)
    Phi = random_symplectic(_seed(rng), n)
    I = np.eye(2 * n)
    if min(smallest_singular(I - Phi), smallest_singular(I + Phi)) < 1e-3:
        return None, {}
    # in the orthonormal frames v -> (v, +-v)/sqrt(2) the factor 2 cancels:
    # base antidiagonal gives omega((Id+Phi)(Id-Phi)^{-1}., .), base diagonal
    # gives omega((Id-Phi)(Id+Phi)^{-1}., .)
    D, Do, G = diagonal(space), antidiagonal(space), graph_lagrangian(Phi)
    err = 0.0
    for base, aux, X in ((Do, D, (I + Phi) @ np.linalg.inv(I - Phi)),
                         (D, Do, (I - Phi) @ np.linalg.inv(I + Phi))):
        F = X.T @ space.gram
        F = (F + F.T) / 2
        err = max(err, np.linalg.norm(chart_matrix(base, aux, G) - F) / max(1.0, np.linalg.norm(F)))
    return err < 1e-8, {"error": err}


# -- maslov ----------------------------------------------------------------------

def maslov_chart_independence(rng):
    n = _n(rng, 3)
    path, _ = _lagrangian_path(rng, n)
    L0 = random_lagrangian(path.space, rng)
    a = maslov_index(path, L0, seed=_seed(rng), deterministic_first=False)
    b = maslov_index(path, L0, seed=_seed(rng), deterministic_first=False)
    c = maslov_index(path, L0)
    return a == b == c, {"values": [str(a), str(b), str(c)]}


def maslov_additivity(rng):
    n = _n(rng, 3)
    path, _ = _lagrangian_path(rng, n)
    L0 = random_lagrangian(path.space, rng)
    k = int(rng.integers(1, len(path) - 1))
    whole = maslov_index(path, L0)
    parts = maslov_index(path.slice(0, k), L0) + maslov_index(path.slice(k, len(path) - 1), L0)
    return whole == parts, {"whole": str(whole), "parts": str(parts), "split": k}


def maslov_refinement(rng):
    n = _n(rng, 3)
    path, sp = _lagrangian_path(rng, n)
    L0 = random_lagrangian(path.space, rng)
    fine = sp.refined(2)
    L = LagrangianFrame(path.space, path.columns[0])
    # recover the base Lagrangian: path samples are Phi(t) L with Phi(0) = Id
    fine_path = LagrangianPath(path.space, fine.times, fine.matrices @ L.columns)
    a, b = maslov_index(path, L0), maslov_index(fine_path, L0)
    return a == b, {"coarse": str(a), "fine": str(b)}


def maslov_invariance(rng):
    n = _n(rng, 3)
    path, _ = _lagrangian_path(rng, n)
    L0 = random_lagrangian(path.space, rng)
    M = random_symplectic(_seed(rng), n)
    a = maslov_index(path, L0)
    b = maslov_index(path.transformed(M), L0.transformed(M))
    return a == b, {"before": str(a), "after": str(b)}


def maslov_sign_flip(rng):
    n = _n(rng, 3)
    path, _ = _lagrangian_path(rng, n)
    L0 = random_lagrangian(path.space, rng)
    R = np.diag(np.r_[np.ones(n), -np.ones(n)])
    a = maslov_index(path, L0)
    b = maslov_index(path.transformed(R), L0.transformed(R))
    return a == -b, {"before": str(a), "after": str(b)}


def maslov_rotation_fixture(rng):
    space = SymplecticSpace.standard(1)
    ts = np.linspace(np.pi / 4, 3 * np.pi / 4, 21)
    path = LagrangianPath(space, ts, np.array([[[np.cos(t)], [np.sin(t)]] for t in ts]))
    a, b = maslov_index(path, vertical(1), PAPER), maslov_index(path, vertical(1), STANDARD)
    return a == 1 and b == -1, {"paper": str(a), "standard": str(b)}


def hormander_path_independence(rng):
    space = SymplecticSpace.standard(_n(rng, 2))
    L0, L1, L0p, L1p = _lagrangians(rng, space, 4)
    # raises when the two synthesized paths disagree
    v = hormander_by_definition(L0, L1, L0p, L1p, seed=_seed(rng))
    return True, {"value": str(v)}


def hormander_kashiwara_route(rng):
    space = SymplecticSpace.standard(_n(rng, 2))
    L0, L1, L0p, L1p = _lagrangians(rng, space, 4)
    a = hormander_by_definition(L0, L1, L0p, L1p, seed=_seed(rng))
    b = hormander_by_kashiwara(L0, L1, L0p, L1p)
    return a == b, {"definitional": str(a), "kashiwara": str(b)}


def hormander_closed_form_route(rng):
    space = SymplecticSpace.standard(_n(rng, 2))
    L0, L, Lp, aux = _lagrangians(rng, space, 4)
    a = hormander_by_definition(L0, L, L0, Lp, seed=_seed(rng))
    b = hormander_closed_form(L0, L, Lp, aux)
    return a == b, {"definitional": str(a), "closed_form": str(b)}


def hormander_three_signature_route(rng):
    n = _n(rng, 2)
    phi1 = random_symplectic(_seed(rng), n)
    phi2 = random_symplectic(_seed(rng), n)
    try:
        psi = find_admissible_psi(np.eye(2 * n), 1, _seed(rng), margin=0.05, extra=[phi1, phi2])
    except SearchExhausted:
        return None, {}
    D = diagonal(SymplecticSpace.standard(n))
    a = hormander_by_definition(D, graph_lagrangian(phi1), D, graph_lagrangian(phi2), seed=_seed(rng))
    b, shortcut = three_signature_q(phi1, phi2, psi)
    ok = a == b and (shortcut is None or shortcut == b)
    return ok, {"definitional": str(a), "three_signature": str(b)}


def calibration_vector_check(rng):
    res = calibration.calibrate(seed=_seed(rng))
    ok = res["matches_recorded"] and res["definitional"] in ("+1", "-1")
    return ok, {"calibration": res}


# -- cayley ----------------------------------------------------------------------

def _sp_with_margin(rng, n: int, margin: float = 1e-3):
    for _ in range(50):
        Phi = random_symplectic(_seed(rng), n, steps=int(rng.integers(1, 5)))
        if smallest_singular(np.eye(2 * n) - Phi) >= margin:
            return Phi
    return None


def cayley_symmetry(rng):
    n = _n(rng, 4)
    Phi = _sp_with_margin(rng, n)
    if Phi is None:
        return None, {}
    M = cayley(Phi)
    Mi = cayley(inverse(Phi))
    anti = np.linalg.norm(Mi.matrix + M.matrix, 2) / max(np.linalg.norm(M.matrix, 2), 1e-300)
    ok = M.asymmetry <= 1e-8 and Mi.asymmetry <= 1e-8 and anti <= 1e-8
    return ok, {"asymmetry": M.asymmetry, "antisymmetry": anti, "Phi": _tolist(Phi)}


def _embed_identity_block(n: int, k: int, inner: np.ndarray) -> np.ndarray:
    """``Id`` on the first ``k`` coordinate pairs and ``inner`` on the rest."""
    m = n - k
    M = np.eye(2 * n)
    idx = np.r_[np.arange(k, n), np.arange(n + k, 2 * n)]
    M[np.ix_(idx, idx)] = inner if m else M[np.ix_(idx, idx)]
    return M


def cayley_kernel_law(rng):
    n = _n(rng, 3)
    k = int(rng.integers(0, n + 1)) if rng.random() < 0.6 else 0
    inner = random_symplectic(_seed(rng), n - k) if n - k else np.zeros((0, 0))
    S = random_symplectic(_seed(rng), n)
    Phi = inverse(S) @ _embed_identity_block(n, k, inner) @ S
    try:
        psi = find_admissible_psi(np.eye(2 * n), 1, _seed(rng), margin=0.05, extra=[Phi])
    except SearchExhausted:
        return None, {}
    return kernel_law_defect(psi, Phi) == 0, {"identity_block": k, "Phi": _tolist(Phi)}


def cayley_chart_consistency(rng):
    n = _n(rng, 3)
    Phi = random_symplectic(_seed(rng), n)
    try:
        psi = find_admissible_psi(np.eye(2 * n), 1, _seed(rng), margin=0.05, extra=[Phi])
    except SearchExhausted:
        return None, {}
    space = SymplecticSpace.standard(n)
    C = psi_cayley(psi, Phi).matrix
    ch = chart_matrix(diagonal(space), graph_lagrangian(psi), graph_lagrangian(Phi))
    err = np.linalg.norm(2 * ch - C) / max(1.0, np.linalg.norm(C))
    return err < 1e-7, {"error": err}


def cayley_classical_relation(rng):
    n = _n(rng, 3)
    Phi = _sp_with_margin(rng, n)
    if Phi is None or smallest_singular(np.eye(2 * n) + Phi) < 1e-3:
        return None, {}
    d = classical_relation_defect(Phi)
    return d < 1e-7, {"defect": d}


# -- product ---------------------------------------------------------------------

def _path(rng, n: int) -> SymplecticPath:
    return random_symplectic_path(_seed(rng), n, samples=17, steps=int(rng.integers(1, 5)))


def product_first_formula(rng):
    n = _n(rng, 3)
    p1 = _path(rng, n).left(random_symplectic(_seed(rng), n))
    p2 = _path(rng, n).right(random_symplectic(_seed(rng), n))
    r = product_cz(p1, p2, seed=_seed(rng))
    return r.consistent, {"direct": str(r.direct), "decomposition": str(r.decomposition)}


def product_nondegenerate(rng):
    n = _n(rng, 3)
    p1, p2 = _path(rng, n), _path(rng, n)
    I = np.eye(2 * n)
    if min(smallest_singular(I - p1.end), smallest_singular(I - p2.end)) < 1e-3:
        return None, {}
    try:
        r = product_cz_nondegenerate(p1, p2)
    except DegenerateEndpoint:
        return None, {}
    return r.consistent, {"direct": str(r.direct), "predicted": str(r.predicted)}


def product_psi(rng):
    n = _n(rng, 3)
    p1, p2 = _path(rng, n), _path(rng, n)
    try:
        psi = find_admissible_psi(p2.end, 1, _seed(rng), margin=0.05,
                                  extra=[p1.end, inverse(p1.end)])
    except SearchExhausted:
        return None, {}
    r = product_cz_psi(p1, p2, psi)
    return r.consistent, {"direct": str(r.direct), "predicted": str(r.predicted)}


def product_inverse(rng):
    p = _path(rng, _n(rng, 3))
    return cz_inverse_defect(p) == 0, {}


def product_shift(rng):
    n = _n(rng, 3)
    p = _path(rng, n)
    r = shifted_cz(random_symplectic(_seed(rng), n), p, seed=_seed(rng))
    return r.consistent, {"left": str(r.left), "right": str(r.right), "predicted": str(r.predicted)}


def product_trivial_loop(rng):
    n = _n(rng, 3)
    p1 = _path(rng, n)
    from scipy.linalg import expm
    from .sympl import hamiltonian_matrix, random_symmetric
    X = hamiltonian_matrix(random_symmetric(rng, 2 * n, 0.5))

    def loop(t: float) -> np.ndarray:
        return expm(np.sin(np.pi * t) * X)

    p2 = SymplecticPath.from_function(loop, np.linspace(0.0, 1.0, 17))
    a = cz_index(pointwise_product(p1, p2))
    b = cz_index(p1)
    return a == b, {"product": str(a), "path": str(b)}


def product_quarter_vector(rng):
    q = SymplecticPath.from_function(rotation, np.linspace(0.0, np.pi / 2, 41))
    out = {}
    ok = True
    for conv in (PAPER, STANDARD):
        single = cz_index(q, conv)
        r = product_cz(q, q, conv)
        nd = product_cz_nondegenerate(q, q, conv)
        ps = product_cz_psi(q, q, -np.eye(2), conv)
        ok = ok and single == (-1 if conv is PAPER else 1)
        ok = ok and r.consistent and nd.consistent and ps.consistent and r.direct == single
        out[conv.value] = {"single": str(single), "product": str(r.direct),
                           "first_formula": str(r.decomposition), "cayley": str(nd.predicted),
                           "psi": str(ps.predicted), "displayed_bracket_twice": ps.displayed_bracket.twice}
    return ok, out


# -- iterate ---------------------------------------------------------------------

def iterate_random(rng):
    n = _n(rng, 2)
    N = int(rng.integers(2, 9))
    p = random_symplectic_path(_seed(rng), n, samples=17, steps=int(rng.integers(1, 3)))
    rows = iterate_cz(p, N)
    ok = all(r.within_full_bound for r in rows)
    return ok, {"indices": [str(r.index) for r in rows], "N": N}


def iterate_catalog(rng):
    out = {}
    ok = True
    for system in catalog():
        rep = iterate_index_report(system, 8, STANDARD)
        ok = ok and rep.extension_matches_power and rep.full_bound_holds
        out[system.name] = {"indices": [str(r.index) for r in rep.rows],
                            "half_bound_violations": rep.half_bound_violations}
    return ok, out


def iterate_harmonic_table(rng):
    rep = iterate_index_report(harmonic(), 8, STANDARD)
    mags = [abs(r.index) for r in rep.rows]
    ok = [int(m) for m in mags] == [1, 1, 1, 2, 3, 3, 3, 4]
    return ok, {"magnitudes": [str(m) for m in mags],
                "half_bound_violations": rep.half_bound_violations}


# -- metaplectic -----------------------------------------------------------------

def meta_determinant(rng):
    W = random_generating_function(rng, _n(rng, 3))
    d = determinant_identity_defect(W)
    return d <= 1e-8, {"defect": d}


def meta_round_trip(rng):
    W = random_generating_function(rng, _n(rng, 3))
    back = matrix_to_w(free_matrix(W))
    return back.allclose(W, 1e-10), {}


def meta_inert(rng):
    n = _n(rng, 3)
    space = SymplecticSpace.standard(n)
    L, Lp, Lpp = _lagrangians(rng, space, 3)
    case = int(rng.integers(4))
    if case == 1:
        Lp = L
    elif case == 2:
        Lpp = Lp
    elif case == 3:
        Lpp = L
    vals = [inert(L, Lp, Lpp, c) for c in (PAPER, STANDARD)]
    return True, {"values": vals, "case": case}


def meta_compose(rng):
    n = _n(rng, 3)
    e1, e2 = random_element(rng, n), random_element(rng, n)
    r = compose_report(e1, e2)
    return r.consistent, {"value": r.value.value, "def54": r.def54.value}


def meta_associativity(rng):
    n = _n(rng, 3)
    e1, e2, e3 = (random_element(rng, n) for _ in range(3))
    if not (is_free(e1.matrix @ e2.matrix, 1e-3) and is_free(e2.matrix @ e3.matrix, 1e-3)):
        return None, {}
    a = compose_report(compose(e1, e2), e3).value
    b = compose_report(e1, compose(e2, e3)).value
    return a == b, {"left": a.value, "right": b.value}


def meta_identity_class(rng):
    n = _n(rng, 3)
    e = random_element(rng, n)
    v = compose_report(e, e.inverse()).value
    return v == n, {"value": v.value}


def meta_nu_vs_cz(rng):
    n = _n(rng, 2)
    e = random_element(rng, n)
    conv = PAPER if rng.random() < 0.5 else STANDARD
    r = nu_vs_cz(e.W, e.m, conv=conv)
    return r.consistent, {"classes": [(c.label, str(c.cz), c.matches) for c in r.classes]}


def meta_nu_compose(rng):
    n = _n(rng, 2)
    conv = PAPER if rng.random() < 0.5 else STANDARD
    W1 = random_element(rng, n).W
    W2 = random_element(rng, n).W
    g1, g2 = polar_path(free_matrix(W1)), polar_path(free_matrix(W2))
    m1 = nu_vs_cz(W1, 0, conv=conv).classes[0].matched_m
    m2 = nu_vs_cz(W2, 0, conv=conv).classes[0].matched_m
    try:
        v = nu_compose(MetaplecticElement(W1, m1), MetaplecticElement(W2, m2), conv)
    except DegenerateEndpoint:
        return None, {}
    c = cz_index(pointwise_product(g1, g2), conv)
    if not c.is_integer():
        return None, {}
    return Mod4Value(-int(c)) == v, {"nu": v.value, "cz": str(c)}


def meta_factorization(rng):
    n = _n(rng, 3)
    Phi = random_symplectic(_seed(rng), n)
    W, Wp = factor_free_pair(Phi, _seed(rng))
    err = np.linalg.norm(free_matrix(W) @ free_matrix(Wp) - Phi) / max(1.0, np.linalg.norm(Phi))
    return err < 1e-8, {"error": err}


SUITES: dict[str, list[tuple[str, Check, bool]]] = {
    # (name, check, runs once rather than per trial)
    "forms": [
        ("congruence_invariance", forms_congruence, False),
        ("signature_negation", forms_negation, False),
        ("inverse_difference_identity", forms_inverse_difference, False),
        ("difference_signature_bound", forms_difference_bound, False),
    ],
    "lagr": [
        ("kashiwara_antisymmetry", lagr_antisymmetry, False),
        ("kashiwara_symplectic_invariance", lagr_invariance, False),
        ("kashiwara_cocycle", lagr_cocycle, False),
        ("kashiwara_projection_agreement", lagr_projection, False),
        ("chart_swap_defect", lagr_chart_swap, False),
        ("change_of_chart", lagr_change_of_chart, False),
        ("graph_chart_formula", lagr_graph_chart, False),
    ],
    "maslov": [
        ("chart_independence", maslov_chart_independence, False),
        ("concatenation_additivity", maslov_additivity, False),
        ("refinement_stability", maslov_refinement, False),
        ("symplectic_invariance", maslov_invariance, False),
        ("omega_sign_flip", maslov_sign_flip, False),
        ("rotation_fixture", maslov_rotation_fixture, True),
        ("hormander_path_independence", hormander_path_independence, False),
        ("hormander_kashiwara_route", hormander_kashiwara_route, False),
        ("hormander_closed_form_route", hormander_closed_form_route, False),
        ("hormander_three_signature_route", hormander_three_signature_route, False),
        ("calibration_vector", calibration_vector_check, True),
    ],
    "cayley": [
        ("symmetry_and_antisymmetry", cayley_symmetry, False),
        ("kernel_law", cayley_kernel_law, False),
        ("chart_consistency", cayley_chart_consistency, False),
        ("classical_relation", cayley_classical_relation, False),
    ],
    "product": [
        ("first_product_formula", product_first_formula, False),
        ("cayley_product_formula", product_nondegenerate, False),
        ("psi_product_formula", product_psi, False),
        ("inverse_path", product_inverse, False),
        ("constant_shift", product_shift, False),
        ("trivial_loop", product_trivial_loop, False),
        ("quarter_rotation_vector", product_quarter_vector, True),
    ],
    "iterate": [
        ("random_iteration_bound", iterate_random, False),
        ("catalog", iterate_catalog, True),
        ("harmonic_table", iterate_harmonic_table, True),
    ],
    "metaplectic": [
        ("determinant_identity", meta_determinant, False),
        ("generating_function_round_trip", meta_round_trip, False),
        ("inert_integrality", meta_inert, False),
        ("compose_matches_factorization_formula", meta_compose, False),
        ("composition_associativity", meta_associativity, False),
        ("inverse_gives_identity_class", meta_identity_class, False),
        ("nu_vs_cz", meta_nu_vs_cz, False),
        ("nu_composition", meta_nu_compose, False),
        ("free_factorization", meta_factorization, False),
    ],
}

SUITE_NAMES = tuple(SUITES) + ("all",)


def trial_generator(seed: int, suite: str, check: str, trial: int) -> np.random.Generator:
    key = zlib.crc32(f"{suite}/{check}".encode())
    return np.random.default_rng([int(seed), key, int(trial)])


def _run_trial(args) -> tuple:
    suite, check_index, seed, trial = args
    name, fn, _ = SUITES[suite][check_index]
    rng = trial_generator(seed, suite, name, trial)
    try:
        ok, detail = fn(rng)
        ok = None if ok is None else bool(ok)
    except Exception as exc:  # a raised invariant error is a failed trial
        ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    return trial, ok, detail


def run_check(suite: str, check_index: int, seed: int, trials: int,
              pool: ProcessPoolExecutor | None = None, max_examples: int = 3) -> CheckResult:
    name, _, once = SUITES[suite][check_index]
    count = 1 if once else trials
    jobs = [(suite, check_index, seed, t) for t in range(count)]
    results = list(pool.map(_run_trial, jobs, chunksize=max(1, count // 16))) if pool \
        else [_run_trial(j) for j in jobs]
    results.sort(key=lambda r: r[0])
    passed = sum(1 for _, ok, _ in results if ok is True)
    skipped = sum(1 for _, ok, _ in results if ok is None)
    examples = tuple({"trial": t, **_jsonable(d)} for t, ok, d in results if ok is False)[:max_examples]
    if once and results[0][1] is True:
        examples = ({"trial": 0, **_jsonable(results[0][2])},)
    return CheckResult(suite, name, count, passed, skipped, examples)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (IndexValue, Mod4Value)):
        return str(x)
    return x


def run_suite(suite: str, seed: int = 0, trials: int = 50, workers: int = 1) -> list[CheckResult]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    names = list(SUITES) if suite == "all" else [suite]
    if any(s not in SUITES for s in names):
        raise ValueError(f"unknown suite {suite!r}")
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        return [run_check(s, i, seed, trials, pool)
                for s in names for i in range(len(SUITES[s]))]
    finally:
        if pool is not None:
            pool.shutdown()
