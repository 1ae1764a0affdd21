import numpy as np
import pytest
from hypothesis import given, strategies as st

from symplindex.cayley import (cayley, classical_relation_defect, in_sp_psi, kernel_law_defect,
                               psi_cayley, smallest_singular)
from symplindex.cz import find_admissible_psi
from symplindex.errors import AsymmetryError, EigenvalueOne, PhiNotInSpPsi, PsiNotInSp0
from symplindex.forms import inertia
from symplindex.lagr import chart_matrix, diagonal
from symplindex.sympl import (SymplecticSpace, graph_lagrangian, inverse, random_symplectic,
                              rotation)

seeds = st.integers(0, 2**31 - 1)


def with_margin(seed, n):
    Phi = random_symplectic(seed, n)
    I = np.eye(2 * n)
    return Phi if smallest_singular(I - Phi) >= 1e-3 else None


def test_rotation_family_closed_form():
    for theta in (0.3, 1.0, 2.5):
        assert np.allclose(cayley(rotation(theta)).matrix, -0.5 / np.tan(theta / 2) * np.eye(2))
        assert np.allclose(psi_cayley(-np.eye(2), rotation(theta)).matrix, 2 * np.tan(theta / 2) * np.eye(2))


def test_errors():
    with pytest.raises(EigenvalueOne):
        cayley(np.eye(2))
    with pytest.raises(PsiNotInSp0):
        psi_cayley(np.eye(2), rotation(1.0))
    with pytest.raises(PhiNotInSpPsi):
        psi_cayley(rotation(1.0), rotation(1.0))
    with pytest.raises(AsymmetryError):
        cayley(np.array([[2.0, 1.0], [0.0, 3.0]]))


def test_membership():
    ok, margin = in_sp_psi(rotation(0.5), -np.eye(2))
    assert ok and margin > 0.5
    assert not in_sp_psi(-np.eye(2), -np.eye(2))[0]


@given(seeds, st.integers(1, 4))
def test_symmetry_and_inverse_antisymmetry(seed, n):
    Phi = with_margin(seed, n)
    if Phi is None:
        return
    M = cayley(Phi)
    assert M.asymmetry <= 1e-8
    assert np.linalg.norm(cayley(inverse(Phi)).matrix + M.matrix, 2) <= 1e-8 * np.linalg.norm(M.matrix, 2)


@given(seeds, seeds, st.integers(1, 3), st.integers(0, 3))
def test_kernel_law_with_eigenvalue_one(seed, sseed, n, k):
    k = min(k, n)
    E = np.eye(2 * n)
    if n > k:
        idx = np.r_[np.arange(k, n), np.arange(n + k, 2 * n)]
        E[np.ix_(idx, idx)] = random_symplectic(seed, n - k)
    S = random_symplectic(sseed, n)
    Phi = inverse(S) @ E @ S
    psi = find_admissible_psi(np.eye(2 * n), 1, seed, margin=0.05, extra=[Phi])
    assert kernel_law_defect(psi, Phi) == 0


@given(seeds, seeds, st.integers(1, 3))
def test_psi_transform_is_the_doubled_chart(seed, pseed, n):
    Phi = random_symplectic(seed, n)
    psi = find_admissible_psi(np.eye(2 * n), 1, pseed, margin=0.05, extra=[Phi])
    C = psi_cayley(psi, Phi).matrix
    ch = chart_matrix(diagonal(SymplecticSpace.standard(n)), graph_lagrangian(psi), graph_lagrangian(Phi))
    assert np.allclose(C, 2 * ch, atol=1e-7 * max(1.0, np.linalg.norm(C)))


@given(seeds, st.integers(1, 3))
def test_classical_relation(seed, n):
    Phi = with_margin(seed, n)
    if Phi is None or smallest_singular(np.eye(2 * n) + Phi) < 1e-3:
        return
    assert classical_relation_defect(Phi) < 1e-7
    M = cayley(Phi).matrix
    C = psi_cayley(-np.eye(2 * n), Phi).matrix
    a, b = inertia(C), inertia(M)
    assert (a.n_plus, a.n_minus) == (b.n_minus, b.n_plus)
