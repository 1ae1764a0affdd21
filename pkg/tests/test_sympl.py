import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from symplindex.errors import NotSymplectic
from symplindex.lagr import same_subspace, LagrangianFrame
from symplindex.sympl import (SymplecticPath, SymplecticSpace, check_symplectic, concatenate,
                              graph_lagrangian, hamiltonian_matrix, inverse, is_symplectic, product,
                              random_symplectic, random_symplectic_path, rotation, standard_j,
                              swap_map)

seeds = st.integers(0, 2**31 - 1)
ns = st.integers(1, 3)


def test_standard_j_block_form():
    J = standard_j(2)
    assert np.array_equal(J, [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]])
    assert np.array_equal(J @ J, -np.eye(4))


def test_rotation_is_exponential_of_j():
    assert np.allclose(rotation(0.3), expm(0.3 * standard_j(1)))


def test_non_symplectic_is_rejected():
    ok, defect = is_symplectic(np.diag([2.0, 2.0]))
    assert not ok and defect > 1
    with pytest.raises(NotSymplectic):
        check_symplectic(np.diag([2.0, 2.0]))


@given(seeds, ns)
def test_random_symplectic_and_inverse(seed, n):
    M = random_symplectic(seed, n)
    assert is_symplectic(M)[0]
    assert np.allclose(inverse(M) @ M, np.eye(2 * n))


@given(seeds, ns)
def test_hamiltonian_flow_is_symplectic(seed, n):
    rng = np.random.default_rng(seed)
    S = rng.normal(size=(2 * n, 2 * n))
    assert is_symplectic(expm(hamiltonian_matrix(S + S.T)))[0]


def test_doubled_space_and_swap():
    space = SymplecticSpace.standard(1)
    d = space.doubled()
    A = swap_map(space)
    assert np.allclose(A @ A, np.eye(4))
    assert np.allclose(A.T @ d.gram @ A, -d.gram)
    S = rotation(0.4)
    assert same_subspace(graph_lagrangian(S).transformed(A), graph_lagrangian(inverse(S)))


def test_graph_is_lagrangian_in_doubled_space():
    G = graph_lagrangian(random_symplectic(3, 2))
    assert isinstance(G, LagrangianFrame) and G.space.n == 4


def test_path_operations():
    p = SymplecticPath.from_function(rotation, np.linspace(0.0, 1.0, 11))
    assert np.allclose(p.at(0.55), rotation(0.55))
    assert np.allclose(p.power(3).end, rotation(3.0))
    assert np.allclose(p.inverse().end, rotation(-1.0))
    a, b = p.split(5)
    assert np.allclose(concatenate([a, b]).matrices, p.matrices)
    assert np.allclose(product(p, p).end, rotation(2.0))
    assert len(p.refined(2)) == 21
    assert p.densified(0.01).max_step() <= 0.01 + 1e-12


def test_path_rejects_bad_time_grid():
    with pytest.raises(ValueError):
        SymplecticPath(np.array([0.0, 0.0]), np.stack([np.eye(2)] * 2))


@given(seeds, ns)
def test_random_path_starts_at_identity(seed, n):
    p = random_symplectic_path(seed, n, samples=9)
    assert np.allclose(p.start, np.eye(2 * n))
    assert all(is_symplectic(M)[0] for M in p.matrices)
