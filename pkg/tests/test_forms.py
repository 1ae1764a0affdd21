import numpy as np
import pytest
from hypothesis import given, strategies as st

from symplindex.errors import NonFiniteEntry
from symplindex.forms import (PAPER, STANDARD, InertiaTriple, SignConvention, SymmetricForm,
                              ToleranceContext, inertia, inverse_difference_identity_defect,
                              is_nondegenerate, signature)

seeds = st.integers(0, 2**31 - 1)
dims = st.integers(1, 6)


def gapped(rng, dim, zeros=0):
    lam = rng.uniform(0.3, 3.0, dim) * rng.choice([-1.0, 1.0], dim)
    lam[:zeros] = 0.0
    Q, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    return Q @ np.diag(lam) @ Q.T, lam


def test_inertia_of_diagonal_form():
    t = inertia(np.diag([2.0, -1.0, 0.0, 3.0]))
    assert t == InertiaTriple(1, 1, 2)
    assert t.dim == 4


def test_signature_conventions_disagree_in_sign():
    A = np.diag([1.0, 1.0, -1.0])
    assert signature(A, PAPER) == -1
    assert signature(A, STANDARD) == 1


def test_convention_parse():
    assert SignConvention.parse("standard") is STANDARD
    assert SignConvention.parse(PAPER) is PAPER
    with pytest.raises(ValueError):
        SignConvention.parse("other")


def test_tiny_eigenvalues_count_as_zero():
    A = np.diag([1.0, 1e-18])
    assert inertia(A).n_zero == 1
    assert not is_nondegenerate(A)


def test_threshold_is_configurable():
    A = np.diag([1.0, 1e-6])
    assert inertia(A).n_zero == 0
    assert inertia(A, ToleranceContext(rank_relative=1e-4)).n_zero == 1


def test_symmetric_form_rejects_asymmetry_and_nan():
    with pytest.raises(ValueError):
        SymmetricForm([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(NonFiniteEntry):
        inertia(np.array([[np.nan]]))


@given(seeds, dims)
def test_inertia_matches_constructed_spectrum(seed, dim):
    rng = np.random.default_rng(seed)
    zeros = int(rng.integers(0, dim + 1))
    A, lam = gapped(rng, dim, zeros)
    t = inertia(A)
    assert (t.n_minus, t.n_zero, t.n_plus) == (int(np.sum(lam < 0)), zeros, int(np.sum(lam > 0)))


@given(seeds, dims)
def test_congruence_invariance(seed, dim):
    rng = np.random.default_rng(seed)
    A, _ = gapped(rng, dim, int(rng.integers(0, dim)))
    G = rng.normal(size=(dim, dim))
    G = np.eye(dim) + 0.4 * G / np.linalg.norm(G, 2)
    assert inertia(G.T @ A @ G) == inertia(A)


@given(seeds, dims)
def test_negation_flips_signature(seed, dim):
    A, _ = gapped(np.random.default_rng(seed), dim)
    for conv in (PAPER, STANDARD):
        assert signature(-A, conv) == -signature(A, conv)


@given(seeds, dims)
def test_inverse_difference_identity(seed, dim):
    rng = np.random.default_rng(seed)
    U, _ = gapped(rng, dim)
    Z, _ = gapped(rng, dim)
    if np.abs(np.linalg.eigvalsh(U - Z)).min() < 1e-3:
        return
    for conv in (PAPER, STANDARD):
        assert inverse_difference_identity_defect(U, Z, conv) == 0


@given(seeds, dims)
def test_product_formula_bracket_bound(seed, dim):
    rng = np.random.default_rng(seed)
    B1, _ = gapped(rng, dim)
    B2, _ = gapped(rng, dim)
    if np.abs(np.linalg.eigvalsh(B2 - B1)).min() < 1e-3:
        return
    assert abs(signature(B2 - B1) - signature(B2) + signature(B1)) <= dim


def test_all_minus_combination_exceeds_dimension():
    # sign(B2 - B1) - sign(B2) - sign(B1) is not bounded by n: n = 1 gives 3
    B1, B2 = np.array([[0.95]]), np.array([[0.31]])
    assert abs(signature(B2 - B1) - signature(B2) - signature(B1)) == 3
