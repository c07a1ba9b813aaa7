import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tproduct import Tensor3, identity_tensor, t_eigenvalues, tensor_norm
from tproduct.errors import NotFDiagonalizableError, NotHermitianError
from tproduct.examples import (random_f_diagonalizable, random_hermitian, random_jordan_type,
                               random_normal, scaled_to_norm)
from tproduct.perturbation import (bauer_fike_bound, condition_number, dft_condition,
                                   generalized_bf_bound, gershgorin_disks, kahan_regions,
                                   nilpotency_index)
from tproduct.transform import dft_kron, to_faces

from oracles import crandn, dense_bcirc, dense_eigs

seeds = st.integers(0, 2**32 - 1)


def rand(rng, m, n):
    return Tensor3(crandn(rng, m, m, n))


# -- Gershgorin -------------------------------------------------------------

def test_gershgorin_f_diagonal_raw():
    d = Tensor3(crandn(np.random.default_rng(0), 3, 3, 4) * np.eye(3)[:, :, None])
    disks = gershgorin_disks(d, "raw")
    assert np.abs(disks.radii).max() <= 1e-15
    lam = t_eigenvalues(d).eigenvalues
    assert len(disks) == 12
    assert np.abs(np.sort_complex(disks.centers) - np.sort_complex(lam)).max() <= 1e-14


def test_gershgorin_scalar_faces_are_points():
    a = Tensor3(crandn(np.random.default_rng(1), 1, 1, 5))
    for mode in ("raw", "schur"):
        disks = gershgorin_disks(a, mode)
        assert not disks.radii.any()
        assert np.allclose(disks.centers, to_faces(a).faces.ravel())


def test_gershgorin_random_3x3x3_dense_eigs():
    a = rand(np.random.default_rng(2), 3, 3)
    lam = dense_eigs(a.data)
    for mode in ("raw", "schur"):
        assert gershgorin_disks(a, mode).contains(lam, tol=1e-9).all()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), seeds)
def test_gershgorin_containment(m, n, seed):
    a = rand(np.random.default_rng(seed), m, n)
    lam = t_eigenvalues(a).eigenvalues
    for mode in ("raw", "schur"):
        assert gershgorin_disks(a, mode).contains(lam, tol=1e-9 * max(1, tensor_norm(a))).all()


def test_gershgorin_bad_mode():
    with pytest.raises(ValueError):
        gershgorin_disks(identity_tensor(2, 2), "other")


# -- Bauer-Fike ---------------------------------------------------------------

def test_bauer_fike_zero_delta():
    a, P, _ = random_f_diagonalizable(np.random.default_rng(3), 3, 2)
    rep = bauer_fike_bound(a, P, Tensor3.zeros(3, 3, 2))
    assert rep.bound == 0
    assert rep.observed <= 1e-12
    assert rep.holds


def test_bauer_fike_normal_unitary():
    rng = np.random.default_rng(4)
    U, a, _ = random_normal(rng, 3, 3)
    delta = scaled_to_norm(rand(rng, 3, 3), 1e-3)
    rep = bauer_fike_bound(a, U, delta)
    assert abs(rep.bound - tensor_norm(delta)) <= 1e-12
    assert rep.holds


def test_bauer_fike_random_3x3x2_100_trials():
    rng = np.random.default_rng(5)
    for _ in range(100):
        a, P, _ = random_f_diagonalizable(rng, 3, 2)
        delta = scaled_to_norm(rand(rng, 3, 2), 1e-4)
        rep = bauer_fike_bound(a, P, delta)
        assert rep.holds and rep.observed <= rep.bound + 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.integers(1, 4), seeds, st.sampled_from([1, 2, np.inf, "fro"]))
def test_bauer_fike_all_norms(m, n, seed, p):
    rng = np.random.default_rng(seed)
    a, P, _ = random_f_diagonalizable(rng, m, n)
    delta = scaled_to_norm(rand(rng, m, n), 1e-3)
    rep = bauer_fike_bound(a, P, delta, p)
    assert rep.holds
    # independent recomputation of the bound on dense matrices
    bp = dense_bcirc(P.data)
    key = "fro" if p == "fro" else p
    kappa = np.linalg.norm(bp, key) * np.linalg.norm(np.linalg.inv(bp), key)
    ref = kappa * np.linalg.norm(dense_bcirc(delta.data), key)
    if p in (1, np.inf):
        F = dft_kron(n, m)
        ref *= np.linalg.norm(F, p) * np.linalg.norm(F.conj().T, p)
    assert rep.bound == pytest.approx(ref, rel=1e-8)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 4), st.integers(1, 4), seeds, st.floats(0.01, 1.0))
def test_bauer_fike_linear_in_delta(m, n, seed, t):
    rng = np.random.default_rng(seed)
    a, P, _ = random_f_diagonalizable(rng, m, n)
    delta = scaled_to_norm(rand(rng, m, n), 1e-3)
    full = bauer_fike_bound(a, P, delta)
    part = bauer_fike_bound(a, P, delta * t)
    assert part.bound == pytest.approx(t * full.bound, rel=1e-12)


def test_bauer_fike_rejects_wrong_P():
    a = rand(np.random.default_rng(6), 3, 2)
    with pytest.raises(NotFDiagonalizableError) as info:
        bauer_fike_bound(a, identity_tensor(3, 2), Tensor3.zeros(3, 3, 2))
    assert info.value.residual > 0


def test_dft_condition_values():
    assert dft_condition(5, 3, 2) == 1.0
    for n in (1, 2, 3, 4):
        F = dft_kron(n, 2)
        ref = np.linalg.norm(F, 1) * np.linalg.norm(F.conj().T, 1)
        assert dft_condition(n, 2, 1) == pytest.approx(ref)
    # for n = 4 the unitary DFT has entries of modulus 1/2: column sums 2
    assert dft_condition(4, 1, 1) == pytest.approx(4.0)


def test_condition_number_unitary():
    U, _, _ = random_normal(np.random.default_rng(7), 3, 3)
    assert condition_number(U) == pytest.approx(1.0, abs=1e-12)


# -- generalized Bauer-Fike ----------------------------------------------------

def test_nilpotency_index():
    assert nilpotency_index(np.zeros((3, 3))) == 1
    assert nilpotency_index(np.eye(3, k=1)) == 3
    pat = np.zeros((4, 4))
    pat[0, 1] = pat[2, 3] = 1
    assert nilpotency_index(pat) == 2
    with pytest.raises(ValueError):
        nilpotency_index(np.ones((2, 2)))


def test_generalized_zero_delta():
    a = random_jordan_type(np.random.default_rng(8), [2, 1], 3)
    rep = generalized_bf_bound(a, Tensor3.zeros(3, 3, 3))
    assert rep.detail["theta"] == 0 and rep.bound == 0
    assert rep.holds


def test_generalized_normal_reduces_to_bauer_fike():
    rng = np.random.default_rng(9)
    _, a, _ = random_normal(rng, 3, 3)
    delta = scaled_to_norm(rand(rng, 3, 3), 1e-3)
    rep = generalized_bf_bound(a, delta)
    assert rep.detail["q"] == 1
    assert rep.detail["theta"] == pytest.approx(tensor_norm(delta), rel=1e-12)
    assert rep.bound == pytest.approx(rep.detail["theta"], rel=1e-15)
    assert rep.holds


def test_generalized_single_jordan_face():
    rng = np.random.default_rng(10)
    lam = 0.5 - 0.25j
    face = np.array([[lam, 1.0], [0.0, lam]])
    a = Tensor3.from_slices([face])
    ratios = []
    for _ in range(100):
        delta = scaled_to_norm(rand(rng, 2, 1), 1e-6)
        rep = generalized_bf_bound(a, delta)
        assert rep.detail["q"] == 2
        assert rep.holds
        ratios.append(rep.observed / np.sqrt(rep.detail["theta"]))
    # a defective eigenvalue moves like sqrt(|delta|): the bound is nearly attained
    assert max(ratios) > 0.1


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.integers(1, 3), seeds,
       st.floats(1e-8, 1e-2), st.sampled_from([1, 2, np.inf, "fro"]))
def test_generalized_bound_holds(blocks, n, seed, size, p):
    rng = np.random.default_rng(seed)
    a = random_jordan_type(rng, blocks, n)
    m = sum(blocks)
    delta = scaled_to_norm(rand(rng, m, n), size)
    rep = generalized_bf_bound(a, delta, p)
    assert rep.detail["q"] <= m
    assert rep.holds


# -- Kahan --------------------------------------------------------------------

def test_kahan_zero_perturbation():
    a = random_hermitian(np.random.default_rng(11), 3, 3)
    regions, rep = kahan_regions(a, Tensor3.zeros(3, 3, 3))
    assert all(r.radius == 0 and r.strip == 0 for r in regions)
    assert rep.holds and rep.detail["uncovered"] == 0
    centers = [r.center for r in regions]
    assert centers == sorted(centers, reverse=True)


def test_kahan_hermitian_perturbation():
    rng = np.random.default_rng(12)
    a = random_hermitian(rng, 3, 3)
    e = scaled_to_norm(random_hermitian(rng, 3, 3), 1e-3)
    regions, rep = kahan_regions(a, e)
    assert rep.detail["norm_E_y"] <= 1e-15
    assert rep.detail["max_abs_imag"] <= 1e-10
    assert rep.observed <= tensor_norm(e) + 1e-12
    assert rep.holds


def test_kahan_random_100_trials():
    rng = np.random.default_rng(13)
    for _ in range(100):
        a = random_hermitian(rng, 3, 3)
        e = scaled_to_norm(rand(rng, 3, 3), 1e-3)
        _, rep = kahan_regions(a, e)
        assert rep.holds
        assert rep.detail["max_abs_imag"] <= rep.detail["norm_E_y"] + 1e-9


def test_kahan_strip_matches_dense_definition():
    rng = np.random.default_rng(14)
    a = random_hermitian(rng, 2, 3)
    e = rand(rng, 2, 3)
    be = dense_bcirc(e.data)
    ey = (be - be.conj().T) / 2j
    regions, _ = kahan_regions(a, e)
    assert regions[0].strip == pytest.approx(np.linalg.norm(ey, 2), rel=1e-12)
    assert regions[0].radius == pytest.approx(np.linalg.norm(be, 2), rel=1e-12)


def test_kahan_needs_hermitian():
    with pytest.raises(NotHermitianError):
        kahan_regions(rand(np.random.default_rng(15), 2, 2), Tensor3.zeros(2, 2, 2))
