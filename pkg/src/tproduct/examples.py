"""The Toeplitz-based example tensors A0-A3 and random test instances."""

import numpy as np

from .errors import UnknownExampleError
from .tensor_core import Tensor3, t_inverse, tensor_norm, tprod
from .transform import from_faces

__all__ = [
    "toeplitz_pz", "gen_example", "EXAMPLES",
    "random_tensor", "random_hermitian", "random_unitary", "random_normal",
    "random_f_diagonalizable", "random_jordan_type", "scaled_to_norm",
]


def toeplitz_pz(N):
    """``N x N`` tridiagonal Toeplitz: zero diagonal, 1 above, 1/4 below."""
    if N < 2:
        raise ValueError("N must be >= 2, got %d" % N)
    return np.diag(np.ones(N - 1), 1) + 0.25 * np.diag(np.ones(N - 1), -1)


def _a0(T, N):
    return (T, T, T)


def _a1(T, N):
    return (T, 2 * T, 2 * T)


def _a2(T, N):
    return (T / 4, T / 2, T)


def _a3(T, N):
    return (T, 10 * T, np.eye(N))


EXAMPLES = {"A0": _a0, "A1": _a1, "A2": _a2, "A3": _a3}


def gen_example(name, N=20):
    """Three-slice example tensor built from :func:`toeplitz_pz`.

    * ``A0``: slices ``(T, T, T)``
    * ``A1``: ``(T, 2T, 2T)``
    * ``A2``: ``(T/4, T/2, T)``
    * ``A3``: ``(T, 10T, I)``
    """
    try:
        build = EXAMPLES[name.upper()]
    except KeyError:
        raise UnknownExampleError(
            "unknown example %r (choose from %s)" % (name, ", ".join(EXAMPLES))) from None
    T = toeplitz_pz(N)
    return Tensor3.from_slices(build(T, N))


# -- random instances ---------------------------------------------------------

def _cnormal(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_tensor(rng, m, p, n, real=False):
    if real:
        return Tensor3(rng.standard_normal((m, p, n)))
    return Tensor3(_cnormal(rng, (m, p, n)))


def random_hermitian(rng, m, n):
    s = random_tensor(rng, m, m, n)
    return s + s.H


def _unitary_faces(rng, m, n):
    qs = []
    for _ in range(n):
        q, r = np.linalg.qr(_cnormal(rng, (m, m)))
        qs.append(q * (np.diag(r) / np.abs(np.diag(r))))
    return np.stack(qs)


def random_unitary(rng, m, n):
    return from_faces(_unitary_faces(rng, m, n))


def random_normal(rng, m, n):
    """``(U, A, eigenvalue faces)`` with ``A = U * D * U^H`` normal."""
    us = _unitary_faces(rng, m, n)
    lam = _cnormal(rng, (n, m))
    faces = us @ (lam[:, :, None] * us.conj().transpose(0, 2, 1))
    return from_faces(us), from_faces(faces), lam


def random_f_diagonalizable(rng, m, n, spread=0.5):
    """``(A, P, D)`` with ``A = P * D * P^{-1}``.

    ``P`` is the identity plus a random perturbation of 2-norm ``spread``
    per face, so ``kappa_2(P) <= (1 + spread) / (1 - spread)``.
    """
    faces = []
    for _ in range(n):
        g = _cnormal(rng, (m, m))
        faces.append(np.eye(m) + spread * g / np.linalg.norm(g, 2))
    P = from_faces(np.stack(faces))
    diag = np.zeros((m, m, n), dtype=np.complex128)
    diag[np.arange(m), np.arange(m), :] = _cnormal(rng, (m, n))
    D = Tensor3(diag)
    A = tprod(tprod(P, D), t_inverse(P))
    return A, P, D


def random_jordan_type(rng, block_sizes, n, unitary_mix=True):
    """Tensor whose faces are block diagonal sums of Jordan blocks.

    Each face gets ``J(lam_1, k_1) + ... `` with random ``lam`` and the
    ``block_sizes`` given; optionally conjugated by a random unitary so the
    Schur form has to be computed.
    """
    m = sum(block_sizes)
    faces = []
    us = _unitary_faces(rng, m, n) if unitary_mix else None
    for i in range(n):
        face = np.zeros((m, m), dtype=np.complex128)
        start = 0
        for k in block_sizes:
            lam = complex(_cnormal(rng, ()))
            blk = lam * np.eye(k) + np.diag(np.ones(k - 1), 1)
            face[start:start + k, start:start + k] = blk
            start += k
        if unitary_mix:
            face = us[i] @ face @ us[i].conj().T
        faces.append(face)
    return from_faces(np.stack(faces))


def scaled_to_norm(t, target):
    """Rescale ``t`` so that ``||bcirc(t)||_2 == target``."""
    return t * (target / tensor_norm(t, 2))
