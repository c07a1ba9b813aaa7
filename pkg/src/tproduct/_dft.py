"""Mode-3 discrete Fourier transforms on raw ``(m, p, n)`` arrays.

Face ``j`` of an array ``A`` is ``sum_k A[:, :, k] * w**(j*k)`` with
``w = exp(-2j*pi/n)``.  Composite lengths go through :func:`numpy.fft.fft`;
prime lengths (and ``n == 1``) use an explicit DFT matrix.
"""

import functools

import numpy as np


def is_composite(n):
    if n < 4:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return True
        k += 1
    return False


@functools.lru_cache(maxsize=64)
def dft_matrix(n, unitary=False):
    """``n x n`` DFT matrix ``W[j, k] = w**(j*k)``; scaled by ``1/sqrt(n)`` if unitary."""
    k = np.arange(n)
    # reduce the exponent mod n so large products stay accurate
    w = np.exp(-2j * np.pi * ((np.outer(k, k) % n) / n))
    # cos and sin of multiples of pi/2 come out as ~1e-16 instead of 0
    w.real[np.abs(w.real) < 1e-15] = 0.0
    w.imag[np.abs(w.imag) < 1e-15] = 0.0
    if unitary:
        w = w / np.sqrt(n)
    w.setflags(write=False)
    return w


def forward_direct(arr):
    """Faces via the DFT matrix; returns shape ``(n, m, p)``."""
    w = dft_matrix(arr.shape[2])
    return np.einsum("jk,mpk->jmp", w, arr)


def inverse_direct(faces):
    """Inverse of :func:`forward_direct`; returns shape ``(m, p, n)``."""
    n = faces.shape[0]
    w = dft_matrix(n)
    return np.einsum("kj,jmp->mpk", w.conj(), faces) / n


def forward_fft(arr):
    return np.moveaxis(np.fft.fft(arr, axis=2), 2, 0)


def inverse_fft(faces):
    return np.fft.ifft(np.moveaxis(faces, 0, 2), axis=2)


def forward(arr):
    if is_composite(arr.shape[2]):
        return forward_fft(arr)
    return forward_direct(arr)


def inverse(faces):
    if is_composite(faces.shape[0]):
        return inverse_fft(faces)
    return inverse_direct(faces)
