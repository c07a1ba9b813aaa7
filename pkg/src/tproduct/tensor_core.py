"""Dense third-order tensors and the t-product algebra.

A :class:`Tensor3` of shape ``(m, p, n)`` holds ``n`` frontal slices, each an
``m x p`` complex matrix.  Slices are 0-based here: ``t.slice(0)`` is the
first frontal slice.
"""

from dataclasses import dataclass

import numpy as np

from . import _dft
from .errors import DimensionMismatchError, NotSquareError, SingularTensorError

__all__ = [
    "Tensor3", "BlockCirculant", "bcirc", "unfold", "fold", "tprod",
    "conj_transpose", "transpose", "identity_tensor", "t_inverse",
    "tensor_norm", "is_hermitian", "is_normal", "is_f_diagonal",
    "default_tolerance", "is_real", "keep_real",
]


class Tensor3:
    """Immutable dense complex ``m x p x n`` tensor.

    ``data[i, j, k]`` is entry ``(i, j)`` of frontal slice ``k``.  The flat
    (file) order is slice-major and column-major within a slice, i.e. entry
    ``(i, j, k)`` sits at ``k*m*p + j*m + i`` (see :meth:`flat`).
    """

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.complex128, copy=True)
        if arr.ndim != 3:
            raise DimensionMismatchError(
                "a third-order tensor needs a 3-d array, got shape %s" % (arr.shape,))
        if min(arr.shape) < 1:
            raise DimensionMismatchError("all dimensions must be >= 1, got %s" % (arr.shape,))
        arr.setflags(write=False)
        self._data = arr

    @classmethod
    def from_slices(cls, slices):
        """Build a tensor from a sequence of equally shaped frontal slices."""
        mats = [np.atleast_2d(np.asarray(s, dtype=np.complex128)) for s in slices]
        if not mats:
            raise DimensionMismatchError("need at least one frontal slice")
        shapes = {s.shape for s in mats}
        if len(shapes) != 1:
            raise DimensionMismatchError("frontal slices differ in shape: %s" % sorted(shapes))
        return cls(np.stack(mats, axis=2))

    @classmethod
    def from_flat(cls, values, m, p, n):
        values = np.asarray(values, dtype=np.complex128)
        if values.size != m * p * n:
            raise DimensionMismatchError(
                "expected %d entries for %dx%dx%d, got %d" % (m * p * n, m, p, n, values.size))
        return cls(values.reshape((m, p, n), order="F"))

    @classmethod
    def zeros(cls, m, p, n):
        return cls(np.zeros((m, p, n), dtype=np.complex128))

    @property
    def data(self):
        return self._data

    @property
    def shape(self):
        return self._data.shape

    @property
    def m(self):
        return self._data.shape[0]

    @property
    def p(self):
        return self._data.shape[1]

    @property
    def n(self):
        return self._data.shape[2]

    @property
    def is_square(self):
        return self.m == self.p

    def slice(self, k):
        return self._data[:, :, k]

    def slices(self):
        return [self._data[:, :, k] for k in range(self.n)]

    def flat(self):
        return self._data.ravel(order="F")

    @property
    def H(self):
        return conj_transpose(self)

    @property
    def T(self):
        return transpose(self)

    def norm(self, p="fro"):
        return tensor_norm(self, p)

    def fro(self):
        """Frobenius norm of the entries (not of ``bcirc``)."""
        return float(np.linalg.norm(self._data.ravel()))

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionMismatchError("shapes %s and %s differ" % (self.shape, other.shape))

    def __add__(self, other):
        if not isinstance(other, Tensor3):
            return NotImplemented
        self._check_same_shape(other)
        return Tensor3(self._data + other._data)

    def __sub__(self, other):
        if not isinstance(other, Tensor3):
            return NotImplemented
        self._check_same_shape(other)
        return Tensor3(self._data - other._data)

    def __neg__(self):
        return Tensor3(-self._data)

    def __mul__(self, scalar):
        if isinstance(scalar, Tensor3):
            return NotImplemented
        return Tensor3(self._data * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Tensor3(self._data / complex(scalar))

    def __matmul__(self, other):
        if not isinstance(other, Tensor3):
            return NotImplemented
        return tprod(self, other)

    def __repr__(self):
        return "Tensor3(shape=%s)" % (self.shape,)


@dataclass(frozen=True)
class BlockCirculant:
    """``bcirc`` of ``base``: block ``(r, c)`` is slice ``(r - c) mod n``."""

    base: Tensor3
    matrix: np.ndarray

    def block(self, r, c):
        m, p = self.base.m, self.base.p
        return self.matrix[r * m:(r + 1) * m, c * p:(c + 1) * p]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def bcirc(t):
    m, p, n = t.shape
    r, c = np.indices((n, n))
    blocks = t.data[:, :, (r - c) % n]          # (m, p, r, c)
    mat = blocks.transpose(2, 0, 3, 1).reshape(m * n, p * n)
    mat.setflags(write=False)
    return BlockCirculant(t, mat)


def unfold(t):
    """Stack the frontal slices vertically into an ``(m*n) x p`` matrix."""
    m, p, n = t.shape
    return t.data.transpose(2, 0, 1).reshape(m * n, p)


def fold(s, n):
    """Inverse of :func:`unfold` for a stack of ``n`` slices."""
    s = np.asarray(s)
    if s.ndim == 1:
        s = s[:, None]
    if s.ndim != 2 or n < 1 or s.shape[0] % n:
        raise DimensionMismatchError(
            "cannot fold a %s stack into %s slices" % (s.shape, n))
    m = s.shape[0] // n
    return Tensor3(s.reshape(n, m, s.shape[1]).transpose(1, 2, 0))


def tprod(a, b):
    """t-product ``a * b``; computed face-wise in the Fourier domain."""
    if a.p != b.m or a.n != b.n:
        raise DimensionMismatchError(
            "cannot t-multiply %s by %s" % (a.shape, b.shape))
    fa = _dft.forward(a.data)
    fb = _dft.forward(b.data)
    return Tensor3(keep_real(_dft.inverse(fa @ fb), a, b))


def is_real(t):
    return not t.data.imag.any()


def keep_real(out, *inputs):
    """Drop the roundoff imaginary part when every input tensor is real.

    A real tensor has a real ``bcirc``, so products, inverses and
    exponentials of real tensors are real; the DFT round trip only adds
    noise at the level of machine precision.
    """
    if all(is_real(t) for t in inputs):
        return out.real
    return out


def _reverse_tail(arr):
    idx = (-np.arange(arr.shape[2])) % arr.shape[2]
    return arr[:, :, idx]


def conj_transpose(t):
    return Tensor3(_reverse_tail(t.data.conj().transpose(1, 0, 2)))


def transpose(t):
    return Tensor3(_reverse_tail(t.data.transpose(1, 0, 2)))


def identity_tensor(m, n):
    if m < 1 or n < 1:
        raise DimensionMismatchError("identity tensor needs m, n >= 1")
    data = np.zeros((m, m, n), dtype=np.complex128)
    data[:, :, 0] = np.eye(m)
    return Tensor3(data)


def _require_square(t, what="operation"):
    if t.m != t.p:
        raise NotSquareError("%s needs square frontal slices, got %s" % (what, t.shape))


def t_inverse(t):
    """Inverse tensor, computed face by face.

    :raises SingularTensorError: if some transformed face is numerically
        singular; the error names the face with the smallest singular value.
    """
    _require_square(t, "t_inverse")
    faces = _dft.forward(t.data)
    sv = np.linalg.svd(faces, compute_uv=False)     # (n, m)
    smin = sv[:, -1]
    worst = int(np.argmin(smin))
    cutoff = max(t.m, 1) * np.finfo(float).eps * max(float(sv.max()), np.finfo(float).tiny)
    if smin[worst] <= cutoff:
        raise SingularTensorError(
            "tensor is singular: face %d has sigma_min = %.3e" % (worst, smin[worst]),
            face_index=worst, sigma_min=float(smin[worst]))
    return Tensor3(keep_real(_dft.inverse(np.linalg.inv(faces)), t))


def _norm_key(p):
    if isinstance(p, str):
        key = p.strip().lower()
        if key in ("f", "fro", "frobenius"):
            return "fro"
        if key in ("inf", "infinity", "max"):
            return np.inf
        if key in ("1", "2"):
            return int(key)
        raise ValueError("unknown norm selector %r" % (p,))
    if p in (1, 2):
        return int(p)
    if p == np.inf:
        return np.inf
    raise ValueError("unknown norm selector %r" % (p,))


def tensor_norm(t, p=2):
    """``||bcirc(t)||_p`` for ``p`` in ``{1, 2, inf, 'fro'}``.

    The 2-norm is the largest singular value over the transformed faces; the
    1- and inf-norms are taken on the materialized block circulant matrix.
    """
    key = _norm_key(p)
    if key == 2:
        faces = _dft.forward(t.data)
        return float(np.linalg.svd(faces, compute_uv=False).max())
    if key == "fro":
        # every slice appears n times in bcirc
        return float(np.sqrt(t.n) * np.linalg.norm(t.data.ravel()))
    return float(np.linalg.norm(bcirc(t).matrix, key))


def default_tolerance(t, tol=None):
    if tol is not None:
        return tol
    return 1e-10 * max(1.0, t.fro())


def is_hermitian(t, tol=None):
    _require_square(t, "is_hermitian")
    return (t - conj_transpose(t)).fro() <= default_tolerance(t, tol)


def normality_residual(t):
    """``||t * t^H - t^H * t||_F`` (entrywise Frobenius norm)."""
    th = conj_transpose(t)
    return (tprod(t, th) - tprod(th, t)).fro()


def is_normal(t, tol=None):
    _require_square(t, "is_normal")
    if tol is None:
        tol = 1e-10 * max(1.0, t.fro() ** 2)
    return normality_residual(t) <= tol


def is_f_diagonal(t, tol=None):
    off = t.data.copy()
    k = min(t.m, t.p)
    off[np.arange(k), np.arange(k), :] = 0
    return float(np.linalg.norm(off.ravel())) <= default_tolerance(t, tol)
