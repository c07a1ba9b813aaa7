"""Block diagonalization of ``bcirc`` by the DFT along the third mode.

With ``F`` the unitary ``n x n`` DFT matrix,
``(F kron I_m) bcirc(A) (F kron I_p)^H = blockdiag(faces)`` where face ``j``
is ``sum_k A_k w**(j*k)``, ``w = exp(-2j*pi/n)``.  Every face-wise algorithm
in the package (inverse, eigenvalues, Schur, exponential, pseudospectra) goes
through :func:`to_faces` / :func:`from_faces`.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from . import _dft
from .errors import DimensionMismatchError, FaceError
from .tensor_core import Tensor3

__all__ = ["FaceSet", "to_faces", "from_faces", "face_map", "dft_kron", "blockdiag"]


@dataclass(frozen=True)
class FaceSet:
    """The ``n`` transformed faces of an ``m x p x n`` tensor.

    ``faces`` has shape ``(n, m, p)``; ``faces[i]`` is face ``i`` (0-based,
    DFT order).
    """

    faces: np.ndarray

    def __post_init__(self):
        arr = np.array(self.faces, dtype=np.complex128, copy=True)
        if arr.ndim != 3 or min(arr.shape) < 1:
            raise DimensionMismatchError("faces must have shape (n, m, p), got %s" % (arr.shape,))
        arr.setflags(write=False)
        object.__setattr__(self, "faces", arr)

    @property
    def n(self):
        return self.faces.shape[0]

    @property
    def m(self):
        return self.faces.shape[1]

    @property
    def p(self):
        return self.faces.shape[2]

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        return self.faces[i]

    def __iter__(self):
        return iter(self.faces)


def to_faces(t):
    return FaceSet(_dft.forward(t.data))


def from_faces(f):
    if not isinstance(f, FaceSet):
        f = FaceSet(f)
    return Tensor3(_dft.inverse(f.faces))


def face_map(f, op):
    """Apply ``op`` to every face independently, preserving face order.

    Failures are re-raised as :class:`FaceError` naming the face.
    """
    out = []
    for i, face in enumerate(f.faces):
        try:
            res = np.asarray(op(face), dtype=np.complex128)
        except Exception as exc:
            raise FaceError("face %d: %s" % (i, exc), face_index=i) from exc
        out.append(res)
    shapes = {r.shape for r in out}
    if len(shapes) != 1 or len(next(iter(shapes))) != 2:
        raise DimensionMismatchError("per-face results have inconsistent shapes: %s" % sorted(shapes))
    return FaceSet(np.stack(out))


def dft_kron(n, m):
    """``F_n kron I_m`` with the unitary DFT matrix ``F_n``."""
    return np.kron(_dft.dft_matrix(n, unitary=True), np.eye(m))


def blockdiag(f):
    """Dense ``blockdiag(faces)``."""
    return block_diag(*f.faces)
