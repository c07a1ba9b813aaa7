"""T-eigenvalues, generalized T-eigenvalues, T-Schur and F-diagonalization.

All of these reduce to independent problems on the transformed faces: the
T-spectrum of ``A`` is the union of the face spectra, which is also the
spectrum of ``bcirc(A)``.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from . import _dft
from .errors import DimensionMismatchError, NotNormalError, NotSquareError
from .tensor_core import Tensor3, conj_transpose, normality_residual
from .transform import FaceSet, from_faces

__all__ = [
    "TSpectrum", "TSchur", "Regularity",
    "t_eigenvalues", "generalized_t_eigenvalues", "t_schur",
    "f_diagonalize_normal", "spectral_variation", "match_spectra",
]

INFINITE_BETA_RTOL = 1e-12


@dataclass(frozen=True)
class TSpectrum:
    """T-eigenvalues of a tensor, grouped by face.

    ``eigenvalues[k]`` came from face ``face_index[k]``.  Within a face values
    are sorted by ``(real, imag)``; faces appear in DFT order.  For generalized
    problems ``alpha``/``beta`` hold the homogeneous pairs and ``infinite``
    flags pairs with negligible ``beta`` (their eigenvalue is ``inf``, or
    ``nan`` when ``alpha`` vanishes too).
    """

    eigenvalues: np.ndarray
    face_index: np.ndarray
    eigenvectors: list = None
    alpha: np.ndarray = None
    beta: np.ndarray = None
    infinite: np.ndarray = None

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def finite(self):
        if self.infinite is None:
            return self.eigenvalues
        return self.eigenvalues[~self.infinite]


@dataclass(frozen=True)
class Regularity:
    """Rank of ``bcirc(B)`` for a generalized problem."""

    rank: int
    size: int
    face_ranks: tuple = field(default=())

    @property
    def full_rank(self):
        return self.rank == self.size


@dataclass(frozen=True)
class TSchur:
    """``Q^H * A * Q = D + N`` with ``Q`` unitary.

    ``t_faces`` are the upper triangular Schur factors of the transformed
    faces; ``d_faces`` and ``n_faces`` split them into diagonal and strictly
    upper parts with exact zeros elsewhere.
    """

    Q: Tensor3
    D: Tensor3
    N: Tensor3
    t_faces: FaceSet
    d_faces: FaceSet
    n_faces: FaceSet

    @property
    def T(self):
        return self.D + self.N

    def diagonal(self):
        """Diagonal entries of all Schur faces, face by face."""
        return np.concatenate([np.diag(f) for f in self.t_faces.faces])


def _require_square(t, what):
    if t.m != t.p:
        raise NotSquareError("%s needs square frontal slices, got %s" % (what, t.shape))


def _sort_order(values):
    return np.lexsort((values.imag, values.real))


def _normalize_vector(x):
    """Unit 2-norm with the first non-negligible entry made real positive."""
    x = x / np.linalg.norm(x)
    mags = np.abs(x)
    k = int(np.argmax(mags > 1e-8 * mags.max()))
    return x * (np.conj(x[k]) / mags[k])


def _face_vector_to_tensor(vec, face, n):
    faces = np.zeros((n, vec.size, 1), dtype=np.complex128)
    faces[face, :, 0] = vec
    x = _dft.inverse(faces)
    flat = x.transpose(2, 0, 1).reshape(-1)          # unfold order
    flat = _normalize_vector(flat)
    return Tensor3(flat.reshape(n, vec.size, 1).transpose(1, 2, 0))


def t_eigenvalues(a, want_vectors=False):
    """All ``m*n`` T-eigenvalues of ``a`` (optionally with T-eigenvectors).

    A T-eigenvector for an eigenvalue of face ``i`` is the tensor whose only
    nonzero transformed face is face ``i``, holding the matrix eigenvector.
    Vectors are normalized so that ``unfold(X)`` has unit norm and its first
    significant entry is real positive.
    """
    _require_square(a, "t_eigenvalues")
    faces = _dft.forward(a.data)
    vals, idx, vecs = [], [], []
    for i, face in enumerate(faces):
        if want_vectors:
            w, v = np.linalg.eig(face)
        else:
            w = np.linalg.eigvals(face)
        order = _sort_order(w)
        vals.append(w[order])
        idx.append(np.full(len(w), i))
        if want_vectors:
            vecs.extend(_face_vector_to_tensor(v[:, k], i, a.n) for k in order)
    return TSpectrum(
        eigenvalues=np.concatenate(vals),
        face_index=np.concatenate(idx),
        eigenvectors=vecs if want_vectors else None,
    )


def _face_rank(face):
    sv = np.linalg.svd(face, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > max(face.shape) * np.finfo(float).eps * sv[0]))


def generalized_t_eigenvalues(a, b):
    """Generalized T-eigenvalues of ``a`` relative to ``b``.

    Each face pencil ``(A_i, B_i)`` is solved by QZ.  Returns
    ``(spectrum, regularity)``; pairs with ``|beta| <= 1e-12 (|alpha|+|beta|)``
    are reported as infinite rather than dropped.
    """
    _require_square(a, "generalized_t_eigenvalues")
    if a.shape != b.shape:
        raise DimensionMismatchError("pencil shapes differ: %s vs %s" % (a.shape, b.shape))
    fa = _dft.forward(a.data)
    fb = _dft.forward(b.data)
    vals, idx, alphas, betas, inf_mask, ranks = [], [], [], [], [], []
    for i in range(a.n):
        ab = scipy.linalg.eigvals(fa[i], fb[i], homogeneous_eigvals=True)
        al, be = ab[0], ab[1]
        infinite = np.abs(be) <= INFINITE_BETA_RTOL * (np.abs(al) + np.abs(be))
        with np.errstate(divide="ignore", invalid="ignore"):
            lam = np.where(infinite, np.inf + 0j, al / np.where(infinite, 1, be))
        lam[infinite & (np.abs(al) == 0)] = np.nan
        fin = lam[~infinite]
        order = np.concatenate([np.flatnonzero(~infinite)[_sort_order(fin)],
                                np.flatnonzero(infinite)])
        vals.append(lam[order])
        alphas.append(al[order])
        betas.append(be[order])
        inf_mask.append(infinite[order])
        idx.append(np.full(len(lam), i))
        ranks.append(_face_rank(fb[i]))
    spec = TSpectrum(
        eigenvalues=np.concatenate(vals),
        face_index=np.concatenate(idx),
        alpha=np.concatenate(alphas),
        beta=np.concatenate(betas),
        infinite=np.concatenate(inf_mask),
    )
    reg = Regularity(rank=int(sum(ranks)), size=a.m * a.n, face_ranks=tuple(ranks))
    return spec, reg


def t_schur(a):
    """T-Schur decomposition from the complex Schur form of every face."""
    _require_square(a, "t_schur")
    faces = _dft.forward(a.data)
    ts, zs = [], []
    for face in faces:
        t, z = scipy.linalg.schur(face, output="complex")
        ts.append(np.triu(t))
        zs.append(z)
    t_faces = np.stack(ts)
    d_faces = np.zeros_like(t_faces)
    ii = np.arange(a.m)
    d_faces[:, ii, ii] = t_faces[:, ii, ii]
    n_faces = t_faces - d_faces
    return TSchur(
        Q=from_faces(np.stack(zs)),
        D=Tensor3(_dft.inverse(d_faces)),
        N=Tensor3(_dft.inverse(n_faces)),
        t_faces=FaceSet(t_faces),
        d_faces=FaceSet(d_faces),
        n_faces=FaceSet(n_faces),
    )


def f_diagonalize_normal(a, tol=None):
    """Unitary ``U`` and F-diagonal ``D`` with ``U * a * U^H = D``.

    :raises NotNormalError: when ``||a a^H - a^H a||_F`` exceeds ``tol``
        (default ``1e-10 max(1, ||a||_F)^2``).
    """
    _require_square(a, "f_diagonalize_normal")
    resid = normality_residual(a)
    if tol is None:
        tol = 1e-10 * max(1.0, a.fro()) ** 2
    if resid > tol:
        raise NotNormalError("tensor is not normal (residual %.3e)" % resid, residual=resid)
    schur = t_schur(a)
    # the Schur factor of a normal face is diagonal; drop roundoff above it
    return conj_transpose(schur.Q), schur.D


def match_spectra(x, y, tol=None):
    """Pair ``x`` with ``y`` and return ``(perm, max_distance)``.

    ``y[perm[k]]`` is matched to ``x[k]``.  Greedy nearest-neighbour matching
    is tried first; if its worst distance exceeds ``tol`` (or ``tol`` is
    ``None``) a minimum-cost assignment is also computed and the better of
    the two is returned.
    """
    x = np.asarray(x, dtype=np.complex128).ravel()
    y = np.asarray(y, dtype=np.complex128).ravel()
    if x.size != y.size:
        raise DimensionMismatchError("cannot match %d values against %d" % (x.size, y.size))
    if x.size == 0:
        return np.zeros(0, dtype=int), 0.0
    dist = np.abs(x[:, None] - y[None, :])
    perm = np.empty(x.size, dtype=int)
    free = np.ones(y.size, dtype=bool)
    for k in np.argsort(dist.min(axis=1)):
        row = np.where(free, dist[k], np.inf)
        j = int(np.argmin(row))
        perm[k] = j
        free[j] = False
    worst = float(dist[np.arange(x.size), perm].max())
    if tol is not None and worst <= tol:
        return perm, worst
    rows, cols = linear_sum_assignment(dist)
    hung = np.empty(x.size, dtype=int)
    hung[rows] = cols
    hworst = float(dist[np.arange(x.size), hung].max())
    if hworst < worst:
        return hung, hworst
    return perm, worst


def _as_values(s):
    if isinstance(s, TSpectrum):
        return s.finite
    if isinstance(s, Tensor3):
        return t_eigenvalues(s).eigenvalues
    return np.asarray(s, dtype=np.complex128).ravel()


def spectral_variation(a, b):
    """``max_{mu in L(b)} min_{lam in L(a)} |lam - mu|``.

    Arguments may be tensors, :class:`TSpectrum` objects or plain arrays of
    eigenvalues.
    """
    if isinstance(a, Tensor3) and isinstance(b, Tensor3) and a.shape != b.shape:
        raise DimensionMismatchError("shapes %s and %s differ" % (a.shape, b.shape))
    la, lb = _as_values(a), _as_values(b)
    if lb.size == 0:
        return 0.0
    return float(np.abs(lb[:, None] - la[None, :]).min(axis=1).max())
