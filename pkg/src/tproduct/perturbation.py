"""Eigenvalue inclusion and perturbation bounds for the t-product.

Each bound comes with a verifier that eigensolves the perturbed tensor and
reports the observed deviation next to the bound (:class:`BoundReport`).
"""

import functools
from dataclasses import dataclass, field

import numpy as np

from . import _dft
from .errors import NotFDiagonalizableError, NotHermitianError, NotSquareError
from .spectral import spectral_variation, t_eigenvalues, t_schur
from .tensor_core import (_norm_key, conj_transpose, is_hermitian,
                          t_inverse, tensor_norm, tprod)
from .transform import dft_kron

__all__ = [
    "DiskSet", "BoundReport", "KahanRegion",
    "gershgorin_disks", "bauer_fike_bound", "generalized_bf_bound",
    "kahan_regions", "dft_condition", "condition_number", "nilpotency_index",
]

HOLDS_RTOL = 1e-9
# strictly-upper Schur entries below this (relative to ||A||_2) are roundoff
N_DROP_RTOL = 1e-12


@dataclass(frozen=True)
class DiskSet:
    """Gershgorin disks ``|z - centers[k]| <= radii[k]``."""

    centers: np.ndarray
    radii: np.ndarray
    mode: str
    face_index: np.ndarray = None

    def __len__(self):
        return len(self.centers)

    def contains(self, z, tol=0.0):
        z = np.asarray(z, dtype=np.complex128)
        d = np.abs(z[..., None] - self.centers) - self.radii
        return (d <= tol).any(axis=-1)


@dataclass(frozen=True)
class BoundReport:
    """``observed`` deviation against a theoretical ``bound``.

    ``holds`` is ``observed <= bound + 1e-9 * scale``; ``detail`` keeps the
    intermediate quantities the bound was built from.
    """

    bound: float
    observed: float
    holds: bool
    detail: dict = field(default_factory=dict)

    def as_dict(self):
        return {"bound": self.bound, "observed": self.observed,
                "holds": self.holds, **self.detail}


def _report(bound, observed, scale, **detail):
    holds = observed <= bound + HOLDS_RTOL * scale
    return BoundReport(float(bound), float(observed), bool(holds), detail)


def _require_square(t, what):
    if t.m != t.p:
        raise NotSquareError("%s needs square frontal slices, got %s" % (what, t.shape))


def gershgorin_disks(a, mode="raw"):
    """Gershgorin disks of the transformed faces.

    ``raw`` uses the faces as they are (centers are face diagonals, radii the
    off-diagonal absolute row sums).  ``schur`` first reduces each face to
    complex Schur form, so centers are the eigenvalues and radii come from the
    strictly upper part.
    """
    _require_square(a, "gershgorin_disks")
    if mode == "raw":
        faces = _dft.forward(a.data)
    elif mode == "schur":
        faces = t_schur(a).t_faces.faces
    else:
        raise ValueError("mode must be 'raw' or 'schur', got %r" % (mode,))
    ii = np.arange(a.m)
    centers = faces[:, ii, ii]
    radii = np.abs(faces).sum(axis=2) - np.abs(centers)
    return DiskSet(centers=centers.ravel(), radii=np.maximum(radii.ravel(), 0.0), mode=mode,
                   face_index=np.repeat(np.arange(a.n), a.m))


@functools.lru_cache(maxsize=32)
def dft_condition(n, m, p):
    """``kappa_p(F_n kron I_m)``; exactly 1 for the 2- and Frobenius-free cases."""
    key = _norm_key(p)
    if key == 2:
        return 1.0
    f = dft_kron(n, m)
    return float(np.linalg.norm(f, key) * np.linalg.norm(f.conj().T, key))


def condition_number(P, p=2):
    """``||bcirc(P)||_p ||bcirc(P^{-1})||_p``."""
    return tensor_norm(P, p) * tensor_norm(t_inverse(P), p)


def _uses_dft_factor(p):
    return _norm_key(p) in (1, np.inf)


def bauer_fike_bound(a, P, delta, p=2, tol=1e-8):
    """Bauer-Fike bound for an F-diagonalizable ``a = P * D * P^{-1}``.

    ``bound = kappa_p(P) ||delta||_p`` for ``p`` in ``{2, 'fro'}``; for
    ``p`` in ``{1, inf}`` it is additionally multiplied by
    ``kappa_p(F kron I)``.  ``observed`` is the largest distance from a
    T-eigenvalue of ``a + delta`` to the T-spectrum of ``a``.

    :raises NotFDiagonalizableError: if ``P^{-1} * a * P`` has off-diagonal
        face mass above ``tol * kappa_2(P) * max(1, ||a||_2)``.
    """
    _require_square(a, "bauer_fike_bound")
    pinv = t_inverse(P)
    faces = _dft.forward(tprod(tprod(pinv, a), P).data)
    ii = np.arange(a.m)
    off = faces.copy()
    off[:, ii, ii] = 0
    resid = float(np.linalg.norm(off.ravel()))
    scale = max(1.0, tensor_norm(a, 2))
    kappa2 = tensor_norm(P, 2) * tensor_norm(pinv, 2)
    if resid > tol * kappa2 * scale:
        raise NotFDiagonalizableError(
            "P^-1 * A * P is not F-diagonal (residual %.3e)" % resid, residual=resid)
    kappa = tensor_norm(P, p) * tensor_norm(pinv, p)
    norm_delta = tensor_norm(delta, p)
    bound = kappa * norm_delta
    kdft = 1.0
    if _uses_dft_factor(p):
        kdft = dft_condition(a.n, a.m, _norm_key(p))
        bound *= kdft
    observed = spectral_variation(t_eigenvalues(a), t_eigenvalues(a + delta))
    return _report(bound, observed, scale, kappa_P=kappa, kappa_dft=kdft,
                   norm_delta=norm_delta, residual=resid, p=str(_norm_key(p)))


def nilpotency_index(pattern):
    """Smallest ``q >= 1`` with ``pattern^q == 0`` for a nilpotent 0/1 matrix.

    Works on the boolean sparsity pattern, so entrywise absolute values
    never cancel.  Raises ``ValueError`` if the pattern is not nilpotent.
    """
    pat = np.asarray(pattern, dtype=bool)
    size = pat.shape[0]
    power = pat.copy()
    for q in range(1, size + 2):
        if not power.any():
            return q
        power = (power.astype(np.int64) @ pat.astype(np.int64)) > 0
    raise ValueError("pattern is not nilpotent")


def generalized_bf_bound(a, delta, p=2):
    """Bauer-Fike bound for arbitrary ``a`` via its T-Schur form.

    With ``N`` the block diagonal of strictly upper Schur faces and ``q`` the
    nilpotency index of ``|N|``,
    ``theta = ||bcirc(delta)||_p sum_{k<q} ||N||_p^k`` for ``p`` in
    ``{2, 'fro'}`` and ``bound = max(theta, theta**(1/q))``.  For ``p`` in
    ``{1, inf}`` the sum uses ``||N||_2`` and is scaled by
    ``kappa_p(Q) kappa_p(F kron I)``; ``detail['mixed_norm']`` marks that case.
    """
    _require_square(a, "generalized_bf_bound")
    schur = t_schur(a)
    scale = max(1.0, tensor_norm(a, 2))
    n_faces = schur.n_faces.faces.copy()
    n_faces[np.abs(n_faces) <= N_DROP_RTOL * scale] = 0
    q = max(nilpotency_index(f != 0) for f in n_faces)
    key = _norm_key(p)
    norm_delta = tensor_norm(delta, key)
    detail = {"q": q, "norm_delta": norm_delta, "p": str(key), "mixed_norm": False}
    if key == 2:
        norm_n = max(float(np.linalg.norm(f, 2)) for f in n_faces)
        factor = 1.0
    elif key == "fro":
        norm_n = float(np.linalg.norm(n_faces.ravel()))
        factor = 1.0
    else:
        norm_n = max(float(np.linalg.norm(f, 2)) for f in n_faces)
        kq = condition_number(schur.Q, key)
        kdft = dft_condition(a.n, a.m, key)
        factor = kq * kdft
        detail.update(mixed_norm=True, kappa_Q=kq, kappa_dft=kdft)
    theta = norm_delta * factor * sum(norm_n ** k for k in range(q))
    bound = max(theta, theta ** (1.0 / q))
    lam = schur.diagonal()
    observed = spectral_variation(lam, t_eigenvalues(a + delta))
    detail.update(theta=theta, norm_N=norm_n)
    return _report(bound, observed, scale, **detail)


@dataclass(frozen=True)
class KahanRegion:
    """``{z : |z - center| <= radius, |Im z| <= strip}``."""

    center: float
    radius: float
    strip: float

    def contains(self, z, tol=0.0):
        z = np.asarray(z, dtype=np.complex128)
        return (np.abs(z - self.center) <= self.radius + tol) & (np.abs(z.imag) <= self.strip + tol)


def kahan_regions(a, e, tol=None):
    """Inclusion regions for the T-eigenvalues of a Hermitian ``a`` plus ``e``.

    ``lambda_k`` are the (real) T-eigenvalues of ``a`` in non-increasing
    order, ``E_y = (bcirc(e) - bcirc(e)^H) / 2i`` and each region is the disk
    of radius ``||e||_2`` about ``lambda_k`` cut to the strip
    ``|Im z| <= ||E_y||_2``.  Returns ``(regions, report)``; the report's
    ``holds`` says whether every T-eigenvalue of ``a + e`` is covered.
    """
    _require_square(a, "kahan_regions")
    if not is_hermitian(a, tol):
        raise NotHermitianError("Kahan regions need a Hermitian tensor")
    lam = np.sort(t_eigenvalues(a).eigenvalues.real)[::-1]
    radius = tensor_norm(e, 2)
    # bcirc(e)^H = bcirc(e^H), so E_y is bcirc of a tensor
    e_y = (e - conj_transpose(e)) * (1 / 2j)
    strip = tensor_norm(e_y, 2)
    regions = [KahanRegion(float(l), radius, strip) for l in lam]
    mu = t_eigenvalues(a + e).eigenvalues
    scale = max(1.0, tensor_norm(a, 2))
    slack = HOLDS_RTOL * scale
    centers = lam[None, :]
    in_disk = np.abs(mu[:, None] - centers) <= radius + slack
    in_strip = np.abs(mu.imag) <= strip + slack
    covered = in_disk.any(axis=1) & in_strip
    observed = spectral_variation(lam.astype(np.complex128), mu)
    max_imag = float(np.abs(mu.imag).max()) if mu.size else 0.0
    report = BoundReport(
        bound=float(radius), observed=observed, holds=bool(covered.all()),
        detail={"norm_E_y": strip, "max_abs_imag": max_imag,
                "uncovered": int((~covered).sum())})
    return regions, report
