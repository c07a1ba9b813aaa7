"""Epsilon-pseudospectra of third-order tensors.

``z`` lies in the epsilon-pseudospectrum of ``A`` when the largest face
resolvent norm ``max_i ||(z I - A_i)^{-1}||`` is at least ``1/eps``.  In the
2-norm this is ``min_i sigma_min(z I - A_i) <= eps``, which is what
:func:`pseudo_grid` tabulates.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import ndimage

from . import _dft
from .errors import InvalidRegionError, NotFDiagonalizableError, NotSquareError
from .tensor_core import (_norm_key, conj_transpose, identity_tensor,
                          t_inverse, tensor_norm, tprod)
from .transform import blockdiag, to_faces

__all__ = [
    "Region", "PseudoGrid", "PropertyReport", "InclusionReport",
    "DEFAULT_EPSILONS", "resolvent_quantity", "sigma_min_field",
    "pseudo_grid", "auto_region", "membership", "perturbation_witness",
    "min_residual_witness", "check_pseudo_properties",
    "bauer_fike_inclusion_check", "member_components", "boundary_mask",
]

DEFAULT_EPSILONS = tuple(10.0 ** -k for k in range(1, 11))
THREADS_ENV = "TPRODUCT_THREADS"
_CHUNK = 4096


class Region(NamedTuple):
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def validate(self):
        vals = [float(v) for v in self]
        if not all(math.isfinite(v) for v in vals):
            raise InvalidRegionError("region bounds must be finite: %s" % (tuple(self),))
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise InvalidRegionError("empty region %s" % (tuple(self),))
        return Region(*vals)


@dataclass(frozen=True)
class PseudoGrid:
    """Tabulated ``g(z)`` on a uniform rectangular grid.

    ``values[ix, iy]`` belongs to ``z = re[ix] + 1j*im[iy]``.  For the
    2-norm ``g`` is the smallest face ``sigma_min``; otherwise it is the
    reciprocal resolvent norm.  Singular points hold ``0``.
    """

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    nx: int
    ny: int
    values: np.ndarray
    epsilons: tuple
    norm: object = 2
    meta: dict = field(default_factory=dict)

    @property
    def region(self):
        return Region(self.re_min, self.re_max, self.im_min, self.im_max)

    @property
    def re(self):
        return np.linspace(self.re_min, self.re_max, self.nx)

    @property
    def im(self):
        return np.linspace(self.im_min, self.im_max, self.ny)

    @property
    def points(self):
        """Complex grid points, shape ``(nx, ny)``."""
        return self.re[:, None] + 1j * self.im[None, :]

    @property
    def cell_diagonal(self):
        return math.hypot((self.re_max - self.re_min) / (self.nx - 1),
                          (self.im_max - self.im_min) / (self.ny - 1))

    def member(self, eps):
        return self.values <= eps


def _square_faces(a):
    if a.m != a.p:
        raise NotSquareError("pseudospectra need square frontal slices, got %s" % (a.shape,))
    return _dft.forward(a.data)


def _singular_cutoff(m, scale):
    """Threshold below which ``sigma_min(z I - A_i)`` counts as zero.

    ``scale`` should bound ``||z I - A_i||_2``, e.g. ``||A_i||_2 + |z|``.
    """
    return 10 * m * np.finfo(float).eps * scale


def _face_norms(faces):
    return np.linalg.svd(faces, compute_uv=False)[:, 0]


def _sigma_min_batch(faces, zs):
    """``min_i sigma_min(z I - A_i)`` for a flat array ``zs``."""
    m = faces.shape[1]
    eye = np.eye(m)
    out = np.full(zs.shape, np.inf)
    for face, fnorm in zip(faces, _face_norms(faces)):
        mats = zs[:, None, None] * eye - face
        sv = np.linalg.svd(mats, compute_uv=False)[:, -1]
        sv[sv <= _singular_cutoff(m, fnorm + np.abs(zs))] = 0.0
        np.minimum(out, sv, out=out)
    return out


def _inv_norm_batch(faces, zs, key):
    """``max_i ||(z I - A_i)^{-1}||_key``; ``inf`` on singular faces."""
    m = faces.shape[1]
    eye = np.eye(m)
    out = np.zeros(zs.shape)
    for face, fnorm in zip(faces, _face_norms(faces)):
        mats = zs[:, None, None] * eye - face
        sv = np.linalg.svd(mats, compute_uv=False)
        singular = sv[:, -1] <= _singular_cutoff(m, fnorm + np.abs(zs))
        res = np.full(zs.shape, np.inf)
        ok = ~singular
        if ok.any():
            inv = np.linalg.inv(mats[ok])
            axis = -2 if key == 1 else -1
            res[ok] = np.abs(inv).sum(axis=axis).max(axis=-1)
        np.maximum(out, res, out=out)
    return out


def _workers(workers):
    if workers is not None:
        return max(1, int(workers))
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _evaluate(faces, zs, key, workers=None):
    """``g`` at every point of ``zs`` (any shape), chunked and optionally threaded."""
    flat = np.asarray(zs, dtype=np.complex128).ravel()
    if key == 2:
        fn = lambda chunk: _sigma_min_batch(faces, chunk)
    else:
        def fn(chunk):
            r = _inv_norm_batch(faces, chunk, key)
            with np.errstate(divide="ignore"):
                return np.where(np.isinf(r), 0.0, 1.0 / r)
    chunks = [flat[i:i + _CHUNK] for i in range(0, flat.size, _CHUNK)]
    nw = _workers(workers)
    if nw > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=nw) as pool:
            parts = list(pool.map(fn, chunks))
    else:
        parts = [fn(c) for c in chunks]
    out = np.concatenate(parts) if parts else np.zeros(0)
    return out.reshape(np.shape(zs))


def resolvent_quantity(a, z, p=2):
    """``max_i ||(z I - A_i)^{-1}||_p`` over the transformed faces.

    Returns ``math.inf`` when some face is numerically singular at ``z``.
    The 2-norm case is ``1/sigma_min`` and never forms an inverse.
    """
    faces = _square_faces(a)
    key = _norm_key(p)
    if key == "fro":
        raise ValueError("pseudospectra are defined for p in {1, 2, inf}")
    zs = np.array([complex(z)])
    if key == 2:
        m = a.m
        best = math.inf
        for face, fnorm in zip(faces, _face_norms(faces)):
            sv = np.linalg.svd(zs[0] * np.eye(m) - face, compute_uv=False)
            if sv[-1] <= _singular_cutoff(m, fnorm + abs(zs[0])):
                return math.inf
            best = min(best, float(sv[-1]))
        return 1.0 / best
    return float(_inv_norm_batch(faces, zs, key)[0])


def sigma_min_field(a, zs, workers=None):
    """``min_i sigma_min(z I - A_i)`` evaluated at an array of points."""
    return _evaluate(_square_faces(a), zs, 2, workers)


def membership(a, z, eps, p=2):
    if not eps > 0:
        raise ValueError("eps must be positive, got %r" % (eps,))
    return resolvent_quantity(a, z, p) >= 1.0 / eps


def _eig_condition_estimate(faces):
    kappa = 1.0
    for face in faces:
        _, v = np.linalg.eig(face)
        kappa = max(kappa, float(np.linalg.cond(v)))
    return kappa


def auto_region(a, epsilons=DEFAULT_EPSILONS):
    """Spectrum bounding box padded by ``1.5 max(eps) kappa``.

    ``kappa`` is the largest face eigenvector condition number.  The box is
    clipped to ``|Re|, |Im| <= ||A||_2 + max(eps)``, which always contains
    the pseudospectrum.
    """
    faces = _square_faces(a)
    lam = np.concatenate([np.linalg.eigvals(f) for f in faces])
    eps_max = max(epsilons)
    kappa = _eig_condition_estimate(faces)
    pad = 1.5 * eps_max * (kappa if math.isfinite(kappa) else 1e300)
    radius = tensor_norm(a, 2) + eps_max
    lo_re = max(lam.real.min() - pad, -radius)
    hi_re = min(lam.real.max() + pad, radius)
    lo_im = max(lam.imag.min() - pad, -radius)
    hi_im = min(lam.imag.max() + pad, radius)
    if not hi_re > lo_re:
        lo_re, hi_re = lam.real.min() - eps_max, lam.real.max() + eps_max
    if not hi_im > lo_im:
        lo_im, hi_im = lam.imag.min() - eps_max, lam.imag.max() + eps_max
    return Region(float(lo_re), float(hi_re), float(lo_im), float(hi_im)), kappa


def pseudo_grid(a, region=None, nx=200, ny=200, epsilons=DEFAULT_EPSILONS, p=2, workers=None):
    """Evaluate ``g(z)`` on an ``nx x ny`` grid over ``region``.

    ``region`` is ``(re_min, re_max, im_min, im_max)``; ``None`` picks one
    with :func:`auto_region`.  Thread count defaults to ``$TPRODUCT_THREADS``.
    """
    faces = _square_faces(a)
    key = _norm_key(p)
    if key == "fro":
        raise ValueError("pseudospectra are defined for p in {1, 2, inf}")
    if nx < 2 or ny < 2:
        raise InvalidRegionError("grid needs nx, ny >= 2, got %d x %d" % (nx, ny))
    epsilons = tuple(float(e) for e in epsilons)
    if not epsilons or min(epsilons) <= 0:
        raise ValueError("epsilon levels must be positive")
    meta = {}
    if region is None:
        region, kappa = auto_region(a, epsilons)
        meta["auto_region"] = True
        meta["kappa_estimate"] = kappa
    region = Region(*region).validate()
    re = np.linspace(region.re_min, region.re_max, nx)
    im = np.linspace(region.im_min, region.im_max, ny)
    zs = re[:, None] + 1j * im[None, :]
    values = _evaluate(faces, zs, key, workers)
    values.setflags(write=False)
    return PseudoGrid(*region, nx=nx, ny=ny, values=values, epsilons=epsilons,
                      norm=key, meta=meta)


def perturbation_witness(a, z):
    """Smallest 2-norm ``E`` making ``z`` an eigenvalue of ``blockdiag + E``.

    ``E = -sigma_min u v^H`` from the smallest singular triplet of
    ``blockdiag(faces) - z I``.  Returns ``(E, ||E||_2)``.
    """
    _square_faces(a)
    bd = blockdiag(to_faces(a))
    size = bd.shape[0]
    u, s, vh = np.linalg.svd(bd - complex(z) * np.eye(size))
    smin = float(s[-1])
    if smin <= _singular_cutoff(size, np.linalg.norm(bd, 2) + abs(z)):
        return np.zeros_like(bd), 0.0
    # (bd - z) v = smin u, and vh[-1] is already v^H
    e = -smin * np.outer(u[:, -1], vh[-1])
    return e, smin


def min_residual_witness(a, z):
    """Unit ``v`` minimizing ``||(blockdiag - z I) v||`` and that minimum."""
    _square_faces(a)
    bd = blockdiag(to_faces(a))
    _, s, vh = np.linalg.svd(bd - complex(z) * np.eye(bd.shape[0]))
    return vh[-1].conj(), float(s[-1])


def boundary_mask(member):
    """Points whose 8-neighbourhood straddles the level set."""
    member = np.asarray(member, dtype=bool)
    st = np.ones((3, 3), dtype=bool)
    grown = ndimage.binary_dilation(member, structure=st)
    shrunk = ndimage.binary_erosion(member, structure=st, border_value=1)
    return grown & ~shrunk


def member_components(grid, eps):
    """Connected components (8-connectivity) of the member set at ``eps``.

    Returns ``(labels, count)`` as :func:`scipy.ndimage.label` does.
    """
    return ndimage.label(grid.member(eps), structure=np.ones((3, 3), dtype=int))


@dataclass(frozen=True)
class LawCheck:
    """Pointwise agreement of one transformation law on the grid."""

    mismatches: int
    interior_violations: int
    max_discrepancy_cells: float

    @property
    def holds(self):
        return self.interior_violations == 0


@dataclass(frozen=True)
class PropertyReport:
    shift: LawCheck
    scaling: LawCheck
    conjugation: LawCheck

    @property
    def holds(self):
        return all(c is None or c.holds for c in (self.shift, self.scaling, self.conjugation))


def _law_check(ref_member, other_member):
    bad = ref_member != other_member
    edge = boundary_mask(ref_member)
    if not bad.any():
        return LawCheck(0, 0, 0.0)
    # discrepancy: distance (in cells) from each mismatch to the nearest edge point
    dist = ndimage.distance_transform_edt(~edge) if edge.any() else np.full(bad.shape, np.inf)
    return LawCheck(int(bad.sum()), int((bad & ~edge).sum()), float(dist[bad].max()))


def check_pseudo_properties(a, c, eps, region=None, nx=100, ny=100):
    """Grid check of the shift, scaling and conjugation laws.

    For each grid point ``z`` of the reference grid of ``a``:

    * shift: ``z in L_eps(a)`` iff ``z + c in L_eps(a + c I)``
    * scaling (``c != 0``): ``z in L_eps(a)`` iff ``c z in L_{|c| eps}(c a)``
    * conjugation: ``z in L_eps(a)`` iff ``conj(z) in L_eps(a^H)``

    Mismatches next to the level-set boundary are counted but only interior
    ones count as violations.
    """
    base = pseudo_grid(a, region, nx, ny, (eps,))
    zs = base.points
    ref = base.member(eps)
    c = complex(c)
    shifted = a + c * identity_tensor(a.m, a.n)
    shift = _law_check(ref, sigma_min_field(shifted, zs + c) <= eps)
    scaling = None
    if c != 0:
        scaling = _law_check(ref, sigma_min_field(c * a, c * zs) <= abs(c) * eps)
    conj = _law_check(ref, sigma_min_field(conj_transpose(a), zs.conj()) <= eps)
    return PropertyReport(shift=shift, scaling=scaling, conjugation=conj)


@dataclass(frozen=True)
class InclusionReport:
    kappa: float
    inner_violations: int
    outer_violations: int
    residual: float
    grid: PseudoGrid

    @property
    def holds(self):
        return self.inner_violations == 0 and self.outer_violations == 0


def _f_diagonal_residual(a, P):
    d = tprod(tprod(t_inverse(P), a), P)
    faces = _dft.forward(d.data)
    off = faces.copy()
    ii = np.arange(a.m)
    off[:, ii, ii] = 0
    return float(np.linalg.norm(off.ravel())), faces


def bauer_fike_inclusion_check(a, P, eps, region=None, nx=100, ny=100, tol=1e-8, rtol=1e-9):
    """Check ``L(A) + D_eps  <=  L_eps(A)  <=  L(A) + D_{eps kappa_2(P)}`` on a grid.

    ``P^{-1} * a * P`` must be F-diagonal; its residual is compared with
    ``tol * kappa_2(P) * max(1, ||a||_2)``.
    """
    kappa = tensor_norm(P, 2) * tensor_norm(t_inverse(P), 2)
    resid, faces = _f_diagonal_residual(a, P)
    scale = max(1.0, tensor_norm(a, 2))
    if resid > tol * kappa * scale:
        raise NotFDiagonalizableError(
            "P^-1 * A * P is not F-diagonal (residual %.3e)" % resid, residual=resid)
    lam = np.concatenate([np.diag(f) for f in faces])
    grid = pseudo_grid(a, region, nx, ny, (eps,))
    zs = grid.points
    dist = np.abs(zs[..., None] - lam).min(axis=-1)
    member = grid.member(eps)
    inner = int(((dist < eps * (1 - rtol)) & ~member).sum())
    outer = int((member & (dist > eps * kappa * (1 + rtol))).sum())
    return InclusionReport(kappa=kappa, inner_violations=inner, outer_violations=outer,
                           residual=resid, grid=grid)
