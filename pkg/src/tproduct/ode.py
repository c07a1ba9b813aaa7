"""The homogeneous system ``dX/dt = A * X`` and its solution diagnostics.

For constant ``A`` the solution is ``X(t) = exp(A t) * X(0)`` where the
t-exponential ``exp(A t)`` is the tensor whose ``bcirc`` is
``exp(t bcirc(A))``; it is built face by face.

Solutions are passed around as callables ``t -> Tensor3``.  Verification
helpers (:func:`ode_residual`, :func:`superposition_check`,
:func:`wronskian`) also accept a callable coefficient ``t -> Tensor3``.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _dft
from .errors import DimensionMismatchError, NonRealCoefficientError, NotSquareError
from .tensor_core import Tensor3, fold, identity_tensor, keep_real, tprod, unfold

__all__ = [
    "OdeSolution", "WronskianTrace", "t_exp", "solve_ivp", "ode_residual",
    "superposition_check", "wronskian", "wronskian_trace", "abel_liouville",
    "fundamental_set", "eigen_solution", "real_solution_split",
]


def _require_square(a, what):
    if a.m != a.p:
        raise NotSquareError("%s needs square frontal slices, got %s" % (what, a.shape))


def t_exp(a, t=1.0):
    """t-exponential ``exp(a t)``; a matrix exponential per face."""
    _require_square(a, "t_exp")
    if t == 0:
        return identity_tensor(a.m, a.n)
    faces = _dft.forward(a.data)
    out = np.stack([scipy.linalg.expm(t * f) for f in faces])
    return Tensor3(keep_real(_dft.inverse(out), a))


@dataclass(frozen=True)
class OdeSolution:
    """Exact samples of ``Y(t) = exp(A t) * Y0``.

    Calling the object evaluates the solution at any time, which is what the
    finite-difference checks use.
    """

    times: tuple
    states: tuple
    generator: Tensor3
    initial: Tensor3

    def __call__(self, t):
        if t == 0:
            return self.initial
        return tprod(t_exp(self.generator, t), self.initial)

    def __len__(self):
        return len(self.times)


def solve_ivp(a, y0, times):
    """Solve ``dY/dt = a * Y`` with ``Y(0) = y0`` at the given ``times``.

    ``times`` must be increasing and start at 0.
    """
    _require_square(a, "solve_ivp")
    if y0.m != a.m or y0.n != a.n:
        raise DimensionMismatchError(
            "initial value %s does not fit coefficient %s" % (y0.shape, a.shape))
    times = tuple(float(t) for t in times)
    if not times or times[0] != 0.0:
        raise ValueError("times must start at 0")
    if any(t1 <= t0 for t0, t1 in zip(times, times[1:])):
        raise ValueError("times must be strictly increasing")
    states = [y0] + [tprod(t_exp(a, t), y0) for t in times[1:]]
    return OdeSolution(times=times, states=tuple(states), generator=a, initial=y0)


def _coef(a, t):
    return a(t) if callable(a) else a


def ode_residual(a, x, t, h=1e-5):
    """``||(X(t+h) - X(t-h)) / 2h - A(t) * X(t)||_F``."""
    deriv = (x(t + h).data - x(t - h).data) / (2 * h)
    return float(np.linalg.norm((deriv - tprod(_coef(a, t), x(t)).data).ravel()))


def superposition_check(a, x1, x2, c1, c2, times, h=1e-5):
    """Largest residual of ``c1 x1 + c2 x2`` over ``times``."""
    def combo(t):
        return c1 * x1(t) + c2 * x2(t)
    return max(ode_residual(a, combo, t, h) for t in times)


def _value(x, t):
    return x(t) if callable(x) else x


def wronskian(solutions, t):
    """``det [unfold(X_1(t)), ..., unfold(X_mn(t))]``.

    Each solution is a callable or an already evaluated ``m x 1 x n`` tensor.
    """
    vals = [_value(x, t) for x in solutions]
    if not vals:
        raise DimensionMismatchError("no solutions given")
    m, s, n = vals[0].shape
    if s != 1 or any(v.shape != (m, 1, n) for v in vals):
        raise DimensionMismatchError("solutions must all be m x 1 x n tensors")
    if len(vals) != m * n:
        raise DimensionMismatchError(
            "a Wronskian needs exactly %d solutions, got %d" % (m * n, len(vals)))
    mat = np.column_stack([unfold(v)[:, 0] for v in vals])
    # exactly repeated columns: report the exact zero rather than LU roundoff
    if len({col.tobytes() for col in mat.T}) < mat.shape[1]:
        return 0j
    return complex(np.linalg.det(mat))


@dataclass(frozen=True)
class WronskianTrace:
    times: tuple
    values: np.ndarray
    solutions: tuple

    def identically_zero(self, tol=1e-12):
        return bool(np.all(np.abs(self.values) <= tol))

    def never_zero(self, tol=1e-12):
        return bool(np.all(np.abs(self.values) > tol))

    def dichotomy_holds(self, tol=1e-12):
        return self.identically_zero(tol) or self.never_zero(tol)


def wronskian_trace(solutions, times):
    times = tuple(float(t) for t in times)
    vals = np.array([wronskian(solutions, t) for t in times])
    return WronskianTrace(times=times, values=vals, solutions=tuple(solutions))


def abel_liouville(a, w0, t, t0=0.0):
    """``W(t0) exp((t - t0) trace(bcirc(a)))`` for constant ``a``."""
    _require_square(a, "abel_liouville")
    tr = a.n * np.trace(a.slice(0))
    return complex(w0 * np.exp((t - t0) * tr))


def fundamental_set(a, t0=0.0):
    """Solutions with ``unfold(X_i(t0)) = e_i``, ``i = 1..mn``."""
    _require_square(a, "fundamental_set")
    size = a.m * a.n
    out = []
    for i in range(size):
        e = np.zeros(size, dtype=np.complex128)
        e[i] = 1
        x0 = fold(e, a.n)
        out.append(_shifted(a, x0, t0))
    return out


def _shifted(a, x0, t0):
    def x(t):
        return tprod(t_exp(a, t - t0), x0)
    return x


def eigen_solution(lam, vec):
    """``t -> exp(lam t) X`` for a T-eigenpair ``(lam, X)``."""
    def x(t):
        return np.exp(lam * t) * vec
    return x


def real_solution_split(x, a, tol=1e-10):
    """Split a complex solution of a real system into two real solutions.

    :raises NonRealCoefficientError: if ``a`` has imaginary parts above ``tol``.
    """
    coef = _coef(a, 0.0)
    if np.abs(coef.data.imag).max() > tol * max(1.0, coef.fro()):
        raise NonRealCoefficientError("coefficient tensor is not real")

    def re(t):
        return Tensor3(x(t).data.real)

    def im(t):
        return Tensor3(x(t).data.imag)
    return re, im
