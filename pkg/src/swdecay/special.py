"""Bessel functions J_n, I_0 and I_1 backed by the compiled kernels."""
import numpy as np

from . import _kernels


def bessel_j(n, x):
    """Bessel function of the first kind ``J_n(x)`` for integer ``n >= 0``.

    ``x`` may be a scalar or an array of non-negative values.
    """
    n = int(n)
    if n < 0:
        raise ValueError("order must be >= 0")
    xa = np.asarray(x, dtype=float)
    res = _kernels.jn_table(n, xa.ravel())[n].reshape(xa.shape)
    return res[()] if res.ndim == 0 else res


def bessel_j_orders(kmax, x):
    """All orders ``J_0 .. J_kmax`` at the points ``x``, shape ``(kmax+1, len(x))``."""
    return _kernels.jn_table(int(kmax), np.atleast_1d(np.asarray(x, dtype=float)))


def bessel_i01_scaled(x):
    """``exp(-x) I0(x)`` and ``exp(-x) I1(x)``."""
    xa = np.asarray(x, dtype=float)
    s0, s1x = _kernels.i0_i1x_scaled(xa.ravel())
    s0 = s0.reshape(xa.shape)
    s1 = (s1x * xa.ravel()).reshape(xa.shape)
    if xa.ndim == 0:
        return s0[()], s1[()]
    return s0, s1


def bessel_i01(x):
    """Modified Bessel functions ``(I0(x), I1(x))`` for ``x >= 0``.

    Overflows to ``inf`` beyond x ~ 700; use :func:`bessel_i01_scaled` there.
    """
    xa = np.asarray(x, dtype=float)
    s0, s1 = bessel_i01_scaled(xa)
    e = np.exp(xa)
    return s0 * e, s1 * e
