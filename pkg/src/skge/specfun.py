"""Bessel functions J0, J1, I_n and K_n for real arguments.

Every function accepts a Python float or an array-like and returns the same
kind.  With ``full_output=True`` a :class:`SpecFunResult` is returned instead,
carrying a bound on the truncation error of whichever branch was used.

Branches
--------
J0, J1
    ascending series for ``|z| <= 8``, Miller backward recurrence normalised by
    ``J0 + 2 (J2 + J4 + ...) = 1`` for ``8 < |z| <= 25`` and the Hankel
    asymptotic expansion beyond.
I_n
    ascending series with an explicit geometric remainder bound.
K0, K1
    ascending series for ``z <= 2``, Steed's continued fraction for
    ``2 < z <= 30`` and the exponential asymptotic expansion beyond; higher
    orders by upward recurrence.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError, RangeError

EPS = np.finfo(float).eps
EULER_GAMMA = 0.57721566490153286061

J_SERIES_MAX = 8.0
J_MILLER_MAX = 25.0
K_SERIES_MAX = 2.0
K_ASYMPTOTIC_MIN = 30.0

I_MAX_ORDER = 200
I_MAX_ARG = 700.0

_MILLER_START = 80
_ASYMPTOTIC_TERMS = 30


@dataclass(frozen=True)
class SpecFunResult:
    """Function value with an upper bound on its truncation error."""

    value: float
    abs_error_estimate: float


def _prepare(z):
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("Bessel function argument must be finite")
    return np.atleast_1d(arr).astype(float, copy=True), arr.ndim == 0


def _finish(value, err, scalar, full_output):
    if scalar:
        value, err = float(value[0]), float(err[0])
    if full_output:
        return SpecFunResult(value, err)
    return value


# --------------------------------------------------------------------------
# J0 and J1

def _j_series(nu, z):
    q = -0.25 * z * z
    term = np.ones_like(z) if nu == 0 else 0.5 * z
    total = term.copy()
    absum = np.abs(term)
    for k in range(1, 80):
        term = term * q / (k * (k + nu))
        total += term
        absum += np.abs(term)
        if np.all(np.abs(term) <= 1e-18 * np.maximum(absum, 1e-300)):
            break
    err = 2.0 * np.abs(term) + 4.0 * EPS * absum
    return total, err


def _j_miller(z):
    """(J0, J1) from backward recurrence; ``z`` must be nonzero."""
    jp = np.zeros_like(z)
    j = np.full_like(z, 1e-30)
    norm = 2.0 * j if _MILLER_START % 2 == 0 else np.zeros_like(z)
    j1 = None
    for n in range(_MILLER_START, 0, -1):
        jm = (2.0 * n / z) * j - jp
        jp, j = j, jm
        if n - 1 == 1:
            j1 = j
        elif n - 1 > 0 and (n - 1) % 2 == 0:
            norm += 2.0 * j
    norm += j
    j0 = j / norm
    j1 = j1 / norm
    err = 64.0 * EPS * np.ones_like(z)
    return (j0, err), (j1, err.copy())


def _j_asymptotic(nu, z):
    mu = 4.0 * nu * nu
    p = np.ones_like(z)
    q = np.zeros_like(z)
    a = np.ones_like(z)
    for k in range(1, _ASYMPTOTIC_TERMS + 1):
        a = a * (mu - (2 * k - 1) ** 2) / (8.0 * k * z)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p += sign * a
        else:
            q += sign * a
    amp = np.sqrt(2.0 / (math.pi * z))
    c, s = np.cos(z), np.sin(z)
    if nu == 0:
        cos_chi, sin_chi = (c + s) / math.sqrt(2.0), (s - c) / math.sqrt(2.0)
    else:
        cos_chi, sin_chi = (s - c) / math.sqrt(2.0), -(s + c) / math.sqrt(2.0)
    first_omitted = np.abs(a * (mu - (2 * _ASYMPTOTIC_TERMS + 1) ** 2)
                           / (8.0 * (_ASYMPTOTIC_TERMS + 1) * z))
    err = amp * (first_omitted + 4.0 * EPS * (1.0 + z * EPS))
    return amp * (p * cos_chi - q * sin_chi), err


def _bessel_j(nu, z, full_output):
    x, scalar = _prepare(z)
    ax = np.abs(x)
    value = np.empty_like(ax)
    err = np.empty_like(ax)

    m = ax <= J_SERIES_MAX
    if m.any():
        value[m], err[m] = _j_series(nu, ax[m])
    m = (ax > J_SERIES_MAX) & (ax <= J_MILLER_MAX)
    if m.any():
        pair = _j_miller(ax[m])
        value[m], err[m] = pair[nu]
    m = ax > J_MILLER_MAX
    if m.any():
        value[m], err[m] = _j_asymptotic(nu, ax[m])

    if nu == 1:
        value = np.where(x < 0, -value, value)
    return _finish(value, err, scalar, full_output)


def bessel_j0(z, full_output=False):
    """Bessel function of the first kind of order zero.

    Parameters
    ----------
    z : float or array_like
        Finite real argument(s).
    full_output : bool
        Return a :class:`SpecFunResult` with an error bound.

    Raises
    ------
    DomainError
        If any argument is not finite.
    """
    return _bessel_j(0, z, full_output)


def bessel_j1(z, full_output=False):
    """Bessel function of the first kind of order one (odd in ``z``)."""
    return _bessel_j(1, z, full_output)


# --------------------------------------------------------------------------
# I_n

def _i_series(n, z):
    value = np.zeros_like(z)
    err = np.zeros_like(z)
    zero = z == 0.0
    if zero.any():
        value[zero] = 1.0 if n == 0 else 0.0
    pos = ~zero
    if not pos.any():
        return value, err

    zp = z[pos]
    half = 0.5 * zp
    q = half * half
    total = np.ones_like(zp)
    term = np.ones_like(zp)
    k = 0
    while True:
        ratio = q / ((k + 1.0) * (n + k + 1.0))
        term = term * ratio
        total += term
        k += 1
        # Once ratio < 1 it keeps shrinking, so the remainder is geometric.
        ratio_next = q / ((k + 1.0) * (n + k + 1.0))
        tail = np.where(ratio_next < 0.5,
                        term * ratio_next / np.maximum(1.0 - ratio_next, 0.5), np.inf)
        done = tail <= 0.01 * EPS * total
        if np.all(done):
            break
    log_lead = n * np.log(half) - math.lgamma(n + 1.0)
    log_val = log_lead + np.log(total)
    if np.any(log_val > np.log(np.finfo(float).max)):
        raise RangeError("I_n overflows double precision")
    value[pos] = np.exp(log_val)
    rel = tail / total + (2.0 * k + 8.0) * EPS
    err[pos] = value[pos] * rel
    return value, err


def bessel_i(n, z, full_output=False):
    """Modified Bessel function of the first kind ``I_n(z)``.

    Evaluated by the ascending series ``sum_k (z/2)**(n+2k) / (k! (n+k)!)``
    with a geometric bound on the discarded remainder.

    Raises
    ------
    DomainError
        For negative or non-integer order or a negative argument.
    RangeError
        For ``n > 200`` or ``z > 700``.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"order must be a nonnegative integer, got {n!r}")
    n = int(n)
    x, scalar = _prepare(z)
    if np.any(x < 0):
        raise DomainError("bessel_i is implemented for z >= 0 only")
    if n > I_MAX_ORDER or np.any(x > I_MAX_ARG):
        raise RangeError(f"bessel_i limited to n <= {I_MAX_ORDER}, z <= {I_MAX_ARG}")
    value, err = _i_series(n, x)
    return _finish(value, err, scalar, full_output)


# --------------------------------------------------------------------------
# K_n

def _k_series(z):
    """(K0, K1) by the ascending series, accurate for z <= 2."""
    q = 0.25 * z * z
    t = np.ones_like(z)      # q**k / (k!)**2
    u = np.ones_like(z)      # q**k / (k! (k+1)!)
    harmonic = 0.0
    s_i0 = t.copy()
    s_i1 = u.copy()
    s_k0 = np.zeros_like(z)
    s_k1 = (-2.0 * EULER_GAMMA + 1.0) * u
    for k in range(1, 60):
        t = t * q / (k * k)
        u = u * q / (k * (k + 1.0))
        harmonic += 1.0 / k
        s_i0 += t
        s_i1 += u
        s_k0 += harmonic * t
        # psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
        s_k1 += (-2.0 * EULER_GAMMA + 2.0 * harmonic + 1.0 / (k + 1.0)) * u
        if np.all(t <= 1e-18 * s_i0):
            break
    log_half = np.log(0.5 * z)
    i0 = s_i0
    i1 = 0.5 * z * s_i1
    k0 = -(log_half + EULER_GAMMA) * i0 + s_k0
    k1 = 1.0 / z + log_half * i1 - 0.25 * z * s_k1
    err0 = 8.0 * EPS * (np.abs(log_half) + 1.0) * i0 + 4.0 * t
    err1 = 8.0 * EPS * (1.0 / z + np.abs(log_half) * i1) + 4.0 * t
    return (k0, err0), (k1, err1)


def _k_steed(z):
    """(K0, K1) by Steed's continued fraction, used for 2 < z <= 30."""
    b = 2.0 * (1.0 + z)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(z)
    q2 = np.ones_like(z)
    a1 = 0.25
    q = np.full_like(z, a1)
    c = np.full_like(z, a1)
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, 20000):
        a -= 2.0 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = h + delh
        dels = q * delh
        s = s + dels
        if np.all(np.abs(dels / s) < EPS):
            break
    h = a1 * h
    k0 = np.sqrt(math.pi / (2.0 * z)) * np.exp(-z) / s
    k1 = k0 * (z + 0.5 - h) / z
    return (k0, 16.0 * EPS * k0), (k1, 16.0 * EPS * k1)


def _k_asymptotic(nu, z):
    mu = 4.0 * nu * nu
    total = np.ones_like(z)
    a = np.ones_like(z)
    for k in range(1, _ASYMPTOTIC_TERMS + 1):
        a = a * (mu - (2 * k - 1) ** 2) / (8.0 * k * z)
        total += a
    first_omitted = np.abs(a * (mu - (2 * _ASYMPTOTIC_TERMS + 1) ** 2)
                           / (8.0 * (_ASYMPTOTIC_TERMS + 1) * z))
    pref = np.sqrt(math.pi / (2.0 * z)) * np.exp(-z)
    return pref * total, pref * (first_omitted + 4.0 * EPS * np.abs(total))


def _k01(z):
    k0 = np.empty_like(z)
    k1 = np.empty_like(z)
    e0 = np.empty_like(z)
    e1 = np.empty_like(z)
    m = z <= K_SERIES_MAX
    if m.any():
        (k0[m], e0[m]), (k1[m], e1[m]) = _k_series(z[m])
    m = (z > K_SERIES_MAX) & (z <= K_ASYMPTOTIC_MIN)
    if m.any():
        (k0[m], e0[m]), (k1[m], e1[m]) = _k_steed(z[m])
    m = z > K_ASYMPTOTIC_MIN
    if m.any():
        k0[m], e0[m] = _k_asymptotic(0, z[m])
        k1[m], e1[m] = _k_asymptotic(1, z[m])
    return k0, e0, k1, e1


def bessel_k(n, z, full_output=False):
    """Modified Bessel function of the second kind ``K_n(z)`` for ``z > 0``.

    Orders 0 and 1 are computed directly; higher orders use the upward
    recurrence ``K_{k+1} = K_{k-1} + (2k/z) K_k``, which is stable for K.

    Raises
    ------
    DomainError
        If ``z <= 0`` or the order is not a nonnegative integer.
    RangeError
        If the result overflows.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"order must be a nonnegative integer, got {n!r}")
    n = int(n)
    x, scalar = _prepare(z)
    if np.any(x <= 0):
        raise DomainError("K_n(z) requires z > 0")
    k0, e0, k1, e1 = _k01(x)
    if n == 0:
        value, err = k0, e0
    elif n == 1:
        value, err = k1, e1
    else:
        rel = np.maximum(e0 / np.maximum(k0, 1e-300), e1 / np.maximum(k1, 1e-300))
        km, k = k0, k1
        with np.errstate(over="ignore", invalid="ignore"):
            for j in range(1, n):
                km, k = k, km + (2.0 * j / x) * k
        if not np.all(np.isfinite(k)):
            raise RangeError("K_n overflows double precision")
        value, err = k, k * (rel + n * EPS)
    return _finish(value, err, scalar, full_output)


def bessel_k0(z, full_output=False):
    return bessel_k(0, z, full_output)


def bessel_k1(z, full_output=False):
    return bessel_k(1, z, full_output)
