"""Regular part of the half-plane Green function of ``(Delta - r^2) V = 0``.

The production path is the K1 closed form

    G(x, y) = r y K1(r rho) / (pi rho),    rho = sqrt(x^2 + y^2),

whose ``r -> 0`` limit is the Poisson kernel ``y / (pi rho^2)``.  The sine
integral over ``xi`` is kept for verification.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import AccuracyError, DomainError, SingularityError
from .quadrature import graded_edges, integrate, integrate_batch, integrate_oscillatory
from .fields import OracleReport
from .specfun import bessel_k1

# Below this |x| the exp(-|x| xi) envelope needs too many oscillations and the
# integral is summed panel-by-panel between zeros of sin(xi y) instead.
_MAX_DIRECT_HALF_PERIODS = 400


@dataclass(frozen=True)
class HalfPlaneKernelPoint:
    x: float
    y: float
    r: float = 0.0

    def __post_init__(self):
        _check(self.y, self.r)


def _check(y, r):
    if not (math.isfinite(y) and y >= 0.0):
        raise DomainError(f"y must be finite and >= 0, got {y!r}")
    if not (math.isfinite(r) and r >= 0.0):
        raise DomainError(f"r must be finite and >= 0, got {r!r}")


def halfplane_mass(y, r):
    """Integral of the kernel over x: ``exp(-r y)``."""
    return np.exp(-r * np.asarray(y, dtype=float))


def scaled_k1_product(z):
    """``z K1(z)`` with the ``z = 0`` limit 1.

    Below ``z = 1e-8`` the correction ``(z^2/2) log(z/2)`` is under 1e-15,
    so the limit is returned (this also avoids overflow of ``K1``).
    """
    z = np.asarray(z, dtype=float)
    out = np.ones_like(z)
    pos = z > 1e-8
    if np.any(pos):
        out[pos] = z[pos] * bessel_k1(z[pos])
    return out


def halfplane_tail_bound(xi, y, r):
    """Upper bound on ``int_xi^inf G(t, y) dt`` (``z K1(z)`` is decreasing)."""
    xi = np.asarray(xi, dtype=float)
    return y * scaled_k1_product(r * xi) / (math.pi * xi)


def _closed_values(x, y, r):
    rho2 = x * x + y * y
    rho = np.sqrt(rho2)
    return y * scaled_k1_product(r * rho) / (math.pi * rho2)


def green_halfplane_closed(x, y, r):
    """Half-plane kernel in closed form (vectorised over ``x``).

    Raises
    ------
    SingularityError
        At the origin.
    """
    xs = np.asarray(x, dtype=float)
    _check(y, r)
    if not np.all(np.isfinite(xs)):
        raise DomainError("x must be finite")
    if y == 0.0:
        if np.any(xs == 0.0):
            raise SingularityError("half-plane kernel is singular at the origin")
        out = np.zeros_like(xs)
        return float(out) if out.ndim == 0 else out
    out = _closed_values(np.atleast_1d(xs), y, r)
    return float(out[0]) if xs.ndim == 0 else out


def _integrand(x, y, r):
    ax = abs(x)

    def f(xi):
        mu = np.sqrt(xi * xi + r * r)
        if r == 0.0:
            ratio = np.ones_like(xi)
        else:
            ratio = xi / mu
        return ratio * np.sin(xi * y) * np.exp(-ax * mu)
    return f


def green_halfplane_integral(x, y, r, tol=1e-10, full_output=False):
    """Half-plane kernel from ``(1/pi) int_0^inf xi sin(xi y) e^{-|x| mu} / mu dxi``.

    For ``|x|`` bounded away from zero the range is cut at ``Xi`` with
    ``exp(-|x| Xi) / |x| <= tol``.  When that would need too many oscillations
    (including ``x = 0``) the integral is summed between consecutive zeros of
    ``sin(xi y)`` and the partial sums are extrapolated.

    Raises
    ------
    AccuracyError
        If the chosen strategy cannot reach ``tol``.
    """
    _check(y, r)
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    if y == 0.0:
        if x == 0.0:
            raise SingularityError("half-plane kernel is singular at the origin")
        return (0.0, 0.0) if full_output else 0.0
    ax = abs(x)
    f = _integrand(x, y, r)
    qtol = 0.5 * math.pi * tol
    half_period = math.pi / y
    xi_cut = math.log(1.0 / (ax * qtol)) / ax if ax > 0 else math.inf
    if ax > 0 and xi_cut / half_period <= _MAX_DIRECT_HALF_PERIODS:
        xi_cut = max(xi_cut, 1.0)
        scale = min(y, 1.0 / max(ax, 1e-300), 1.0)
        cap = min(half_period, 2.0)
        edges = graded_edges(0.0, xi_cut, scale, cap=cap)
        res = integrate(f, edges, 0.5 * qtol)
        value, err, ok = res.value, res.error + math.exp(-ax * xi_cut) / ax, res.converged
    else:
        # Subtract sin(xi y) e^{-|x| xi}, whose integral is y / (x^2 + y^2)
        # (the Abel value 1/y at x = 0); the remainder decays like xi^-2.
        def g(xi):
            return f(xi) - np.sin(xi * y) * np.exp(-ax * xi)

        res = integrate_oscillatory(g, 0.0, half_period, 0.5 * qtol)
        value = res.value + y / (ax * ax + y * y)
        err, ok = res.error, res.converged
    value /= math.pi
    err /= math.pi
    if not ok or err > tol:
        raise AccuracyError("half-plane integral did not reach tolerance", value, err)
    return (value, err) if full_output else value


def identity_gradshteyn_3914(a, beta, gamma, tol=1e-8):
    """Check ``int_0^inf t sin(a t) e^{-beta sqrt(gamma^2+t^2)} / sqrt(gamma^2+t^2) dt
    = a gamma K1(gamma sqrt(a^2+beta^2)) / sqrt(a^2+beta^2)``.

    The left side is integrated adaptively up to the point where
    ``e^{-beta t} / beta`` falls below the tolerance.
    """
    for name, v in (("a", a), ("beta", beta), ("gamma", gamma)):
        if not (math.isfinite(v) and v > 0):
            raise DomainError(f"{name} must be positive, got {v!r}")
    c = math.hypot(a, beta)
    rhs = a * gamma / c * float(bessel_k1(gamma * c))

    def f(t):
        m = np.sqrt(gamma * gamma + t * t)
        return t * np.sin(a * t) * np.exp(-beta * m) / m

    qtol = 0.1 * tol
    cut = max(math.log(1.0 / (beta * qtol)) / beta, 1.0)
    half_period = math.pi / a
    if cut / half_period <= _MAX_DIRECT_HALF_PERIODS:
        edges = graded_edges(0.0, cut, min(gamma, 1.0 / a, 1.0), cap=min(half_period, 2.0))
        res = integrate(f, edges, qtol)
        lhs, err, ok = res.value, res.error + math.exp(-beta * cut) / beta, res.converged
    else:
        res = integrate_oscillatory(f, 0.0, half_period, qtol)
        lhs, err, ok = res.value, res.error, res.converged
    if not ok:
        raise AccuracyError("Gradshteyn 3.914 left side did not converge", lhs, err)
    dev = abs(lhs - rhs)
    return OracleReport.from_values(
        "gradshteyn_3914", np.array([lhs]), np.array([rhs]), tol,
        metadata={"a": a, "beta": beta, "gamma": gamma, "lhs": lhs, "rhs": rhs,
                  "quadrature_error": err, "deviation": dev})


def halfplane_closed_batch(x, y, r):
    """Vectorised closed form without argument checks (internal use)."""
    return _closed_values(np.asarray(x, dtype=float), y, r)


def halfplane_integral_batch(x, y, r, tol):
    """Sine-integral form for many ``x != 0`` (verification helper)."""
    ax = np.abs(np.asarray(x, dtype=float)).ravel()
    qtol = 0.5 * math.pi * tol
    edges = []
    for a in ax:
        cut = max(math.log(1.0 / (a * qtol)) / a, 1.0)
        edges.append(graded_edges(0.0, cut, min(y, 1.0 / a, 1.0), cap=min(math.pi / y, 2.0)))

    def f(xi, owner):
        mu = np.sqrt(xi * xi + r * r)
        return (xi / mu if r > 0 else 1.0) * np.sin(xi * y) * np.exp(-ax[owner] * mu)

    vals, errs, ok = integrate_batch(f, edges, 0.5 * qtol)
    tails = np.array([math.exp(-a * e[-1]) / a for a, e in zip(ax, edges)])
    return vals / math.pi, (errs + tails) / math.pi, ok
