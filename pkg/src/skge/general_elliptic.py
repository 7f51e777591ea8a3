"""Kernels for the general constant-coefficient elliptic operator

    sigma1^2 V_xx + 2 rho sigma1 sigma2 V_xy + sigma2^2 V_yy
        + alpha1 V_x + alpha2 V_y - r^2 V = 0

on the strip ``0 < y < l`` (data on ``y = 0``, zero on ``y = l``) and on the
upper half-plane.  A shear ``s = c y - x`` with ``c = rho sigma1 / sigma2``
removes the mixed derivative and an exponential factor
``exp(beta s - q y)`` removes the drift, leaving a screened Laplace problem
with anisotropic scales.  Writing ``A = sigma1^2 (1 - rho^2)``,
``B = sigma2^2`` and ``m^2 = a^2/(4A) + alpha2^2/(4B) + r^2`` with
``a = alpha1 - rho sigma1 alpha2 / sigma2``, the kernels are

* strip: ``(pi B / (A l^2)) e^{beta s - q y} sum_k k sin(k pi y / l) e^{-R_k |s|} / R_k``
  with ``R_k = sqrt((B k^2 pi^2 / l^2 + m^2) / A)``;
* half-plane: ``(B / (pi A)) e^{beta s - q y} int_0^inf w sin(w y) e^{-R(w) |s|} / R(w) dw``
  with ``R(w) = sqrt((B w^2 + m^2) / A)``.

Both reduce to the canonical kernels in :mod:`skge.strip_kernel` and
:mod:`skge.halfplane_kernel` after rescaling, which is how they are evaluated
close to ``s = 0``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import AccuracyError, DomainError, EllipticityError, SingularityError
from .fields import OracleReport
from .halfplane_kernel import scaled_k1_product
from .quadrature import graded_edges, integrate, integrate_oscillatory
from .strip_kernel import (X_SWITCH, green_strip, near_kernel_tables, series_terms,
                           strip_kernel_values)


@dataclass(frozen=True)
class EllipticCoefficients:
    """Coefficients of the operator; ``width`` is the strip width ``l``."""

    sigma1: float
    sigma2: float
    rho: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0
    r: float = 0.0
    width: float = math.pi

    def __post_init__(self):
        for name in ("sigma1", "sigma2", "rho", "alpha1", "alpha2", "r", "width"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
        if self.sigma1 <= 0 or self.sigma2 <= 0:
            raise DomainError("sigma1 and sigma2 must be positive")
        if abs(self.rho) >= 1.0:
            raise EllipticityError(f"|rho| must be < 1 for ellipticity, got {self.rho!r}")
        if self.r < 0:
            raise DomainError("r must be >= 0")
        if self.width <= 0:
            raise DomainError("width must be positive")


@dataclass(frozen=True)
class DerivedChangeOfVariables:
    """Quantities of the shear-and-exponential reduction.

    Attributes
    ----------
    s_slope : float
        ``c`` in ``s = c y - x``.
    beta : float
        Horizontal exponent, ``a / (2 A)``.
    vertical_rate : float
        ``alpha2 / (2 sigma2^2)``; the kernels carry ``exp(-vertical_rate * y)``.
    A, B : float
        Effective horizontal and vertical diffusivities.
    mass : float
        Effective screening ``m``.
    r : float
        Screening of the original operator.
    """

    s_slope: float
    beta: float
    vertical_rate: float
    A: float
    B: float
    mass: float
    width: float
    r: float = 0.0

    def R(self, k):
        """Decay rate of the ``k``-th strip mode."""
        k = np.asarray(k, dtype=float)
        return np.sqrt((self.B * (k * math.pi / self.width) ** 2 + self.mass ** 2) / self.A)

    def R_inf(self, w):
        """Decay rate of frequency ``w`` on the half-plane."""
        w = np.asarray(w, dtype=float)
        return np.sqrt((self.B * w * w + self.mass ** 2) / self.A)

    @property
    def kappa(self):
        """Horizontal scale factor onto the canonical strip of width pi."""
        return math.pi * math.sqrt(self.B) / (self.width * math.sqrt(self.A))

    @property
    def canonical_r(self):
        """Screening of the equivalent canonical strip problem."""
        return self.mass * self.width / (math.pi * math.sqrt(self.B))

    @property
    def strip_prefactor(self):
        return math.pi * self.B / (self.A * self.width ** 2)

    @property
    def halfplane_prefactor(self):
        return self.B / (math.pi * self.A)

    @property
    def vertical_screening(self):
        """``omega`` with ``omega^2 = vertical_rate^2 + r^2 / sigma2^2``."""
        return math.sqrt(self.vertical_rate ** 2 + self.r ** 2 / self.B)


def derive_change_of_variables(c):
    """Reduce ``c`` (an :class:`EllipticCoefficients`) to its canonical form."""
    if not isinstance(c, EllipticCoefficients):
        raise DomainError("expected EllipticCoefficients")
    A = c.sigma1 ** 2 * (1.0 - c.rho ** 2)
    B = c.sigma2 ** 2
    a = c.alpha1 - c.rho * c.sigma1 * c.alpha2 / c.sigma2
    m2 = a * a / (4.0 * A) + c.alpha2 ** 2 / (4.0 * B) + c.r ** 2
    return DerivedChangeOfVariables(
        s_slope=c.rho * c.sigma1 / c.sigma2,
        beta=a / (2.0 * A),
        vertical_rate=c.alpha2 / (2.0 * B),
        A=A, B=B, mass=math.sqrt(m2), width=c.width, r=c.r)


def shear(x, y, d):
    """``s = c y - x``."""
    return d.s_slope * np.asarray(y, dtype=float) - np.asarray(x, dtype=float)


def strip_general_mass(y, c):
    """Solution for constant unit data on ``y = 0`` and zero on ``y = l``."""
    d = derive_change_of_variables(c)
    y = np.asarray(y, dtype=float)
    om = d.vertical_screening
    l = c.width
    if om == 0.0:
        base = 1.0 - y / l
    else:
        base = np.exp(-om * y) * -np.expm1(-2.0 * om * (l - y)) / -math.expm1(-2.0 * om * l)
    return np.exp(-d.vertical_rate * y) * base


def halfplane_general_mass(y, c):
    """Bounded solution for constant unit data on the half-plane."""
    d = derive_change_of_variables(c)
    return np.exp(-(d.vertical_rate + d.vertical_screening) * np.asarray(y, dtype=float))


def _check_strip_y(y, c):
    if not (math.isfinite(y) and 0.0 <= y <= c.width):
        raise DomainError(f"y must lie in [0, {c.width}], got {y!r}")


def green_strip_general(x, y, c, tol=1e-12, full_output=False):
    """Strip kernel of the general operator at offsets ``x`` (vectorised) and height ``y``.

    Uses the mode series once ``kappa |s| >= X_SWITCH`` and the rescaled
    canonical kernel otherwise, where the series converges too slowly.

    Raises
    ------
    SingularityError
        At ``s = 0`` on the data line ``y = 0``.
    """
    _check_strip_y(y, c)
    d = derive_change_of_variables(c)
    xs = np.asarray(x, dtype=float)
    scalar = xs.ndim == 0
    xs = np.atleast_1d(xs)
    if not np.all(np.isfinite(xs)):
        raise DomainError("x must be finite")
    s = shear(xs, y, d)
    if y == 0.0 and np.any(s == 0.0):
        raise SingularityError("general strip kernel is singular at s = 0 on y = 0")
    vals = np.zeros_like(s)
    errs = np.zeros_like(s)
    if 0.0 < y < c.width:
        env = np.exp(d.beta * s - d.vertical_rate * y)
        kap = d.kappa
        far = kap * np.abs(s) >= X_SWITCH
        if far.any():
            v, e = _general_series(np.abs(s[far]), y, d, tol / max(env[far].max(), 1e-300))
            vals[far], errs[far] = v, e
        near = ~far
        if near.any():
            yt = math.pi * y / c.width
            v, e = green_strip(kap * np.abs(s[near]), yt, d.canonical_r,
                               tol=tol / (kap * max(env[near].max(), 1e-300)), full_output=True)
            vals[near], errs[near] = kap * np.atleast_1d(v), kap * np.atleast_1d(e)
        vals *= env
        errs *= env
    if full_output:
        return (float(vals[0]), float(errs[0])) if scalar else (vals, errs)
    return float(vals[0]) if scalar else vals


def _general_series(abs_s, y, d, tol):
    # |k sin e^{-R_k|s|} / R_k| <= e^{-kappa k |s|} / kappa since R_k >= kappa k
    kap = d.kappa
    pref = d.strip_prefactor
    t = kap * abs_s.min()
    kmax = int(series_terms(t, tol * kap / pref))
    k = np.arange(1, kmax + 1, dtype=float)
    Rk = d.R(k)
    coef = k * np.sin(k * math.pi * y / d.width) / Rk
    vals = pref * (np.exp(-np.outer(abs_s, Rk)) @ coef)
    errs = pref / kap * np.exp(-kap * abs_s * (kmax + 1)) / -np.expm1(-kap * abs_s)
    return vals, errs


def green_halfplane_general_closed(x, y, c):
    """Closed form ``e^{beta s - q y} m y K1(m rho) / (pi sqrt(AB) rho)``,
    ``rho = sqrt(y^2/B + s^2/A)``; vectorised over ``x``."""
    d = derive_change_of_variables(c)
    if not (math.isfinite(y) and y >= 0):
        raise DomainError("y must be finite and >= 0")
    xs = np.asarray(x, dtype=float)
    s = shear(xs, y, d)
    if y == 0.0:
        if np.any(s == 0.0):
            raise SingularityError("general half-plane kernel is singular at s = 0 on y = 0")
        out = np.zeros_like(s)
        return float(out) if out.ndim == 0 else out
    out = _halfplane_general_values(np.atleast_1d(s), y, d)
    return float(out[0]) if xs.ndim == 0 else out


def _halfplane_general_values(s, y, d):
    rho2 = y * y / d.B + s * s / d.A
    rho = np.sqrt(rho2)
    env = np.exp(d.beta * s - d.vertical_rate * y)
    return env * y * scaled_k1_product(d.mass * rho) / (math.pi * math.sqrt(d.A * d.B) * rho2)


def green_halfplane_general(x, y, c, tol=1e-10, full_output=False):
    """General half-plane kernel from its frequency integral (scalar ``x``).

    The integrand ``w sin(w y) e^{-R(w)|s|} / R(w)`` is cut where
    ``sqrt(A/B) e^{-sqrt(B/A)|s| W} / (sqrt(B/A)|s|)`` meets the tolerance,
    or, for small ``|s|``, summed between zeros of ``sin(w y)`` after
    subtracting ``sqrt(A/B) sin(w y) e^{-sqrt(B/A)|s| w}``.

    Raises
    ------
    AccuracyError
        If the tolerance is not met.
    """
    if not (math.isfinite(y) and y >= 0):
        raise DomainError("y must be finite and >= 0")
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    d = derive_change_of_variables(c)
    s = float(shear(x, y, d))
    if y == 0.0:
        if s == 0.0:
            raise SingularityError("general half-plane kernel is singular at s = 0 on y = 0")
        return (0.0, 0.0) if full_output else 0.0
    env = math.exp(d.beta * s - d.vertical_rate * y)
    pref = d.halfplane_prefactor * env
    amp = math.sqrt(d.A / d.B)
    decay = abs(s) / amp

    def f(w):
        R = d.R_inf(w)
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(R > 0, w / np.where(R > 0, R, 1.0), amp)
        return ratio * np.sin(w * y) * np.exp(-abs(s) * R)

    qtol = 0.5 * tol / pref
    half_period = math.pi / y
    cut = math.log(amp / (decay * qtol)) / decay if decay > 0 else math.inf
    if decay > 0 and cut / half_period <= 400:
        cut = max(cut, 1.0)
        edges = graded_edges(0.0, cut, min(y, 1.0 / decay, 1.0), cap=min(half_period, 2.0))
        res = integrate(f, edges, 0.5 * qtol)
        value = res.value
        err = res.error + amp * math.exp(-decay * cut) / decay
    else:
        def g(w):
            return f(w) - amp * np.sin(w * y) * np.exp(-decay * w)

        res = integrate_oscillatory(g, 0.0, half_period, 0.5 * qtol)
        value = res.value + amp * y / (y * y + decay * decay)
        err = res.error
    value *= pref
    err *= pref
    if not res.converged or err > tol:
        raise AccuracyError("general half-plane integral did not reach tolerance", value, err)
    return (value, err) if full_output else value


class GeneralStripKernel:
    """Vectorised strip kernel in the shear variable, for convolution.

    ``values(sigma, y)`` returns ``K(sigma, y)`` such that the solution is
    ``V(x, y) = int phi(x - c y + sigma) K(sigma, y) d sigma``.
    """

    def __init__(self, c, tol):
        self.c = c
        self.d = derive_change_of_variables(c)
        self.tol = tol

    def values(self, sigma, y):
        d = self.d
        sigma = np.asarray(sigma, dtype=float)
        env = np.exp(d.beta * sigma - d.vertical_rate * y)
        kap = d.kappa
        g, err = strip_kernel_values(kap * sigma, math.pi * y / d.width, d.canonical_r,
                                     self.tol / kap)
        return kap * env * g, kap * env * err

    def near_tables(self, ys):
        d = self.d
        if d.canonical_r > 0:
            near_kernel_tables([math.pi * y / d.width for y in ys], d.canonical_r, self.tol)


def normalization_diagnostic(c, y, tol=1e-9):
    """Compare the kernel's integral over ``x`` with the constant-data solution.

    A correctly normalised kernel gives the ratio 1.  The report's
    ``metadata`` records the prefactor used and the ratio, so a prefactor
    off by a constant factor shows up directly.
    """
    d = derive_change_of_variables(c)
    if not 0.0 < y < c.width:
        raise DomainError("y must be strictly inside the strip")
    kern = GeneralStripKernel(c, 0.01 * tol)
    # decay of the kernel on either side: R_1 -|beta|
    rate = float(d.R(1)) - abs(d.beta)
    cut = (math.log(1.0 / tol) + 10.0) / rate
    scale = min(y, c.width - y) / max(d.kappa, 1e-12)
    pos = graded_edges(0.0, cut, 0.25 * scale)
    total = 0.0
    for sign in (1.0, -1.0):
        res = integrate(lambda t: kern.values(sign * t, y)[0], pos, 0.1 * tol)
        total += res.value
    expected = float(strip_general_mass(y, c))
    ratio = total / expected if expected != 0 else math.nan
    report = OracleReport.from_values(
        "strip_normalization", np.array([total]), np.array([expected]), tol,
        metadata={"y": y, "prefactor": d.strip_prefactor, "ratio": ratio,
                  "calibrated_prefactor": d.strip_prefactor / ratio if ratio else math.nan})
    return report
