"""Disk solutions of ``(Delta - r^2) V = 0`` and the screened mean-value check.

On a disk of radius ``R`` with boundary values ``psi(theta)`` the solution is

    V(rho, theta) = a0/2 I0(r rho)/I0(r R)
                    + sum_n I_n(r rho)/I_n(r R) (a_n cos n theta + b_n sin n theta),

with the usual Fourier coefficients of ``psi``.  At the centre only the
``n = 0`` mode survives, so every solution satisfies

    V(centre) I0(r R) = (1 / 2 pi) * integral of V over the circle,

which :func:`mean_value_check` tests on any field evaluator.
"""

from dataclasses import dataclass
import math
from typing import Callable, Tuple

import numpy as np

from .errors import DomainError
from .fields import OracleReport
from .specfun import bessel_i


@dataclass(frozen=True)
class DiskProblem:
    """Dirichlet data sampled at ``M`` equispaced angles ``2 pi j / M``."""

    center: Tuple[float, float]
    radius: float
    r: float
    boundary_samples: np.ndarray

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise DomainError("radius must be positive")
        if not (math.isfinite(self.r) and self.r >= 0):
            raise DomainError("r must be finite and >= 0")
        m = np.asarray(self.boundary_samples).size
        if m < 64 or m % 2:
            raise DomainError("need an even number (>= 64) of boundary samples")

    @property
    def angles(self):
        m = np.asarray(self.boundary_samples).size
        return 2.0 * math.pi * np.arange(m) / m

    def fourier(self):
        """``(a, b)`` for ``n = 0 .. M/2`` (``a[0]`` is ``a0``, not ``a0/2``)."""
        psi = np.asarray(self.boundary_samples, dtype=float)
        m = psi.size
        c = np.fft.rfft(psi) / m
        a = 2.0 * c.real
        b = -2.0 * c.imag
        # the Nyquist mode is not doubled
        a[-1] *= 0.5
        b[-1] = 0.0
        return a, b


def bessel_ratio(n, inner, outer):
    """``I_n(inner) / I_n(outer)`` for ``0 <= inner <= outer``; ``(inner/outer)^n``
    is the ``r -> 0`` limit and also an upper bound."""
    n = np.asarray(n)
    if outer == 0.0:
        return np.where(n == 0, 1.0, 0.0) if inner == 0.0 else np.ones(n.shape)
    return np.array([float(bessel_i(int(k), inner)) / float(bessel_i(int(k), outer))
                     for k in np.atleast_1d(n)])


def disk_solution(p, rho, theta, tol=1e-12):
    """Truncated Fourier-Bessel solution at polar point ``(rho, theta)``.

    Terms stop once ``(rho/R)^N sum |coeffs|`` falls below ``tol``, which
    bounds the remainder because each radial ratio is at most ``(rho/R)^n``.

    Raises
    ------
    DomainError
        If ``rho`` is not in ``[0, R)``.
    """
    if not (0.0 <= rho < p.radius):
        raise DomainError(f"rho must lie in [0, {p.radius}), got {rho!r}")
    a, b = p.fourier()
    nmax = a.size - 1
    q = rho / p.radius
    total = float(np.sum(np.abs(a[1:]) + np.abs(b[1:])))
    n_terms = 0
    if q > 0 and total > 0:
        n_terms = nmax
        for n in range(1, nmax + 1):
            if q ** n * total <= tol:
                n_terms = n
                break
    n = np.arange(n_terms + 1)
    if p.r == 0.0:
        ratio = q ** n.astype(float)
    else:
        ratio = bessel_ratio(n, p.r * rho, p.r * p.radius)
    modes = a[:n_terms + 1] * np.cos(n * theta) + b[:n_terms + 1] * np.sin(n * theta)
    modes[0] = 0.5 * a[0]
    return float(np.sum(ratio * modes))


def disk_from_field(evaluator, center, radius, r, m=256):
    """Sample a field on a circle to pose the corresponding disk problem."""
    th = 2.0 * math.pi * np.arange(m) / m
    x = center[0] + radius * np.cos(th)
    y = center[1] + radius * np.sin(th)
    return DiskProblem(tuple(center), radius, r, np.asarray(evaluator(x, y), dtype=float))


def mean_value_check(evaluator: Callable, center, radius, r, tol, n_points=256, height=None):
    """Test ``V(c) I0(r R) = circle average of V`` with an ``n_points`` trapezoid rule.

    ``evaluator(x, y)`` must accept arrays.  ``height`` (or the evaluator's
    own ``height`` attribute) is the domain's upper edge; the circle must
    stay strictly between ``y = 0`` and it.
    """
    if height is None:
        height = getattr(evaluator, "height", math.inf)
    cx, cy = center
    if not (radius > 0 and cy - radius > 0 and cy + radius < height):
        raise DomainError("circle must lie strictly inside the domain")
    th = 2.0 * math.pi * np.arange(n_points) / n_points
    ring = np.asarray(evaluator(cx + radius * np.cos(th), cy + radius * np.sin(th)), float)
    avg = float(ring.mean())
    centre = float(np.asarray(evaluator(np.array([cx]), np.array([cy])), float)[0])
    scaled = centre * float(bessel_i(0, r * radius))
    return OracleReport.from_values(
        "mean_value", np.array([scaled]), np.array([avg]), tol,
        metadata={"center": [cx, cy], "radius": radius, "r": r, "center_value": centre,
                  "circle_average": avg, "deviation": abs(scaled - avg),
                  "n_points": n_points})


def grid_interpolator(field, method="cubic"):
    """Off-grid evaluator of a gridded field (for FD fields)."""
    from scipy.interpolate import RegularGridInterpolator

    interp = RegularGridInterpolator((field.ys, field.xs), field.values, method=method)

    def evaluate(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        return interp(np.stack([y.ravel(), x.ravel()], axis=-1)).reshape(x.shape)

    evaluate.height = float(field.ys[-1])
    return evaluate
