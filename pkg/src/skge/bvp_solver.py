"""Dirichlet solvers: convolution of boundary data with a Green kernel.

Every kernel is written in a shifted variable ``sigma`` so that

    V(x, y) = int phi(u* + sigma) K(sigma, y) d sigma,

with ``u* = x`` for the canonical operator and ``u* = x - c y`` for the
general one.  The integral is folded about ``sigma = 0`` and the tail
constants of ``phi`` are pulled out:

    V = left M_-(y) + right M_+(y)
        + int_0^Xi [(phi(u* + xi) - right) K(xi) + (phi(u* - xi) - left) K(-xi)] dxi,

where ``M_+`` and ``M_-`` are the kernel's masses on either side of zero.
For data that equal their tail constants outside ``[-R, R]`` the bracket
vanishes beyond ``Xi = R + |u*|`` and nothing is truncated; otherwise
``Xi`` is chosen from the kernel's tail bound.  All points of a grid row are
integrated together by :func:`skge.quadrature.integrate_batch`.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math
from typing import Optional

import numpy as np

from .boundary import BoundaryFunction, constant
from .errors import AccuracyError, DomainError
from .fields import FieldGrid
from .general_elliptic import (EllipticCoefficients, GeneralStripKernel,
                               _halfplane_general_values, derive_change_of_variables,
                               halfplane_general_mass, strip_general_mass)
from .halfplane_kernel import halfplane_closed_batch, halfplane_mass, halfplane_tail_bound
from .quadrature import graded_edges, integrate, integrate_batch
from .strip_kernel import near_kernel_tables, strip_kernel_values, strip_mass, strip_tail_bound

_MAX_XI = 5000.0


@dataclass(frozen=True)
class GridSpec:
    """Tensor grid ``nx`` points on ``[x_min, x_max]`` by ``ny`` on ``[y_min, y_max]``."""

    x_min: float
    x_max: float
    nx: int
    y_min: float
    y_max: float
    ny: int

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise DomainError("grid counts must be positive")
        for lo, hi, n, name in ((self.x_min, self.x_max, self.nx, "x"),
                                (self.y_min, self.y_max, self.ny, "y")):
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise DomainError(f"{name} range must be finite")
            if (n > 1 and not hi > lo) or (n == 1 and hi != lo):
                raise DomainError(f"{name} range must be increasing (equal when n = 1)")

    @property
    def xs(self):
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def ys(self):
        return np.linspace(self.y_min, self.y_max, self.ny)


@dataclass(frozen=True)
class KernelSpec:
    """Which kernel to convolve with.

    ``domain`` is ``"strip"`` or ``"halfplane"``.  With ``coefficients`` set
    the general operator's kernel is used (and ``r`` is ignored in favour of
    ``coefficients.r``).
    """

    domain: str
    r: float = 0.0
    coefficients: Optional[EllipticCoefficients] = None

    def __post_init__(self):
        if self.domain not in ("strip", "halfplane"):
            raise DomainError(f"unknown domain {self.domain!r}")
        if not (math.isfinite(self.r) and self.r >= 0):
            raise DomainError("r must be finite and >= 0")

    @property
    def height(self):
        if self.domain == "halfplane":
            return math.inf
        return self.coefficients.width if self.coefficients is not None else math.pi

    def build(self, tol):
        if self.coefficients is None:
            if self.domain == "strip":
                return _CanonicalStrip(self.r, tol)
            return _CanonicalHalfPlane(self.r)
        if self.domain == "strip":
            return _GeneralStrip(self.coefficients, tol)
        return _GeneralHalfPlane(self.coefficients)


def _kernel_tol(tol):
    """Kernel accuracy for a convolution tolerance ``tol``.

    The kernel error is multiplied by the L1 norm of the data on the window,
    so it is kept three decades tighter; rounding down to a power of ten lets
    cached near-field tables be reused across calls.
    """
    return max(10.0 ** math.floor(math.log10(tol) - 3.0), 1e-14)


class _CanonicalStrip:
    even = True

    def __init__(self, r, tol):
        self.r = r
        self.ktol = _kernel_tol(tol)

    def center(self, x, y):
        return x

    def scale(self, y):
        return min(y, math.pi - y)

    def prepare(self, ys):
        if self.r > 0:
            near_kernel_tables([y for y in ys if 0 < y < math.pi], self.r, self.ktol)

    def values(self, xi, y):
        return strip_kernel_values(xi, y, self.r, self.ktol)

    def mass(self, y):
        return float(strip_mass(y, self.r)), 0.0

    def upper_mass(self, y):
        return 0.5 * float(strip_mass(y, self.r)), 0.0

    def tail(self, xi, y):
        return 2.0 * float(strip_tail_bound(xi))


class _CanonicalHalfPlane:
    even = True

    def __init__(self, r):
        self.r = r

    def center(self, x, y):
        return x

    def scale(self, y):
        return y

    def prepare(self, ys):
        pass

    def values(self, xi, y):
        v = halfplane_closed_batch(xi, y, self.r)
        return v, 1e-14 * np.abs(v)

    def mass(self, y):
        return float(halfplane_mass(y, self.r)), 0.0

    def upper_mass(self, y):
        return 0.5 * float(halfplane_mass(y, self.r)), 0.0

    def tail(self, xi, y):
        return 2.0 * float(halfplane_tail_bound(xi, y, self.r))


class _Asymmetric:
    """Shared pieces of the general kernels, which are not even in ``sigma``."""

    def __init__(self, c):
        self.c = c
        self.d = derive_change_of_variables(c)
        self.even = self.d.beta == 0.0
        self._upper = {}

    def center(self, x, y):
        return x - self.d.s_slope * y

    def upper_mass(self, y):
        if self.even:
            return 0.5 * self.mass(y)[0], 0.0
        if y not in self._upper:
            target = 1e-13 * max(self.mass(y)[0], 1e-300)
            cut = 1.0
            while self.tail(cut, y) > target and cut < 1e30:
                cut *= 2.0
            edges = graded_edges(0.0, cut, self.scale(y) / 8.0)
            res = integrate(lambda t: self.values(t, y)[0], edges, target)
            self._upper[y] = (res.value, res.error + self.tail(cut, y))
        return self._upper[y]


class _GeneralStrip(_Asymmetric):
    def __init__(self, c, tol):
        super().__init__(c)
        self.kernel = GeneralStripKernel(c, _kernel_tol(tol))
        d = self.d
        r1 = float(d.R(1))
        # split e^{-R_k |s|} so one part beats e^{beta s} and the other sums over k
        self._theta = (r1 - abs(d.beta)) / (2.0 * r1)
        self._delta = 0.5 * (r1 - abs(d.beta))

    def scale(self, y):
        return min(y, self.c.width - y) * math.sqrt(self.d.A / self.d.B)

    def prepare(self, ys):
        self.kernel.near_tables([y for y in ys if 0 < y < self.c.width])

    def values(self, sigma, y):
        return self.kernel.values(sigma, y)

    def mass(self, y):
        return float(strip_general_mass(y, self.c)), 0.0

    def tail(self, xi, y):
        d = self.d
        kap = d.kappa
        geo = -math.expm1(-self._theta * kap * xi)
        if geo <= 0:
            return math.inf
        one = (d.strip_prefactor * math.exp(-d.vertical_rate * y) / kap
               * math.exp(-self._delta * xi) / (self._delta * geo))
        return 2.0 * one


class _GeneralHalfPlane(_Asymmetric):
    def scale(self, y):
        return y * math.sqrt(self.d.A / self.d.B)

    def prepare(self, ys):
        pass

    def values(self, sigma, y):
        v = _halfplane_general_values(np.asarray(sigma, dtype=float), y, self.d)
        return v, 1e-14 * np.abs(v)

    def mass(self, y):
        return float(halfplane_general_mass(y, self.c)), 0.0

    def tail(self, xi, y):
        # |K| <= C A e^{(|beta| - nu)|s|} zK1(nu |s|) / s^2 with nu = m / sqrt(A) >= |beta|,
        # and z K1(z) <= min(1, sqrt(pi z / 2) e^{-z} (1 + 1/z))
        d = self.d
        C = math.exp(-d.vertical_rate * y) * y / (math.pi * math.sqrt(d.A * d.B))
        nu = d.mass / math.sqrt(d.A)
        b = abs(d.beta)
        gap = max(nu - b, 0.0)
        bounds = []
        if b == 0.0:
            bounds.append(C * d.A / xi)
        if nu > 0:
            amp = C * d.A * math.sqrt(0.5 * math.pi * nu) * (1.0 + 1.0 / (nu * xi))
            if gap > 0:
                bounds.append(amp * xi ** -1.5 * math.exp(-gap * xi) / gap)
            bounds.append(amp * 2.0 / math.sqrt(xi) * math.exp(-gap * xi))
        return 2.0 * min(bounds) if bounds else math.inf


def _truncation_radius(kern, phi, y, budget):
    """Smallest doubling ``Xi`` with ``deviation * tail(Xi) <= budget`` (capped)."""
    dev = phi.deviation_bound
    if dev == 0.0:
        return 0.0, 0.0
    xi = max(kern.scale(y), 1e-3)
    while xi < _MAX_XI and dev * kern.tail(xi, y) > budget:
        xi *= 1.5
    xi = min(xi, _MAX_XI)
    return xi, dev * kern.tail(xi, y)


def _convolve_row(kern, phi, xs, y, tol):
    """Convolution at every ``x`` in ``xs`` for one interior height ``y``.

    Returns ``(values, errors, converged)``.
    """
    xs = np.asarray(xs, dtype=float)
    n = xs.size
    ustar = kern.center(xs, y)
    left, right = phi.left_constant, phi.right_constant
    m_tot, m_err = kern.mass(y)
    m_up, up_err = kern.upper_mass(y)
    base = left * (m_tot - m_up) + right * m_up
    base_err = (abs(left) + abs(right)) * (m_err + up_err)

    dev = phi.deviation_bound
    xi_tail, trunc_err = _truncation_radius(kern, phi, y, 0.25 * tol)
    if phi.compact:
        xi_data = phi.support_radius + np.abs(ustar)
        xis = np.minimum(xi_data, xi_tail)
        trunc = np.where(xi_data > xi_tail, trunc_err, 0.0)
    else:
        xis = np.full(n, xi_tail)
        trunc = np.full(n, trunc_err)

    scale = kern.scale(y)
    cap = min(1.0, phi.length_scale)
    edges = []
    for i in range(n):
        top = xis[i]
        if top <= 0.0:
            edges.append(np.array([0.0]))
            continue
        pts = graded_edges(0.0, top, scale / 8.0, cap=cap)
        extra = [abs(b - ustar[i]) for b in phi.breakpoints]
        extra = [e for e in extra if 0.0 < e < top]
        if extra:
            pts = np.unique(np.concatenate([pts, extra]))
        edges.append(pts)

    kerr = np.zeros(n)

    def f(t, owner):
        u = ustar[owner]
        kp, ep = kern.values(t, y)
        if kern.even:
            km, em = kp, ep
        else:
            km, em = kern.values(-t, y)
        np.maximum.at(kerr, owner, np.maximum(ep, em))
        return (phi(u + t) - right) * kp + (phi(u - t) - left) * km

    vals, qerr, ok = integrate_batch(f, edges, 0.5 * tol)
    # kernel error times the L1 norm of (phi - tail constants) on the window
    kernel_err = kerr * 2.0 * dev * xis
    errs = qerr + kernel_err + trunc + base_err
    ok = ok & (errs <= tol)
    return base + vals, errs, ok


def convolve_kernel(kernel, phi, x, y, tol, full_output=False):
    """Solution value at one interior point ``(x, y)``.

    Raises
    ------
    AccuracyError
        If the refinement cannot meet ``tol``; carries the best estimate.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    if not (0.0 < y < kernel.height):
        raise DomainError(f"y must be strictly inside the domain, got {y!r}")
    kern = kernel.build(tol)
    kern.prepare([y])
    v, e, ok = _convolve_row(kern, phi, np.array([float(x)]), float(y), tol)
    if not ok[0]:
        raise AccuracyError("convolution did not reach tolerance", float(v[0]), float(e[0]))
    return (float(v[0]), float(e[0])) if full_output else float(v[0])


def _rows(kern, phi, xs, ys, tol, threads):
    interior = [y for y in ys if 0.0 < y]
    kern.prepare(interior)
    jobs = [(i, y) for i, y in enumerate(ys)]

    def run(job):
        return _convolve_row(kern, phi, xs, job[1], tol)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, jobs))
    return [run(j) for j in jobs]


def _solve(kernel, phi, grid, tol, threads=None, top=None):
    """Field of ``phi`` convolved with ``kernel`` on ``grid``; rows at the
    domain edges are filled from the data (``top`` on the far edge)."""
    if not tol > 0:
        raise DomainError("tol must be positive")
    xs, ys = grid.xs, grid.ys
    height = kernel.height
    if ys[0] < 0 or ys[-1] > height:
        raise DomainError(f"grid heights must lie in [0, {height}]")
    vals = np.zeros((ys.size, xs.size))
    errs = np.zeros_like(vals)
    failed = np.zeros(vals.shape, dtype=bool)
    inner = [i for i, y in enumerate(ys) if 0.0 < y < height]
    if inner:
        kern = kernel.build(tol)
        results = _rows(kern, phi, xs, [ys[i] for i in inner], tol, threads)
        for i, (v, e, ok) in zip(inner, results):
            vals[i], errs[i], failed[i] = v, e, ~ok
    for i, y in enumerate(ys):
        if y == 0.0:
            vals[i] = phi(xs)
        elif y == height:
            vals[i] = top(xs) if top is not None else 0.0
    return FieldGrid(xs, ys, vals, errs, failed)


def _as_grid(grid):
    if isinstance(grid, GridSpec):
        return grid
    if isinstance(grid, (tuple, list)) and len(grid) == 2:
        return _ArrayGrid(np.asarray(grid[0], float), np.asarray(grid[1], float))
    raise DomainError("grid must be a GridSpec or an (xs, ys) pair")


@dataclass(frozen=True)
class _ArrayGrid:
    xs: np.ndarray
    ys: np.ndarray


def solve_strip(phi_bottom, phi_top, grid, r, tol=1e-8, threads=None):
    """Strip ``0 <= y <= pi`` with data on both edges.

    The top data are handled by solving the bottom problem at ``pi - y``.
    ``phi_top`` may be ``None`` for zero data.
    """
    grid = _as_grid(grid)
    kernel = KernelSpec("strip", r)
    zero = constant(0.0)
    bottom = _solve(kernel, phi_bottom or zero, grid, tol, threads,
                    top=None)
    if phi_top is None:
        return bottom
    flipped_grid = _ArrayGrid(grid.xs, (math.pi - grid.ys)[::-1])
    top = _solve(kernel, phi_top, flipped_grid, tol, threads).flipped(math.pi)
    vals = bottom.values + top.values
    # boundary rows come straight from the data
    vals[grid.ys == 0.0] = (phi_bottom or zero)(grid.xs)
    vals[grid.ys == math.pi] = phi_top(grid.xs)
    return FieldGrid(grid.xs, grid.ys, vals, bottom.err_estimates + top.err_estimates,
                     bottom.failed | top.failed)


def solve_halfplane(phi, grid, r, tol=1e-8, threads=None):
    """Upper half-plane, bounded solution (for ``r = 0`` the Poisson extension)."""
    return _solve(KernelSpec("halfplane", r), phi, _as_grid(grid), tol, threads)


def solve_strip_general(phi, grid, c, tol=1e-8, threads=None):
    """General operator on ``0 <= y <= c.width`` with data on ``y = 0``, zero on top."""
    return _solve(KernelSpec("strip", c.r, c), phi, _as_grid(grid), tol, threads)


def solve_halfplane_general(phi, grid, c, tol=1e-8, threads=None):
    """General operator on the upper half-plane, bounded solution."""
    return _solve(KernelSpec("halfplane", c.r, c), phi, _as_grid(grid), tol, threads)


class FieldEvaluator:
    """Off-grid evaluation of a solved field through the convolution itself.

    Calling it with coordinate arrays returns values at those points; points
    sharing a height are integrated together.
    """

    def __init__(self, kernel, phi, tol=1e-9, phi_top=None):
        if phi_top is not None and (kernel.domain != "strip" or kernel.coefficients is not None):
            raise DomainError("top data are only supported on the canonical strip")
        self.kernel = kernel
        self.phi = phi
        self.phi_top = phi_top
        self.tol = tol
        self._kern = kernel.build(tol)

    @property
    def height(self):
        return self.kernel.height

    @property
    def r(self):
        c = self.kernel.coefficients
        return self.kernel.r if c is None else c.r

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        out = np.empty(x.shape)
        fx, fy = x.ravel(), y.ravel()
        flat = out.ravel()
        parts = [(self.phi, fy)]
        if self.phi_top is not None:
            parts.append((self.phi_top, math.pi - fy))
        flat[:] = 0.0
        for phi, heights in parts:
            uniq = np.unique(heights)
            if np.any(uniq <= 0) or np.any(uniq >= self.height):
                raise DomainError("evaluation points must be interior")
            self._kern.prepare(list(uniq))
            for yy in uniq:
                sel = heights == yy
                v, e, ok = _convolve_row(self._kern, phi, fx[sel], float(yy), self.tol)
                if not ok.all():
                    raise AccuracyError("field evaluation missed its tolerance",
                                        float(v[~ok][0]), float(e[~ok][0]))
                flat[sel] += v
        return flat.reshape(x.shape)
