"""Finite-difference reference solutions on a truncated rectangle.

The operator

    sigma1^2 V_xx + 2 rho sigma1 sigma2 V_xy + sigma2^2 V_yy
        + alpha1 V_x + alpha2 V_y - r^2 V

is discretised with the standard second-order 9-point stencil (5-point
Laplacian part, centred first differences, 4-corner cross difference) on a
uniform grid of spacing ``h``.  Dirichlet values on all four edges are
supplied by the caller.  The sparse system is solved with algebraic
multigrid (pyamg, Ruge-Stuben hierarchy as a BiCGStab preconditioner),
falling back to a direct sparse factorisation if the residual target is
missed.
"""

from dataclasses import dataclass
import math
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DomainError, ShapeError, SolverError, StabilityError
from .fields import FieldGrid, OracleReport
from .general_elliptic import EllipticCoefficients, derive_change_of_variables, strip_general_mass

# the cross-difference stencil is not monotone for large |rho|
MAX_RHO = 0.6


@dataclass(frozen=True)
class FdProblem:
    """Dirichlet problem on ``[x_lo, x_hi] x [y_lo, y_hi]`` with spacing ``h``.

    ``hy`` optionally sets a different vertical spacing, needed when the
    height (for example pi) is not a multiple of ``h``.  ``bottom`` and ``top`` hold ``nx + 1`` values along x, ``left`` and
    ``right`` hold ``ny + 1`` values along y (corners are taken from
    ``bottom``/``top``).
    """

    coefficients: EllipticCoefficients
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float
    h: float
    bottom: np.ndarray
    top: np.ndarray
    left: np.ndarray
    right: np.ndarray
    hy: Optional[float] = None

    @property
    def h_y(self):
        return self.h if self.hy is None else self.hy

    @property
    def nx(self):
        return int(round((self.x_hi - self.x_lo) / self.h))

    @property
    def ny(self):
        return int(round((self.y_hi - self.y_lo) / self.h_y))

    @property
    def xs(self):
        return self.x_lo + self.h * np.arange(self.nx + 1)

    @property
    def ys(self):
        return self.y_lo + self.h_y * np.arange(self.ny + 1)

    def validate(self):
        if not (self.h > 0 and self.h_y > 0):
            raise DomainError("spacings must be positive")
        for lo, hi, hh, name in ((self.x_lo, self.x_hi, self.h, "x"),
                                 (self.y_lo, self.y_hi, self.h_y, "y")):
            n = (hi - lo) / hh
            if not hi > lo or abs(n - round(n)) > 1e-8 * max(1.0, n) or round(n) < 2:
                raise DomainError(f"h must divide the {name} edge into at least 2 cells")
        c = self.coefficients
        if self.h * abs(c.alpha1) > 2 * c.sigma1 ** 2 or self.h_y * abs(c.alpha2) > 2 * c.sigma2 ** 2:
            raise StabilityError("h |alpha_i| <= 2 sigma_i^2 is violated; refine the grid")
        if abs(c.rho) > MAX_RHO:
            raise StabilityError(f"|rho| > {MAX_RHO}: the cross stencil is not trustworthy")
        for name, n in (("bottom", self.nx), ("top", self.nx), ("left", self.ny),
                        ("right", self.ny)):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (n + 1,):
                raise ShapeError(f"{name} must hold {n + 1} values, got shape {v.shape}")
            if not np.all(np.isfinite(v)):
                raise DomainError(f"{name} values must be finite")


def _stencil(c, hx, hy):
    a = c.sigma1 ** 2 / hx ** 2
    b = c.sigma2 ** 2 / hy ** 2
    q = 2.0 * c.rho * c.sigma1 * c.sigma2 / (4.0 * hx * hy)
    d1 = c.alpha1 / (2.0 * hx)
    d2 = c.alpha2 / (2.0 * hy)
    return {(0, 0): -2.0 * a - 2.0 * b - c.r ** 2,
            (1, 0): a + d1, (-1, 0): a - d1,
            (0, 1): b + d2, (0, -1): b - d2,
            (1, 1): q, (-1, -1): q, (1, -1): -q, (-1, 1): -q}


def assemble(p):
    """Sparse matrix and right-hand side for the interior unknowns.

    Unknowns are ordered row by row (y outer, x inner).  The matrix is the
    negated operator, which is an M-matrix when ``rho = 0`` and the
    drift condition holds.
    """
    p.validate()
    nx, ny = p.nx, p.ny
    full = np.zeros((ny + 1, nx + 1))
    full[:, 0] = p.left
    full[:, -1] = p.right
    full[0, :] = p.bottom
    full[-1, :] = p.top
    mx, my = nx - 1, ny - 1
    jj, ii = np.meshgrid(np.arange(1, ny), np.arange(1, nx), indexing="ij")
    row = ((jj - 1) * mx + (ii - 1)).ravel()
    rhs = np.zeros(mx * my)
    rows, cols, data = [], [], []
    for (di, dj), w in _stencil(p.coefficients, p.h, p.h_y).items():
        if w == 0.0:
            continue
        ni, nj = (ii + di).ravel(), (jj + dj).ravel()
        inner = (ni >= 1) & (ni <= nx - 1) & (nj >= 1) & (nj <= ny - 1)
        rows.append(row[inner])
        cols.append(((nj[inner] - 1) * mx + (ni[inner] - 1)))
        data.append(np.full(inner.sum(), -w))
        edge = ~inner
        np.add.at(rhs, row[edge], w * full[nj[edge], ni[edge]])
    A = sp.csr_matrix((np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(mx * my, mx * my))
    return A, rhs, full


def _amg_solve(A, b, lin_tol):
    try:
        import pyamg
    except ImportError:  # pragma: no cover - optional accelerator
        return None
    ml = pyamg.ruge_stuben_solver(A)
    return ml.solve(b, tol=lin_tol, accel="bicgstab", maxiter=300)


def assemble_and_solve(p, lin_tol=1e-10):
    """Solve the discrete problem; ``||A v - b|| <= lin_tol ||b||`` is enforced.

    Raises
    ------
    StabilityError
        If the drift or cross-term conditions fail.
    SolverError
        If neither the multigrid iteration nor the direct fallback meets the
        residual bound.
    """
    if not lin_tol > 0:
        raise DomainError("lin_tol must be positive")
    A, b, full = assemble(p)
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        v = np.zeros(A.shape[0])
    else:
        v = _amg_solve(A, b, lin_tol)
        if v is None or np.linalg.norm(A @ v - b) > lin_tol * bnorm:
            v = spla.spsolve(A.tocsc(), b)
        if not np.all(np.isfinite(v)) or np.linalg.norm(A @ v - b) > lin_tol * bnorm:
            raise SolverError("finite-difference solve missed the residual bound")
    full = full.copy()
    full[1:-1, 1:-1] = v.reshape(p.ny - 1, p.nx - 1)
    return FieldGrid(p.xs, p.ys, full, np.zeros_like(full))


def compare_fields(a, b, tol):
    """Deviation report between two fields on the same grid."""
    if not a.same_grid(b):
        raise ShapeError("fields live on different grids")
    return OracleReport.from_values("field_comparison", a.values, b.values, tol,
                                    metadata={"shape": list(a.shape)})


def restrict(field, xs, ys):
    """Sub-field at the grid nodes nearest to ``xs`` and ``ys`` (must coincide to 1e-9)."""
    ix = np.array([int(np.argmin(np.abs(field.xs - x))) for x in xs])
    iy = np.array([int(np.argmin(np.abs(field.ys - y))) for y in ys])
    if np.abs(field.xs[ix] - xs).max() > 1e-9 or np.abs(field.ys[iy] - ys).max() > 1e-9:
        raise ShapeError("requested points are not grid nodes")
    return FieldGrid(np.asarray(xs, float), np.asarray(ys, float),
                     field.values[np.ix_(iy, ix)], field.err_estimates[np.ix_(iy, ix)])


def strip_window(c, support_radius, h, decay_digits=7.0):
    """Half-width ``L`` of a strip rectangle wide enough that side values set
    from the far-field formula are accurate to ``10^-decay_digits``."""
    d = derive_change_of_variables(c)
    rate = float(d.R(1)) - abs(d.beta)
    L = support_radius + abs(d.s_slope) * c.width + decay_digits * math.log(10.0) / rate
    return h * math.ceil(L / h)


def strip_problem(c, phi, h, half_width=None, top: Optional[Callable] = None, ny=None):
    """FD problem for data ``phi`` on ``y = 0`` of the strip ``0 <= y <= c.width``.

    Side values are ``left_constant`` (or ``right_constant``) times the
    constant-data profile, exact once ``phi`` has settled to its tail values.
    The top edge is zero unless ``top`` is given.  The vertical spacing is
    ``c.width / ny`` with ``ny = round(c.width / h)`` by default; pass ``ny``
    explicitly to keep the rows of successive refinements nested.
    """
    if half_width is None:
        radius = phi.support_radius if math.isfinite(phi.support_radius) else 0.0
        half_width = strip_window(c, radius, h)
    n_y = max(int(round(c.width / h)), 2) if ny is None else int(ny)
    hy = c.width / n_y
    xs = -half_width + h * np.arange(int(round(2 * half_width / h)) + 1)
    ys = hy * np.arange(n_y + 1)
    prof = strip_general_mass(ys, c)
    prof[-1] = 0.0
    top_vals = np.zeros_like(xs) if top is None else np.asarray(top(xs), dtype=float)
    return FdProblem(c, xs[0], xs[-1], 0.0, c.width, h,
                     np.asarray(phi(xs), dtype=float), top_vals,
                     phi.left_constant * prof, phi.right_constant * prof, hy=hy)


def discrete_minimum(field):
    """Smallest interior value of an FD field (for the discrete maximum principle)."""
    return float(field.values[1:-1, 1:-1].min())


def halfplane_problem(c, phi, h, height, top: Callable, half_width=None):
    """FD problem for the half-plane truncated at ``y = height``.

    ``top(xs)`` supplies the values on the artificial upper edge (an analytic
    far-field profile or closed form); the sides use the constant-data
    profile ``exp(-(q + omega) y)`` times the tail constants.
    """
    from .general_elliptic import halfplane_general_mass

    if half_width is None:
        radius = phi.support_radius if math.isfinite(phi.support_radius) else 0.0
        d = derive_change_of_variables(c)
        rate = max(d.mass / math.sqrt(d.A) - abs(d.beta), 0.5)
        half_width = h * math.ceil((radius + abs(d.s_slope) * height
                                    + 7.0 * math.log(10.0) / rate) / h)
    n_y = int(round(height / h))
    if abs(n_y * h - height) > 1e-9 * height:
        raise DomainError("h must divide the truncation height")
    xs = -half_width + h * np.arange(int(round(2 * half_width / h)) + 1)
    ys = h * np.arange(n_y + 1)
    prof = halfplane_general_mass(ys, c)
    return FdProblem(c, xs[0], xs[-1], 0.0, height, h, np.asarray(phi(xs), dtype=float),
                     np.asarray(top(xs), dtype=float),
                     phi.left_constant * prof, phi.right_constant * prof)
