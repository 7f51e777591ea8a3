"""Regular part of the Green function of ``(Delta - r^2) V = 0`` on the strip 0 < y < pi.

Four equivalent evaluations are provided:

* :func:`green_strip_series` -- the eigenfunction series
  ``(1/pi) sum_k k sin(ky) exp(-|x| mu_k) / mu_k`` with ``mu_k = sqrt(k^2 + r^2)``;
* :func:`green_strip_laplace` -- the closed form for ``r = 0``;
* :func:`green_strip_integral` -- a J0 integral over the Laplace kernel's
  derivative, usable close to ``x = 0`` where the series stalls;
* :func:`green_strip_via_j1` -- the Laplace kernel minus a J1 correction.

:func:`green_strip` dispatches between them.  All functions broadcast over
``x``; ``y`` and ``r`` are scalars.  Only the regular part is ever returned:
the ``delta(x) Theta(-y)`` term contributes nothing at points with ``y >= 0``
and boundary rows of solved fields are copied from the boundary data instead.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import AccuracyError, DomainError, SeriesDivergenceError, SingularityError
from .quadrature import graded_edges, integrate_batch
from .specfun import bessel_j0, bessel_j1

X_SWITCH = 0.25
J1_MAX = 0.5818652242815963   # max |J1| on the real line


@dataclass(frozen=True)
class StripKernelPoint:
    """Evaluation point: offset ``x`` (already ``x - u``), height ``y`` and mass ``r``."""

    x: float
    y: float
    r: float = 0.0

    def __post_init__(self):
        _check_y_r(self.y, self.r)


def _check_y_r(y, r):
    if not (math.isfinite(y) and 0.0 <= y <= math.pi):
        raise DomainError(f"y must lie in [0, pi], got {y!r}")
    if not (math.isfinite(r) and r >= 0.0):
        raise DomainError(f"r must be finite and >= 0, got {r!r}")


def _as_x(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("x must be finite")
    return np.atleast_1d(arr), arr.ndim == 0


def _ret(values, scalar):
    return float(values[0]) if scalar else values


def _on_edge(y):
    return y == 0.0 or y == math.pi


def strip_mass(y, r):
    """Integral of the kernel over x: the constant-data solution at height y.

    ``sinh((pi - y) r) / sinh(pi r)``, or ``(pi - y) / pi`` when ``r = 0``.
    """
    y = np.asarray(y, dtype=float)
    if r == 0.0:
        return (math.pi - y) / math.pi
    # exponentially scaled form stays finite for large r
    num = -np.expm1(-2.0 * (math.pi - y) * r)
    den = -math.expm1(-2.0 * math.pi * r)
    return np.exp(-y * r) * num / den


def strip_tail_bound(xi, y=None, r=0.0):
    """Upper bound on ``int_xi^inf |G(t, y)| dt`` for ``xi > 0``."""
    xi = np.asarray(xi, dtype=float)
    return np.exp(-xi) / (math.pi * -np.expm1(-xi))


def _laplace_denominator(x, y):
    # cosh x - cos y without cancellation near the corner (0, 0)
    return 2.0 * np.sinh(0.5 * x) ** 2 + 2.0 * math.sin(0.5 * y) ** 2


def _laplace_values(x, y):
    ax = np.abs(x)
    out = np.empty_like(ax)
    near = ax <= 1.0
    out[near] = math.sin(y) / (2.0 * math.pi * _laplace_denominator(ax[near], y))
    e = np.exp(-ax[~near])
    out[~near] = (math.sin(y) / math.pi) * e / (1.0 - 2.0 * math.cos(y) * e + e * e)
    return out


def green_strip_laplace(x, y):
    """Laplace (r = 0) strip kernel ``sin y / (2 pi (cosh x - cos y))``.

    Raises
    ------
    SingularityError
        At the corner ``(0, 0)`` where the kernel is not defined.
    """
    xs, scalar = _as_x(x)
    _check_y_r(y, 0.0)
    if y == 0.0 and np.any(xs == 0.0):
        raise SingularityError("Laplace strip kernel is singular at (0, 0)")
    if _on_edge(y):
        return _ret(np.zeros_like(xs), scalar)
    return _ret(_laplace_values(xs, y), scalar)


def series_terms(x, tol):
    """Smallest K with ``exp(-|x|(K+1)) / (1 - exp(-|x|)) <= tol``."""
    ax = np.abs(np.asarray(x, dtype=float))
    k1 = np.log(1.0 / (tol * -np.expm1(-ax))) / ax
    return np.maximum(np.ceil(k1) - 1.0, 1.0).astype(int)


def green_strip_series(x, y, r, tol=1e-12, full_output=False):
    """Eigenfunction series of the strip kernel, truncated by a geometric tail bound.

    The discarded terms satisfy ``|k sin(ky) e^{-|x| mu_k} / mu_k| <= e^{-|x| k}``,
    so stopping after ``K`` terms leaves at most
    ``e^{-|x|(K+1)} / (1 - e^{-|x|})``, which is kept below ``tol``.

    Raises
    ------
    SeriesDivergenceError
        If any ``x`` is zero; the terms do not decay there.
    """
    xs, scalar = _as_x(x)
    _check_y_r(y, r)
    if tol <= 0:
        raise DomainError("tol must be positive")
    ax = np.abs(xs)
    if np.any(ax == 0.0):
        raise SeriesDivergenceError("the strip series diverges at x = 0")
    if _on_edge(y):
        vals = np.zeros_like(ax)
        err = np.zeros_like(ax)
    else:
        kmax = int(series_terms(ax.min(), tol))
        k = np.arange(1, kmax + 1, dtype=float)
        mu = np.sqrt(k * k + r * r)
        coef = k * np.sin(k * y) / mu
        vals = np.exp(-np.outer(ax, mu)) @ coef / math.pi
        err = np.exp(-ax * (kmax + 1)) / -np.expm1(-ax) / math.pi
    if full_output:
        return _ret(vals, scalar), _ret(err, scalar)
    return _ret(vals, scalar)


def _sinh_over_denominator_sq(s, y):
    """``sinh s / (cosh s - cos y)^2`` evaluated without overflow."""
    out = np.empty_like(s)
    small = s <= 1.0
    ss = s[small]
    out[small] = np.sinh(ss) / _laplace_denominator(ss, y) ** 2
    e = np.exp(-s[~small])
    d = 1.0 - 2.0 * math.cos(y) * e + e * e
    out[~small] = 2.0 * e * (1.0 - e * e) / (d * d)
    return out


def _integral_cutoff(y, tol):
    # sin y / (2 pi (cosh S - cos y)) <= tol / 4 bounds the discarded tail
    target = 2.0 * math.sin(y) / (math.pi * tol) + math.cos(y)
    return math.acosh(max(target, 1.0 + 1e-12))


def strip_integral_batch(x, y, r, tol):
    """Integral representation for arrays of offsets and heights; ``x = 0`` is allowed.

    After ``s = |x| t`` the integrand is
    ``J0(r sqrt(s^2 - x^2)) sinh s / (cosh s - cos y)^2`` on ``[|x|, inf)``;
    ``|J0| <= 1`` gives the exact tail bound ``1 / (cosh S - cos y)``.
    ``y`` broadcasts against ``x``.  Returns ``(values, errors, converged)``.
    """
    ax, ys = np.broadcast_arrays(np.abs(np.asarray(x, dtype=float)).ravel(),
                                 np.asarray(y, dtype=float).ravel())
    ax, ys = ax.copy(), ys.copy()
    pref = np.sin(ys) / (2.0 * math.pi)
    live = (ys > 0.0) & (ys < math.pi) & (pref > 0.0)
    vals = np.zeros(ax.size)
    errs = np.zeros(ax.size)
    ok = np.ones(ax.size, dtype=bool)
    if not live.any():
        return vals, errs, ok
    idx = np.flatnonzero(live)
    cap = min(2.0, 2.0 * math.pi / max(r, 1e-12))
    edges = []
    tails = np.empty(idx.size)
    for j, i in enumerate(idx):
        a, yy = ax[i], ys[i]
        scale = max(min(yy, math.pi - yy), 1e-3)
        top = max(_integral_cutoff(yy, tol), a + scale)
        edges.append(graded_edges(a, top, 0.5 * scale + 0.25 * a, cap=cap))
        tails[j] = 1.0 / (math.cosh(top) - math.cos(yy))
    x2 = ax[idx] ** 2
    cos_y = np.cos(ys[idx])
    half_sin2 = np.sin(0.5 * ys[idx]) ** 2

    def f(s, owner):
        arg = r * np.sqrt(np.maximum(s * s - x2[owner], 0.0))
        j = bessel_j0(arg) if r > 0 else 1.0
        return j * _sinh_over_denominator_sq_v(s, cos_y[owner], half_sin2[owner])

    v, e, conv = integrate_batch(f, edges, 0.75 * tol / pref[idx])
    vals[idx] = pref[idx] * v
    errs[idx] = pref[idx] * (e + tails)
    ok[idx] = conv
    return vals, errs, ok


def _sinh_over_denominator_sq_v(s, cos_y, half_sin2):
    out = np.empty_like(s)
    small = s <= 1.0
    ss = s[small]
    den = 2.0 * np.sinh(0.5 * ss) ** 2 + 2.0 * half_sin2[small]
    out[small] = np.sinh(ss) / (den * den)
    e = np.exp(-s[~small])
    d = 1.0 - 2.0 * cos_y[~small] * e + e * e
    out[~small] = 2.0 * e * (1.0 - e * e) / (d * d)
    return out


class NearKernelTable:
    """Piecewise Chebyshev interpolant of the strip kernel on ``0 <= xi <= X_SWITCH``.

    Node values come from the integral representation; the interpolant is
    checked against direct evaluations between the nodes and panels are
    split until the check passes.  ``error`` is the largest observed check
    deviation plus the node error.
    """

    def __init__(self, edges, coeffs, error):
        self.edges = np.asarray(edges, dtype=float)
        self.coeffs = coeffs
        self.error = float(error)

    def __call__(self, xi):
        xi = np.abs(np.asarray(xi, dtype=float))
        out = np.empty_like(xi)
        k = np.clip(np.searchsorted(self.edges, xi, side="right") - 1, 0, len(self.coeffs) - 1)
        for p in np.unique(k):
            m = k == p
            a, b = self.edges[p], self.edges[p + 1]
            t = (2.0 * xi[m] - a - b) / (b - a)
            out[m] = np.polynomial.chebyshev.chebval(t, self.coeffs[p])
        return out


_TABLE_DEGREE = 24
_CHEB_NODES = np.cos(np.pi * (np.arange(_TABLE_DEGREE + 1) + 0.5) / (_TABLE_DEGREE + 1))
_CHECK_T = np.array([-0.97, -0.71, -0.33, 0.05, 0.41, 0.78, 0.99])
_table_cache = {}


def _initial_table_edges(y):
    first = 0.5 * min(y, math.pi - y, X_SWITCH)
    pts = [0.0]
    w = first
    while pts[-1] + w < X_SWITCH * 0.999:
        pts.append(pts[-1] + w)
        w *= 2.0
    pts.append(X_SWITCH)
    return pts


TABLE_TOL_FLOOR = 1e-14


def near_kernel_tables(ys, r, tol):
    """Build (or fetch cached) :class:`NearKernelTable` objects for several heights.

    ``tol`` is floored at ``TABLE_TOL_FLOOR``.  A panel is only split while
    the interpolation error dominates the noise of the node values.
    """
    ys = [float(v) for v in np.atleast_1d(ys)]
    tol = max(float(tol), TABLE_TOL_FLOOR)
    key = lambda yy: (yy, float(r), float(tol))
    todo = sorted({yy for yy in ys if key(yy) not in _table_cache})
    panels = {yy: [(a, b) for a, b in zip(e[:-1], e[1:])]
              for yy in todo for e in [_initial_table_edges(yy)]}
    done = {yy: [] for yy in todo}
    node_tol = 0.05 * tol
    while panels:
        xs, hs, slices = [], [], []
        offset = 0
        for yy, plist in panels.items():
            for a, b in plist:
                pts = 0.5 * (a + b) + 0.5 * (b - a) * np.concatenate([_CHEB_NODES, _CHECK_T])
                slices.append((yy, a, b, offset))
                offset += pts.size
                xs.append(pts)
                hs.append(np.full(pts.size, yy))
        v, e, _ok = strip_integral_batch(np.concatenate(xs), np.concatenate(hs), r, node_tol)
        nxt = {}
        n_nodes = _TABLE_DEGREE + 1
        for yy, a, b, start in slices:
            block = v[start:start + n_nodes + _CHECK_T.size]
            eb = e[start:start + n_nodes + _CHECK_T.size]
            coef = np.polynomial.chebyshev.chebfit(_CHEB_NODES, block[:n_nodes], _TABLE_DEGREE)
            dev = np.abs(np.polynomial.chebyshev.chebval(_CHECK_T, coef) - block[n_nodes:])
            err = float(dev.max() + eb.max())
            noise = eb.max() + 64.0 * np.finfo(float).eps * np.abs(block).max()
            if err > 0.5 * tol and dev.max() > 4.0 * noise and (b - a) > 1e-6:
                mid = 0.5 * (a + b)
                nxt.setdefault(yy, []).extend([(a, mid), (mid, b)])
            else:
                done[yy].append((a, b, coef, err))
        panels = nxt
    for yy in todo:
        parts = sorted(done[yy], key=lambda p: p[0])
        edges = [parts[0][0]] + [p[1] for p in parts]
        _table_cache[key(yy)] = NearKernelTable(edges, [p[2] for p in parts],
                                                max(p[3] for p in parts))
    if len(_table_cache) > 20000:
        _table_cache.clear()
    return [_table_cache.get(key(yy)) or near_kernel_tables([yy], r, tol)[0] for yy in ys]


def strip_kernel_values(xi, y, r, tol):
    """Fast vectorised kernel for the solvers: series far out, table near ``xi = 0``.

    Returns ``(values, errors)`` with a per-entry error bound.
    """
    ax = np.abs(np.asarray(xi, dtype=float))
    if y <= 0.0 or y >= math.pi:
        return np.zeros_like(ax), np.zeros_like(ax)
    if r == 0.0:
        v = _laplace_values(ax, y)
        return v, 4.0 * np.finfo(float).eps * v
    out = np.empty_like(ax)
    err = np.empty_like(ax)
    far = ax >= X_SWITCH
    if far.any():
        out[far], err[far] = green_strip_series(ax[far], y, r, tol, full_output=True)
    near = ~far
    if near.any():
        table = near_kernel_tables([y], r, tol)[0]
        out[near] = table(ax[near])
        err[near] = table.error
    return out, err


def green_strip_integral(x, y, r, tol=1e-12, full_output=False):
    """Strip kernel from its J0 integral representation.

    Raises
    ------
    SingularityError
        For ``x = 0``.
    AccuracyError
        If adaptive refinement stalls before reaching ``tol``.
    """
    xs, scalar = _as_x(x)
    _check_y_r(y, r)
    if np.any(xs == 0.0):
        raise SingularityError("integral representation requires x != 0")
    vals, errs, ok = strip_integral_batch(xs, y, r, tol)
    if not ok.all() or np.any(errs > tol):
        raise AccuracyError("strip integral did not reach tolerance",
                            _ret(vals, scalar), float(errs.max()))
    if full_output:
        return _ret(vals, scalar), _ret(errs, scalar)
    return _ret(vals, scalar)


def green_strip_via_j1(x, y, r, tol=1e-12, full_output=False):
    """Laplace kernel minus ``r int_0^inf G_Delta(sqrt(x^2+w^2), y) J1(r w) dw``.

    The substitution ``t = sqrt(x^2 + w^2)`` removes the inverse square root
    at ``t = |x|`` from the original form.
    """
    xs, scalar = _as_x(x)
    _check_y_r(y, r)
    if np.any(xs == 0.0):
        raise SingularityError("J1 representation requires x != 0")
    ax = np.abs(xs)
    if _on_edge(y):
        vals, errs = np.zeros_like(ax), np.zeros_like(ax)
    else:
        base = _laplace_values(ax, y)
        if r == 0.0:
            vals, errs = base, np.zeros_like(ax)
        else:
            pref = math.sin(y) / (2.0 * math.pi)
            # r * J1_MAX * pref * (coth(W/2) - 1) <= tol / 4
            budget = 0.25 * tol / (r * J1_MAX * pref)
            w_max = 2.0 * math.atanh(1.0 / (1.0 + budget)) if budget < 1e300 else 1.0
            w_max = max(w_max, 1.0)
            cap = min(2.0, 2.0 * math.pi / r)
            edges = [graded_edges(0.0, w_max, 0.5 * math.hypot(a, min(y, math.pi - y)), cap=cap)
                     for a in ax]
            x2 = ax * ax

            def f(w, owner):
                t = np.sqrt(x2[owner] + w * w)
                return _laplace_values(t, y) * bessel_j1(r * w)

            corr, cerr, ok = integrate_batch(f, edges, 0.75 * tol / r)
            vals = base - r * corr
            errs = r * cerr + 0.25 * tol
            if not ok.all() or np.any(errs > tol):
                raise AccuracyError("J1 correction integral did not reach tolerance",
                                    _ret(vals, scalar), float(errs.max()))
    if full_output:
        return _ret(vals, scalar), _ret(errs, scalar)
    return _ret(vals, scalar)


def green_strip(x, y, r, tol=1e-12, full_output=False):
    """Strip kernel by the most suitable representation.

    ``y in {0, pi}`` gives 0 for ``x != 0``; ``r = 0`` uses the closed form;
    otherwise the series for ``|x| >= X_SWITCH`` and the integral
    representation below it.

    Raises
    ------
    SingularityError
        At ``(0, 0)``.
    """
    xs, scalar = _as_x(x)
    _check_y_r(y, r)
    ax = np.abs(xs)
    if y == 0.0 and np.any(ax == 0.0):
        raise SingularityError("strip kernel is singular at (0, 0)")
    vals = np.zeros_like(ax)
    errs = np.zeros_like(ax)
    if not _on_edge(y):
        if r == 0.0:
            vals = _laplace_values(ax, y)
        else:
            far = ax >= X_SWITCH
            if far.any():
                vals[far], errs[far] = green_strip_series(ax[far], y, r, tol, full_output=True)
            near = ~far
            if near.any():
                v, e, ok = strip_integral_batch(ax[near], y, r, tol)
                if not ok.all():
                    raise AccuracyError("strip integral did not reach tolerance",
                                        v, float(e.max()))
                vals[near], errs[near] = v, e
    if full_output:
        return _ret(vals, scalar), _ret(errs, scalar)
    return _ret(vals, scalar)


def green_strip_point(p: StripKernelPoint, tol=1e-12):
    """:func:`green_strip` on a :class:`StripKernelPoint`."""
    return green_strip(p.x, p.y, p.r, tol)
