"""Verification suites shared by ``skge verify`` and the acceptance tests.

Each suite returns a list of :class:`~skge.fields.OracleReport` objects.
Reference values come from closed forms and identities that do not share
code with the representation under test.
"""

import math

import numpy as np

from . import specfun
from .boundary import cosine, gaussian, holder_cusp, smooth_bump, step
from .bvp_solver import (FieldEvaluator, GridSpec, KernelSpec, solve_halfplane,
                         solve_halfplane_general, solve_strip, solve_strip_general)
from .disk_validator import mean_value_check
from .fd_oracle import assemble_and_solve, strip_problem
from .fields import OracleReport
from .general_elliptic import (EllipticCoefficients, green_halfplane_general,
                               green_halfplane_general_closed, green_strip_general)
from .halfplane_kernel import (green_halfplane_closed, green_halfplane_integral,
                               halfplane_mass, halfplane_tail_bound,
                               identity_gradshteyn_3914)
from .quadrature import graded_edges, integrate
from .strip_kernel import (green_strip, green_strip_integral, green_strip_laplace,
                           green_strip_series, green_strip_via_j1, strip_mass,
                           strip_tail_bound)

STRIP_X = (0.25, 0.5, 1.0, 2.0, 4.0)
STRIP_Y = (0.3, 1.0, math.pi / 2, 2.0, 2.8)
STRIP_R = (0.5, 1.0, 3.0)
HALF_X = (0.0, 0.5, 1.0, 2.0)
HALF_Y = (0.2, 1.0, 3.0)
HALF_R = (0.1, 1.0, 3.0)
G3914_TRIPLES = ((1.0, 1.0, 1.0), (2.0, 0.5, 1.0), (0.5, 2.0, 0.3),
                 (3.0, 1.0, 2.0), (1.0, 0.2, 0.5), (0.7, 1.5, 4.0))
MEAN_VALUE_CENTERS = ((0.0, math.pi / 2), (0.7, 1.0), (-1.2, 2.0), (2.0, 0.6), (-0.4, 2.6))
MEAN_VALUE_RADII = (0.1, 0.3)

FD_COEFFICIENTS = {
    "canonical": EllipticCoefficients(1.0, 1.0, r=1.0),
    "anisotropic": EllipticCoefficients(1.0, 2.0, r=1.0),
    "correlated": EllipticCoefficients(1.0, 1.0, rho=0.6, r=1.0),
    "drift_x": EllipticCoefficients(1.0, 1.0, alpha1=0.5, r=1.0),
    "drift_y": EllipticCoefficients(1.0, 1.0, alpha2=0.5, r=1.0),
    "mixed": EllipticCoefficients(1.3, 0.9, rho=-0.4, alpha1=-0.5, alpha2=0.7, r=0.3),
}
FD_STEPS = (1.0 / 32, 1.0 / 64, 1.0 / 128)


def _report(name, values, reference, tol, **meta):
    return OracleReport.from_values(name, np.asarray(values, float), np.asarray(reference, float),
                                    tol, metadata=meta)


def _max_report(name, deviation, tol, **meta):
    """Report whose only statistic is an already computed deviation."""
    dev = np.atleast_1d(np.asarray(deviation, dtype=float))
    return OracleReport.from_values(name, dev, np.zeros_like(dev), tol, metadata=meta)


# --------------------------------------------------------------------------
# kernels

def strip_representation_reports(r_values=STRIP_R, tol=1e-9):
    """Series, integral and J1 forms pairwise on the (x, y, r) grid (limit 1e-7)."""
    series, integral, j1 = [], [], []
    for r in r_values:
        for y in STRIP_Y:
            xs = np.array(STRIP_X)
            series.extend(green_strip_series(xs, y, r, tol))
            for x in STRIP_X:
                integral.append(green_strip_integral(x, y, r, tol))
                j1.append(green_strip_via_j1(x, y, r, tol))
    meta = dict(points=len(series), r=list(r_values), evaluation_tol=tol)
    lim = 1e-7
    return [_report("strip_series_vs_integral", series, integral, lim, **meta),
            _report("strip_series_vs_j1", series, j1, lim, **meta),
            _report("strip_integral_vs_j1", integral, j1, lim, **meta)]


def laplace_reduction_report(tol=1e-12):
    """Series at r = 0 against the closed Laplace kernel, |x| >= 0.25."""
    xs = np.array([0.25, 0.4, 0.75, 1.0, 1.5, 2.5, 4.0, -0.3, -2.0])
    vals, refs = [], []
    for y in STRIP_Y + (0.05, 3.1):
        vals.extend(green_strip_series(xs, y, 0.0, tol))
        refs.extend(green_strip_laplace(xs, y))
    return _report("laplace_reduction", vals, refs, 1e-9, points=len(vals))


def halfplane_representation_report(tol=1e-9):
    vals, refs = [], []
    for r in HALF_R:
        for y in HALF_Y:
            for x in HALF_X:
                vals.append(green_halfplane_integral(x, y, r, tol))
                refs.append(green_halfplane_closed(x, y, r))
    return _report("halfplane_closed_vs_integral", vals, refs, 1e-7, points=len(vals))


def gradshteyn_reports(tol=1e-8):
    return [identity_gradshteyn_3914(a, b, g, tol) for a, b, g in G3914_TRIPLES]


def representation_suite(r=None):
    r_values = STRIP_R if r is None else (r,)
    reports = []
    if any(v > 0 for v in r_values):
        reports += strip_representation_reports(tuple(v for v in r_values if v > 0))
    if r is None or r == 0:
        reports.append(laplace_reduction_report())
    reports.append(halfplane_representation_report())
    return reports


# --------------------------------------------------------------------------
# mass identities

def _even_kernel_mass(kernel, scale, tail, tol=1e-10):
    """``2 int_0^X kernel(x) dx`` with X from the one-sided tail bound.

    ``scale`` is the width of the kernel peak at ``x = 0``.
    """
    cut = 1.0
    while tail(cut) > 0.1 * tol:
        cut *= 1.5
    edges = graded_edges(0.0, cut, scale / 8.0, cap=1.0)
    res = integrate(kernel, edges, 0.1 * tol)
    return 2.0 * res.value, 2.0 * (res.error + tail(cut))


def mass_suite(r=None):
    rs = (0.5, 1.0, 3.0) if r is None else (r,)
    ys = (0.5, math.pi / 2, 2.5)
    strip_v, strip_ref, half_v, half_ref = [], [], [], []
    for rr in rs:
        for y in ys:
            m, _ = _even_kernel_mass(lambda x: green_strip(x, y, rr, 1e-12),
                                     min(y, math.pi - y, 1.0),
                                     lambda c: float(strip_tail_bound(c)))
            strip_v.append(m)
            strip_ref.append(float(strip_mass(y, rr)))
            if rr > 0:
                m, _ = _even_kernel_mass(lambda x: green_halfplane_closed(x, y, rr), min(y, 1.0),
                                         lambda c: float(halfplane_tail_bound(c, y, rr)))
                half_v.append(m)
                half_ref.append(float(halfplane_mass(y, rr)))
    reports = [_report("strip_mass_identity", strip_v, strip_ref, 1e-7, r=list(rs), y=list(ys))]
    if half_v:
        reports.append(_report("halfplane_mass_identity", half_v, half_ref, 1e-7,
                               r=[v for v in rs if v > 0], y=list(ys)))
    return reports


# --------------------------------------------------------------------------
# solved fields

def separable_suite(tol=1e-7):
    """Cosine data against ``cos(ax)`` times the sinh / exponential profiles."""
    reports = []
    g = GridSpec(-3.0, 3.0, 41, 0.0, math.pi, 21)
    X, Y = np.meshgrid(g.xs, g.ys)
    for a, r in ((1.0, 0.0), (1.0, 1.0), (2.0, 0.5)):
        k = math.hypot(a, r)
        F = solve_strip(cosine(a), None, g, r, tol=tol)
        exact = np.cos(a * X) * np.sinh((math.pi - Y) * k) / math.sinh(math.pi * k)
        reports.append(_report(f"separable_strip_a{a:g}_r{r:g}", F.values, exact, 1e-6,
                               partial=F.partial))
    g = GridSpec(-3.0, 3.0, 41, 0.0, 4.0, 21)
    X, Y = np.meshgrid(g.xs, g.ys)
    for a, r in ((1.0, 1.0), (1.0, 2.0), (2.0, 0.5)):
        k = math.hypot(a, r)
        F = solve_halfplane(cosine(a), g, r, tol=tol)
        exact = np.cos(a * X) * np.exp(-Y * k)
        reports.append(_report(f"separable_halfplane_a{a:g}_r{r:g}", F.values, exact, 1e-6,
                               partial=F.partial))
    return reports


def mean_value_fields():
    """Analytic field evaluators used by the mean-value suite."""
    return {
        "strip_gaussian_r1": FieldEvaluator(KernelSpec("strip", 1.0), gaussian(0.0, 1.0), 1e-10),
        "strip_step_r0": FieldEvaluator(KernelSpec("strip", 0.0), step(), 1e-10),
        "strip_two_sided_r0.5": FieldEvaluator(KernelSpec("strip", 0.5), gaussian(0.5, 0.7),
                                               1e-10, phi_top=holder_cusp(0.5)),
        "halfplane_gaussian_r1": FieldEvaluator(KernelSpec("halfplane", 1.0),
                                                gaussian(0.0, 1.0), 1e-10),
        "halfplane_cusp_r0": FieldEvaluator(KernelSpec("halfplane", 0.0), holder_cusp(0.5),
                                            1e-10),
    }


def mean_value_suite(tol=1e-6, fields=None):
    reports = []
    for name, ev in (fields or mean_value_fields()).items():
        for c in MEAN_VALUE_CENTERS:
            for rad in MEAN_VALUE_RADII:
                rep = mean_value_check(ev, c, rad, ev.r, tol)
                rep.name = f"mean_value_{name}"
                reports.append(rep)
    return reports


def fd_convergence(c, phi=None, steps=FD_STEPS, tol=1e-10):
    """Max |analytic - FD| on a nested set of nodes for each spacing.

    Returns ``(errors, orders, points)``.
    """
    phi = phi or smooth_bump(1.0)
    h0 = steps[0]
    ny0 = max(int(round(c.width / h0)), 2)
    hy0 = c.width / ny0
    xs = np.linspace(-2.0, 2.0, 9)
    rows = np.arange(5, ny0, 10)
    ys = rows * hy0
    exact = solve_strip_general(phi, (xs, ys), c, tol=tol).values
    errors = []
    for h in steps:
        k = int(round(h0 / h))
        p = strip_problem(c, phi, h, ny=ny0 * k)
        F = assemble_and_solve(p)
        ix = np.rint((xs - p.x_lo) / h).astype(int)
        fd = F.values[np.ix_(rows * k, ix)]
        errors.append(float(np.abs(fd - exact).max()))
    orders = [math.log2(errors[i] / errors[i + 1]) for i in range(len(errors) - 1)]
    return errors, orders, xs.size * ys.size


def fd_oracle_suite(coeffs=None, steps=FD_STEPS):
    names = list(FD_COEFFICIENTS) if coeffs is None else [coeffs]
    reports = []
    for name in names:
        c = FD_COEFFICIENTS[name]
        errors, orders, npts = fd_convergence(c, steps=steps)
        ok = errors[-1] <= 5e-3 and min(orders) >= 1.8
        rep = _max_report(f"fd_oracle_{name}", errors[-1], 5e-3, errors=errors, orders=orders,
                          steps=list(steps), points=npts, min_order=min(orders))
        rep.passed = bool(ok)
        reports.append(rep)
    return reports


# --------------------------------------------------------------------------
# properties of solved fields

RESIDUAL_STEPS = (1.0 / 32, 1.0 / 64, 1.0 / 128)
RECOVERY_HEIGHTS = (0.1, 0.05, 0.025)
RECOVERY_X = (-2.0, -1.5, -1.0, 1.0, 1.5, 2.0)
RECOVERY_R = (0.0, 0.5)


def pde_residual_suite(steps=RESIDUAL_STEPS, tol=1e-12):
    """Max 5-point ``(Delta - r^2)`` residual of analytic fields at interior points.

    Returns ``(name, residuals, orders)`` triples, one per field.
    """
    cases = {
        "strip_gaussian_r1": (KernelSpec("strip", 1.0), gaussian(0.0, 1.0)),
        "strip_cusp_r0": (KernelSpec("strip", 0.0), holder_cusp(0.5)),
        "halfplane_gaussian_r0.5": (KernelSpec("halfplane", 0.5), gaussian(0.0, 1.0)),
        "halfplane_step_r2": (KernelSpec("halfplane", 2.0), step()),
    }
    pts = np.array([(0.0, 1.0), (0.5, math.pi / 2), (-1.0, 2.0), (1.5, 0.7), (0.0, 2.5)])
    out = []
    for name, (spec, phi) in cases.items():
        ev = FieldEvaluator(spec, phi, tol)
        res = []
        for h in steps:
            x = np.concatenate([pts[:, 0], pts[:, 0] + h, pts[:, 0] - h, pts[:, 0], pts[:, 0]])
            y = np.concatenate([pts[:, 1], pts[:, 1], pts[:, 1], pts[:, 1] + h, pts[:, 1] - h])
            v = np.asarray(ev(x, y)).reshape(5, -1)
            lap = (v[1] + v[2] + v[3] + v[4] - 4.0 * v[0]) / h ** 2
            res.append(float(np.abs(lap - spec.r ** 2 * v[0]).max()))
        orders = [math.log2(res[i] / res[i + 1]) for i in range(len(res) - 1)]
        out.append((name, res, orders))
    return out


def boundary_recovery_suite(heights=RECOVERY_HEIGHTS, xs=RECOVERY_X, r_values=RECOVERY_R,
                            limit=0.02):
    """``|V(x, y) - phi(x)|`` at points where ``phi`` is locally Lipschitz.

    Returns ``(name, errors_by_height, monotone, passed)`` tuples.
    """
    xs = np.asarray(xs, dtype=float)
    out = []
    for domain in ("strip", "halfplane"):
        for r in r_values:
            for phi in (step(), gaussian(0.0, 1.0), holder_cusp(0.5)):
                ev = FieldEvaluator(KernelSpec(domain, r), phi, 1e-10)
                errs = [np.abs(ev(xs, np.full(xs.size, y)) - phi(xs)) for y in heights]
                mono = all(bool(np.all(errs[i + 1] < errs[i])) for i in range(len(errs) - 1))
                worst = [float(e.max()) for e in errs]
                out.append((f"{domain}_r{r:g}_{phi.name}", worst, mono,
                            mono and worst[-1] <= limit))
    return out


def max_principle_fields():
    """Solved fields (with their data sup norm) for the boundedness check."""
    g = GridSpec(-4.0, 4.0, 41, 0.0, math.pi, 21)
    gh = GridSpec(-4.0, 4.0, 41, 0.0, 5.0, 21)
    tol = 1e-10
    fields = {
        "strip_step_r0": (solve_strip(step(), None, g, 0.0, tol), 1.0),
        "strip_gauss_cusp_r1": (solve_strip(gaussian(0.0, 1.0), holder_cusp(0.5), g, 1.0, tol),
                                1.0),
        "strip_cosine_r0.5": (solve_strip(cosine(1.0), None, g, 0.5, tol), 1.0),
        "halfplane_step_r0": (solve_halfplane(step(), gh, 0.0, tol), 1.0),
        "halfplane_cusp_r1": (solve_halfplane(holder_cusp(0.5), gh, 1.0, tol), 1.0),
        "strip_general_mixed": (solve_strip_general(
            gaussian(0.0, 1.0, amplitude=-2.0), g, FD_COEFFICIENTS["mixed"], 1e-9), 2.0),
        "halfplane_general_drift": (solve_halfplane_general(
            step(), gh, FD_COEFFICIENTS["drift_x"], 1e-9), 1.0),
    }
    return fields


def max_principle_reports(slack=1e-9):
    reports = []
    for name, (F, sup) in max_principle_fields().items():
        excess = max(float(np.nanmax(np.abs(F.values))) - sup, 0.0)
        rep = _max_report(f"max_principle_{name}", excess, slack, sup=sup,
                          field_max=float(np.nanmax(np.abs(F.values))))
        rep.passed = rep.passed and not F.partial
        reports.append(rep)
    return reports


def general_reduction_reports(tol=1e-8):
    """Canonical coefficients against the canonical kernels and fields."""
    reports = []
    xs = np.array([-3.0, -1.0, -0.2, 0.05, 0.3, 1.0, 2.5])
    for r in (0.0, 0.5, 2.0):
        c = EllipticCoefficients(1.0, 1.0, r=r)
        gen, ref = [], []
        for y in (0.2, 1.0, math.pi / 2, 2.9):
            for x in xs:
                gen.append(green_strip_general(x, y, c, 1e-11))
                ref.append(green_strip(x, y, r, 1e-11))
        reports.append(_report(f"general_strip_kernel_r{r:g}", gen, ref, tol))
        if r > 0:
            gen, ref = [], []
            for y in (0.2, 1.0, 3.0):
                for x in xs:
                    gen.append(green_halfplane_general(x, y, c, 1e-10))
                    ref.append(green_halfplane_closed(x, y, r))
                    gen.append(green_halfplane_general_closed(x, y, c))
                    ref.append(green_halfplane_closed(x, y, r))
            reports.append(_report(f"general_halfplane_kernel_r{r:g}", gen, ref, tol))
    g = GridSpec(-3.0, 3.0, 13, 0.0, math.pi, 9)
    gh = GridSpec(-3.0, 3.0, 13, 0.0, 4.0, 9)
    phi = gaussian(0.3, 0.8)
    for r in (0.0, 1.0):
        c = EllipticCoefficients(1.0, 1.0, r=r)
        a = solve_strip_general(phi, g, c, 1e-10)
        b = solve_strip(phi, None, g, r, 1e-10)
        reports.append(_report(f"general_strip_field_r{r:g}", a.values, b.values, tol))
        a = solve_halfplane_general(phi, gh, c, 1e-10)
        b = solve_halfplane(phi, gh, r, 1e-10)
        reports.append(_report(f"general_halfplane_field_r{r:g}", a.values, b.values, tol))
    return reports


# --------------------------------------------------------------------------
# special functions

WRONSKIAN_Z = (0.5, 1.0, 2.0, 5.0, 10.0)


def specfun_reports():
    reports = []
    # I_n K_{n+1} + I_{n+1} K_n = 1/z
    vals, refs = [], []
    for z in WRONSKIAN_Z:
        for n in range(0, 11):
            w = (float(specfun.bessel_i(n, z)) * float(specfun.bessel_k(n + 1, z))
                 + float(specfun.bessel_i(n + 1, z)) * float(specfun.bessel_k(n, z)))
            vals.append(w * z)
            refs.append(1.0)
    reports.append(_report("wronskian_relative", vals, refs, 1e-9))
    # I_{n-1} - I_{n+1} = (2n/z) I_n, relative to the largest term
    dev = []
    for z in np.linspace(0.5, 10.0, 20):
        for n in range(1, 11):
            lo, mid, hi = (float(specfun.bessel_i(k, z)) for k in (n - 1, n, n + 1))
            dev.append(abs(lo - hi - 2 * n / z * mid) / max(abs(lo), abs(hi)))
    reports.append(_max_report("i_recurrence_relative", max(dev), 1e-10))
    # ratio bounds for 0 < z < zt <= 10
    grid = np.linspace(0.05, 10.0, 25)
    worst1 = worst2 = -math.inf
    for n in range(0, 31):
        i_n = np.array([float(specfun.bessel_i(n, z)) for z in grid])
        i_n1 = np.array([float(specfun.bessel_i(n + 1, z)) for z in grid])
        for j, zt in enumerate(grid):
            z = grid[:j]
            if z.size == 0:
                continue
            q = (z / zt) ** n
            worst1 = max(worst1, float(np.max(i_n[:j] / i_n[j] / q)) - 1.0)
            worst2 = max(worst2, float(np.max(i_n1[:j] / i_n[j] / (q * z / 2))) - 1.0)
    reports.append(_max_report("i_ratio_bound", max(worst1, 0.0), 1e-12, worst=worst1))
    reports.append(_max_report("i_shifted_ratio_bound", max(worst2, 0.0), 1e-12, worst=worst2))
    # J0' = -J1 by central differences
    h = 1e-5
    zs = np.linspace(0.1, 30.0, 300)
    d = (specfun.bessel_j0(zs + h) - specfun.bessel_j0(zs - h)) / (2 * h)
    reports.append(_report("j0_derivative", d, -specfun.bessel_j1(zs), 1e-8))
    return reports


# --------------------------------------------------------------------------

SUITES = ("reps", "mass", "g3914", "meanvalue", "fdoracle")


def run_suite(name, r=None, coeffs=None):
    if name == "reps":
        return representation_suite(r)
    if name == "mass":
        return mass_suite(r)
    if name == "g3914":
        return gradshteyn_reports()
    if name == "meanvalue":
        return mean_value_suite()
    if name == "fdoracle":
        return fd_oracle_suite(coeffs)
    raise ValueError(f"unknown suite {name!r}")
