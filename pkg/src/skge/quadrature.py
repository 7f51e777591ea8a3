"""Vectorised adaptive Gauss-Legendre quadrature.

The workhorse is :func:`integrate_batch`, which integrates many independent
one-dimensional integrands in lock step.  The integrand is called once per
refinement round with every active node of every integral, so numpy does the
inner loop.  Each panel is compared against its two halves; the halves'
sum is kept and the difference is the (pessimistic) error estimate.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

EPS = np.finfo(float).eps


@dataclass
class QuadResult:
    value: float
    error: float
    converged: bool
    evaluations: int = 0


@lru_cache(maxsize=None)
def gauss_legendre(n):
    """Nodes and weights of the n-point rule on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _panel_sums(f, a, b, owner, order):
    x, w = gauss_legendre(order)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    t = mid[:, None] + half[:, None] * x[None, :]
    own = np.broadcast_to(owner[:, None], t.shape)
    vals = np.asarray(f(t.ravel(), own.ravel()), dtype=float).reshape(t.shape)
    return half * (vals @ w), half * (np.abs(vals) @ w)


def integrate_batch(f, edges, tol, order=15, max_depth=52, max_rounds=200,
                    max_panels=400_000):
    """Integrate a family of integrands over their own breakpoint lists.

    Parameters
    ----------
    f : callable
        ``f(t, owner)`` with flat arrays of abscissae and the index of the
        integral each abscissa belongs to; returns integrand values.
    edges : sequence of 1-D arrays
        Sorted breakpoints of each integral; consecutive pairs form the
        initial panels.  Empty or single-point lists integrate to zero.
    tol : float or array_like
        Absolute tolerance per integral.  Each panel receives a share
        proportional to its width; an integral is also accepted as soon as
        its summed error estimate falls below ``tol``, which handles
        endpoint singularities where the width-proportional share is
        unreachable.
    order : int
        Gauss-Legendre points per half panel.
    max_panels : int
        Refinement stops (unconverged) once more panels than this are active,
        which bounds memory when a tolerance is below the integrand's noise.

    Returns
    -------
    values, errors, converged : ndarray
    """
    m = len(edges)
    tol = np.broadcast_to(np.asarray(tol, dtype=float), (m,))
    a_list, b_list, o_list = [], [], []
    lengths = np.zeros(m)
    for i, e in enumerate(edges):
        e = np.asarray(e, dtype=float)
        if e.size < 2:
            continue
        keep = np.diff(e) > 0
        a_list.append(e[:-1][keep])
        b_list.append(e[1:][keep])
        o_list.append(np.full(keep.sum(), i))
        lengths[i] = e[-1] - e[0]
    values = np.zeros(m)
    errors = np.zeros(m)
    converged = np.ones(m, dtype=bool)
    if not a_list:
        return values, errors, converged

    a = np.concatenate(a_list)
    b = np.concatenate(b_list)
    owner = np.concatenate(o_list)
    coarse, _ = _panel_sums(f, a, b, owner, order)
    depth = np.zeros(a.size, dtype=int)

    for _ in range(max_rounds):
        if a.size == 0:
            break
        if a.size > max_panels:
            np.add.at(values, owner, coarse)
            np.add.at(errors, owner, np.abs(coarse))
            converged[owner] = False
            break
        mid = 0.5 * (a + b)
        aa = np.concatenate([a, mid])
        bb = np.concatenate([mid, b])
        oo = np.concatenate([owner, owner])
        sums, abs_sums = _panel_sums(f, aa, bb, oo, order)
        n = a.size
        left, right = sums[:n], sums[n:]
        fine = left + right
        err = np.abs(fine - coarse)
        floor = 64.0 * EPS * (abs_sums[:n] + abs_sums[n:])
        share = tol[owner] * (b - a) / np.where(lengths[owner] > 0, lengths[owner], 1.0)
        local = err <= np.maximum(share, floor)
        # global test: an integral whose summed estimate (finished panels plus
        # every active one) already meets its tolerance is accepted whole
        pending = np.zeros(m)
        np.add.at(pending, owner, np.maximum(err, floor))
        settled = (errors + pending <= tol)[owner]
        done = local | settled | (depth >= max_depth)
        stuck = done & ~(local | settled)
        if done.any():
            np.add.at(values, owner[done], fine[done])
            np.add.at(errors, owner[done], err[done])
            converged[owner[stuck]] = False
        go = ~done
        a = np.concatenate([a[go], mid[go]])
        b = np.concatenate([mid[go], b[go]])
        owner = np.concatenate([owner[go], owner[go]])
        coarse = np.concatenate([left[go], right[go]])
        depth = np.concatenate([depth[go] + 1, depth[go] + 1])
    else:
        np.add.at(values, owner, coarse)
        np.add.at(errors, owner, np.abs(coarse))
        converged[owner] = False
    return values, errors, converged


def integrate(f, edges, tol, order=15, max_depth=52):
    """Adaptive quadrature of a single vectorised integrand ``f(t)``."""
    values, errors, ok = integrate_batch(lambda t, _o: f(t), [np.asarray(edges, float)],
                                         tol, order=order, max_depth=max_depth)
    return QuadResult(float(values[0]), float(errors[0]), bool(ok[0]))


def graded_edges(start, stop, first, ratio=2.0, cap=None):
    """Breakpoints from ``start`` to ``stop`` growing geometrically from width ``first``.

    Panel widths never exceed ``cap`` (if given).
    """
    if stop <= start:
        return np.array([start, stop])
    pts = [start]
    width = max(first, 1e-300)
    x = start
    while x < stop:
        step = width if cap is None else min(width, cap)
        x = min(x + step, stop)
        if stop - x < 0.25 * step:
            x = stop
        pts.append(x)
        width *= ratio
    return np.array(pts)


def wynn_epsilon(partial_sums):
    """Wynn's epsilon extrapolation of a sequence of partial sums.

    Returns the final accelerated estimate and the difference between the
    last two even-column estimates as an error indicator.
    """
    s = np.asarray(partial_sums, dtype=float)
    n = s.size
    if n < 3:
        return float(s[-1]), float("inf") if n < 2 else abs(s[-1] - s[-2])
    prev = np.zeros(n + 1)
    cur = s.copy()
    estimates = [s[-1]]
    for k in range(1, n):
        diff = cur[1:] - cur[:-1]
        with np.errstate(divide="ignore", invalid="ignore"):
            nxt = prev[1:cur.size] + 1.0 / diff
        if not np.all(np.isfinite(nxt)):
            break
        prev, cur = cur, nxt
        if k % 2 == 0 and cur.size:
            estimates.append(cur[-1])
        if cur.size < 2:
            break
    if len(estimates) < 2:
        return float(estimates[-1]), abs(s[-1] - s[-2])
    return float(estimates[-1]), float(abs(estimates[-1] - estimates[-2]))


def integrate_oscillatory(f, start, half_period, tol, min_panels=8, max_panels=400):
    """Sum ``f`` over consecutive panels of length ``half_period`` with extrapolation.

    Intended for integrands whose sign alternates between panels (for
    example ``sin(xi*y)`` between its zeros); each panel is integrated
    adaptively and the partial sums are accelerated by the epsilon algorithm.
    """
    sums = []
    total = 0.0
    last = None
    err = float("inf")
    panel_err = 0.0
    for k in range(max_panels):
        a = start + k * half_period
        res = integrate(f, [a, a + 0.5 * half_period, a + half_period], 0.01 * tol)
        total += res.value
        panel_err += res.error
        sums.append(total)
        if k + 1 >= min_panels:
            est, err = wynn_epsilon(sums[-min(len(sums), 40):])
            if last is not None:
                err = max(err, abs(est - last))
            last = est
            err += panel_err
            if err <= tol:
                return QuadResult(est, err, True)
    return QuadResult(last if last is not None else total, err, False)
