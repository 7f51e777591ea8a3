import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from skge.quadrature import (gauss_legendre, graded_edges, integrate, integrate_batch,
                             integrate_oscillatory, wynn_epsilon)


def test_gauss_legendre_exact_for_polynomials():
    t, w = gauss_legendre(10)
    for p in range(20):
        exact = (1 - (-1) ** (p + 1)) / (p + 1)
        assert np.dot(w, t ** p) == pytest.approx(exact, abs=1e-14)


def test_integrate_smooth():
    res = integrate(np.exp, [0.0, 1.0], 1e-13)
    assert res.converged
    assert res.value == pytest.approx(math.e - 1, abs=1e-13)


def test_integrate_endpoint_singularity():
    res = integrate(np.sqrt, [0.0, 1.0], 1e-13)
    assert res.converged
    assert res.value == pytest.approx(2 / 3, abs=1e-12)


def test_batch_owners_are_independent():
    edges = [np.array([0.0, 1.0]), np.array([0.0, 2.0]), np.array([0.0])]
    vals, errs, ok = integrate_batch(lambda t, o: t * (o + 1.0), edges, 1e-12)
    np.testing.assert_allclose(vals, [0.5, 4.0, 0.0], atol=1e-13)
    assert ok.all()


def test_panel_cap_marks_unconverged():
    noisy = lambda t, o: np.sin(1e7 * t)  # noqa: E731
    _, _, ok = integrate_batch(noisy, [np.array([0.0, 1.0])], 1e-15, max_panels=64)
    assert not ok[0]


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 5.0), st.floats(0.01, 10.0), st.floats(1e-3, 0.5))
def test_graded_edges_cover_interval(start, length, first):
    e = graded_edges(start, start + length, first, cap=1.0)
    assert e[0] == start
    assert e[-1] == pytest.approx(start + length)
    assert np.all(np.diff(e) > 0)
    # a short final piece is merged into its neighbour
    assert np.diff(e).max() <= 1.25 + 1e-12


def test_wynn_accelerates_alternating_series():
    partial = np.cumsum([(-1) ** k / (k + 1) for k in range(16)])
    est, _ = wynn_epsilon(partial)
    assert est == pytest.approx(math.log(2), abs=1e-11)


def test_oscillatory_sine_over_t():
    f = lambda t: np.sinc(t / math.pi)  # noqa: E731  (sin t / t)
    res = integrate_oscillatory(f, 0.0, math.pi, 1e-10)
    assert res.value == pytest.approx(math.pi / 2, abs=1e-8)
