"""Strip kernel: frozen mpmath values (direct eigenfunction sums) and invariants."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from skge.errors import DomainError, SeriesDivergenceError, SingularityError
from skge.strip_kernel import (X_SWITCH, NearKernelTable, StripKernelPoint, green_strip,
                               green_strip_integral, green_strip_laplace, green_strip_point,
                               green_strip_series, green_strip_via_j1, near_kernel_tables,
                               strip_mass, strip_tail_bound)

# (x, y, r, value) summed directly with mpmath at 40 digits
STRIP_REF = [
    (0.5, 1.0, 1.0, 0.14014282251452976),
    (1.0, math.pi / 2, 0.5, 0.079909088440815686),
    (2.0, 0.3, 3.0, 0.00017691894636199236),
    (0.3, 2.8, 1.0, 0.0087882155298291523),
    (1.0, math.pi / 2, 0.0, 0.10314104104543525),
]

xs_st = st.floats(0.05, 6.0)
ys_st = st.floats(0.05, math.pi - 0.05)
rs_st = st.floats(0.0, 4.0)


@pytest.mark.parametrize("x, y, r, ref", STRIP_REF)
@pytest.mark.parametrize("rep", [green_strip_series, green_strip_integral, green_strip_via_j1,
                                 green_strip])
def test_reference_values(rep, x, y, r, ref):
    assert rep(x, y, r, 1e-12) == pytest.approx(ref, abs=1e-11)


def test_laplace_reference():
    # sin 1 / (2 pi (cosh 3 - cos 1)) from mpmath
    assert green_strip_laplace(3.0, 1.0) == pytest.approx(0.014056808083190177, rel=1e-14)


def test_laplace_near_corner_has_no_cancellation():
    v = green_strip_laplace(1e-8, 1e-8)
    # limit along x = y: sin y / (2 pi (x^2 + y^2) / 2) -> 1 / (2 pi y)
    assert v == pytest.approx(1.0 / (2 * math.pi * 1e-8), rel=1e-7)


def test_series_error_bound_honoured():
    v, err = green_strip_series(0.4, 1.2, 1.0, 1e-10, full_output=True)
    assert err <= 1e-10
    assert abs(v - green_strip_integral(0.4, 1.2, 1.0, 1e-13)) <= 2e-10


def test_singular_points():
    with pytest.raises(SingularityError):
        green_strip(0.0, 0.0, 1.0)
    with pytest.raises(SingularityError):
        green_strip_laplace(0.0, 0.0)
    with pytest.raises(SeriesDivergenceError):
        green_strip_series(0.0, 1.0, 1.0)
    with pytest.raises(SingularityError):
        green_strip_integral(0.0, 1.0, 1.0)


def test_interior_x_zero_is_finite():
    v = green_strip(0.0, math.pi / 2, 1.0)
    assert math.isfinite(v) and v > 0


@pytest.mark.parametrize("y", [0.0, math.pi])
def test_vanishes_on_edges(y):
    assert green_strip(0.7, y, 1.0) == 0.0


@pytest.mark.parametrize("y, r", [(-0.1, 1.0), (3.2, 1.0), (1.0, -1.0), (1.0, math.nan)])
def test_domain_errors(y, r):
    with pytest.raises(DomainError):
        green_strip(1.0, y, r)


def test_point_wrapper():
    p = StripKernelPoint(0.5, 1.0, 1.0)
    assert green_strip_point(p) == pytest.approx(STRIP_REF[0][3], abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(xs_st, ys_st, rs_st)
def test_positive_and_even(x, y, r):
    v = green_strip(x, y, r, 1e-12)
    assert v > 0
    assert green_strip(-x, y, r, 1e-12) == v


@settings(max_examples=40, deadline=None)
@given(xs_st, ys_st, st.floats(0.01, 3.0))
def test_decreasing_in_r(x, y, r):
    assert green_strip(x, y, r + 0.5, 1e-12) < green_strip(x, y, r, 1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.25, 5.0), ys_st, rs_st)
def test_decreasing_in_abs_x(x, y, r):
    v0 = green_strip(x, y, r, 1e-13)
    v1 = green_strip(x + 0.25, y, r, 1e-13)
    assume(v0 > 1e-200)
    assert v1 < v0


@settings(max_examples=40, deadline=None)
@given(xs_st, ys_st, rs_st)
def test_bounded_by_laplace_kernel(x, y, r):
    assert green_strip(x, y, r, 1e-13) <= green_strip_laplace(x, y) + 1e-12


@settings(max_examples=40, deadline=None)
@given(st.floats(X_SWITCH, 4.0), ys_st, st.floats(0.1, 3.0))
def test_representations_agree(x, y, r):
    s = green_strip_series(x, y, r, 1e-11)
    assert green_strip_integral(x, y, r, 1e-11) == pytest.approx(s, abs=1e-9)
    assert green_strip_via_j1(x, y, r, 1e-11) == pytest.approx(s, abs=1e-9)


@pytest.mark.parametrize("y", [0.3, 1.5, 2.9])
def test_tail_bound_dominates_kernel_mass(y):
    xi = 2.0
    t = np.linspace(xi, 40.0, 4001)
    mass = np.trapezoid(green_strip_laplace(t, y), t)
    assert mass <= strip_tail_bound(xi)


def test_strip_mass_limits():
    assert strip_mass(0.0, 1.0) == pytest.approx(1.0)
    assert strip_mass(math.pi, 1.0) == pytest.approx(0.0, abs=1e-300)
    assert strip_mass(1.0, 0.0) == pytest.approx((math.pi - 1.0) / math.pi)
    assert strip_mass(1.0, 1e-7) == pytest.approx((math.pi - 1.0) / math.pi, rel=1e-6)
    assert strip_mass(1.0, 400.0) == pytest.approx(math.exp(-400.0), rel=1e-12)


def test_near_table_matches_integral():
    ys = [0.4, 2.0]
    tables = near_kernel_tables(ys, 1.0, 1e-12)
    for y, tab in zip(ys, tables):
        assert isinstance(tab, NearKernelTable)
        t = np.array([0.01, 0.1, 0.2])
        np.testing.assert_allclose(tab(t), green_strip_integral(t, y, 1.0, 1e-13), atol=1e-11)


FULL_GRID = [(x, y, r) for r in (0.0, 0.5, 1.0, 3.0) for y in (0.3, 1.0, math.pi / 2, 2.0, 2.8)
             for x in (0.25, 0.5, 1.0, 2.0, 4.0)]


@pytest.mark.parametrize("r", [0.0, 0.5, 1.0, 3.0])
def test_representation_grid_within_ten_tol(r):
    tol = 1e-9
    pts = [p for p in FULL_GRID if p[2] == r]
    for x, y, _ in pts:
        s = green_strip_series(x, y, r, tol)
        i = green_strip_integral(x, y, r, tol)
        j = green_strip_via_j1(x, y, r, tol)
        assert max(abs(s - i), abs(s - j), abs(i - j)) <= 10 * tol
        assert s > 0


def test_grid_monotone_in_abs_x():
    for r in (0.0, 0.5, 1.0, 3.0):
        for y in (0.3, 1.0, math.pi / 2, 2.0, 2.8):
            v = green_strip(np.array([0.25, 0.5, 1.0, 2.0, 4.0]), y, r, 1e-13)
            assert np.all(np.diff(v) < 0)
