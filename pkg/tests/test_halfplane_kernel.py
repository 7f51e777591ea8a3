"""Half-plane kernel ``r y K1(r rho) / (pi rho)`` and its Fourier integral."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from skge.errors import DomainError, SingularityError
from skge.halfplane_kernel import (HalfPlaneKernelPoint, green_halfplane_closed,
                                   green_halfplane_integral, halfplane_mass,
                                   halfplane_tail_bound, identity_gradshteyn_3914,
                                   scaled_k1_product)

HALF_REF = [  # mpmath
    (0.0, 1.0, 1.0, 0.19159302193728243),
    (1.0, 1.0, 1.0, 0.070719309061997686),
    (0.5, 0.2, 3.0, 0.083498587628160656),
    (2.0, 3.0, 0.1, 0.065458293050657196),
]


@pytest.mark.parametrize("x, y, r, ref", HALF_REF)
def test_closed_reference(x, y, r, ref):
    assert green_halfplane_closed(x, y, r) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("x, y, r, ref", HALF_REF)
def test_integral_reference(x, y, r, ref):
    assert green_halfplane_integral(x, y, r, 1e-11) == pytest.approx(ref, abs=1e-10)


def test_r_zero_is_poisson_kernel():
    x, y = 0.7, 1.3
    assert green_halfplane_closed(x, y, 0.0) == pytest.approx(y / (math.pi * (x * x + y * y)))


def test_origin_is_singular():
    with pytest.raises(SingularityError):
        green_halfplane_closed(0.0, 0.0, 1.0)
    with pytest.raises(SingularityError):
        green_halfplane_integral(0.0, 0.0, 1.0)


def test_domain_errors():
    with pytest.raises(DomainError):
        green_halfplane_closed(0.0, -1.0, 1.0)
    with pytest.raises(DomainError):
        green_halfplane_closed(0.0, 1.0, -1.0)


def test_boundary_away_from_origin_is_zero():
    assert green_halfplane_closed(1.0, 0.0, 1.0) == 0.0


def test_scaled_k1_limit():
    np.testing.assert_allclose(scaled_k1_product(np.array([0.0, 1e-12])), [1.0, 1.0])


def test_mass():
    assert halfplane_mass(2.0, 0.5) == pytest.approx(math.exp(-1.0))


def test_point_record():
    p = HalfPlaneKernelPoint(1.0, 1.0, 1.0)
    assert green_halfplane_closed(p.x, p.y, p.r) == pytest.approx(HALF_REF[1][3], rel=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.floats(-5, 5), st.floats(0.05, 5), st.floats(0.0, 4.0))
def test_positive_even_and_r_monotone(x, y, r):
    v = green_halfplane_closed(x, y, r)
    assert v > 0
    assert green_halfplane_closed(-x, y, r) == v
    assert green_halfplane_closed(x, y, r + 0.5) < v


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 5), st.floats(0.1, 3), st.floats(0.05, 3))
def test_tail_bound(xi, y, r):
    t = np.linspace(xi, xi + 200.0, 20001)
    mass = np.trapezoid(green_halfplane_closed(t, y, r), t)
    assert mass <= halfplane_tail_bound(xi, y, r) * (1 + 1e-6)


@settings(max_examples=15, deadline=None)
@given(st.floats(-3, 3), st.floats(0.2, 3), st.floats(0.1, 3))
def test_integral_matches_closed(x, y, r):
    assert green_halfplane_integral(x, y, r, 1e-9) == pytest.approx(
        green_halfplane_closed(x, y, r), abs=1e-8)


@pytest.mark.parametrize("a, beta, gamma", [(1, 1, 1), (2, 0.5, 1), (0.5, 2, 0.3)])
def test_gradshteyn_identity(a, beta, gamma):
    rep = identity_gradshteyn_3914(a, beta, gamma)
    assert rep.passed
    assert rep.max_abs <= 1e-8


def test_gradshteyn_rhs_reference():
    # a gamma K1(gamma sqrt(a^2+beta^2)) / sqrt(a^2+beta^2) at (1, 1, 1), mpmath
    rep = identity_gradshteyn_3914(1.0, 1.0, 1.0)
    assert rep.metadata["rhs"] == pytest.approx(0.22217126181611798, rel=1e-13)


def test_gradshteyn_rejects_nonpositive():
    with pytest.raises(DomainError):
        identity_gradshteyn_3914(0.0, 1.0, 1.0)


def test_small_r_integral_matches_poisson():
    x, y = 0.5, 1.0
    assert green_halfplane_integral(x, y, 1e-6, 1e-8) == pytest.approx(
        y / (math.pi * (x * x + y * y)), abs=1e-4)


@pytest.mark.parametrize("r", [0.1, 1.0, 3.0])
def test_exponential_decay(r):
    rho = np.linspace(5.0, 60.0, 200)
    ang = np.linspace(0.05, math.pi - 0.05, 200)
    x, y = rho * np.cos(ang), rho * np.sin(ang)
    vals = np.array([green_halfplane_closed(a, b, r) for a, b in zip(x, y)])
    ratio = vals / np.exp(-r * rho / 2)
    # r y K1(r rho) / (pi rho) <= y/(pi rho^2) * max(z K1(z)) e^{-z/2} stays bounded
    assert ratio.max() <= 1.0
