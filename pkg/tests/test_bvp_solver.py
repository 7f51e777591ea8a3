"""Convolution solvers: exact solutions, linearity, symmetry and errors."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from skge.boundary import (BoundaryFunction, constant, cosine, gaussian, holder_cusp,
                           smooth_bump, step)
from skge.bvp_solver import (FieldEvaluator, GridSpec, KernelSpec, convolve_kernel,
                             solve_halfplane, solve_halfplane_general, solve_strip,
                             solve_strip_general)
from skge.errors import AccuracyError, DomainError
from skge.general_elliptic import (EllipticCoefficients, halfplane_general_mass,
                                   strip_general_mass)

GRID = GridSpec(-2.0, 2.0, 9, 0.0, math.pi, 7)
HGRID = GridSpec(-2.0, 2.0, 9, 0.0, 3.0, 7)
MIXED = EllipticCoefficients(1.3, 0.9, rho=-0.4, alpha1=-0.5, alpha2=0.7, r=0.3)


def test_grid_spec():
    g = GridSpec(0, 1, 3, 0, 2, 5)
    np.testing.assert_allclose(g.xs, [0, 0.5, 1])
    np.testing.assert_allclose(g.ys, [0, 0.5, 1, 1.5, 2])


def test_constant_data_strip_r1():
    F = solve_strip(constant(1.0), None, GRID, 1.0, tol=1e-10)
    exact = np.sinh(math.pi - GRID.ys) / math.sinh(math.pi)
    np.testing.assert_allclose(F.values, np.tile(exact[:, None], (1, 9)), atol=1e-10)
    assert not F.partial


def test_step_halfplane_laplace_closed_form():
    F = solve_halfplane(step(), HGRID, 0.0, tol=1e-10)
    X, Y = np.meshgrid(HGRID.xs, HGRID.ys)
    with np.errstate(divide="ignore", invalid="ignore"):
        exact = 0.5 + np.arctan2(X, Y) / math.pi
    inner = Y > 0
    np.testing.assert_allclose(F.values[inner], exact[inner], atol=1e-9)


def test_boundary_rows_hold_data():
    phi = gaussian(0.2, 0.6)
    F = solve_strip(phi, holder_cusp(0.5), GRID, 0.5, tol=1e-9)
    np.testing.assert_allclose(F.values[0], phi(GRID.xs))
    np.testing.assert_allclose(F.values[-1], holder_cusp(0.5)(GRID.xs))


def test_cosine_strip_separable():
    F = solve_strip(cosine(1.0), None, GRID, 1.0, tol=1e-9)
    X, Y = np.meshgrid(GRID.xs, GRID.ys)
    k = math.sqrt(2.0)
    exact = np.cos(X) * np.sinh(k * (math.pi - Y)) / math.sinh(k * math.pi)
    np.testing.assert_allclose(F.values, exact, atol=1e-8)


def test_zero_data_gives_zero_field():
    F = solve_strip(constant(0.0), None, GRID, 1.0, tol=1e-9)
    assert np.all(F.values == 0.0)


def test_linearity():
    a, b = gaussian(0.0, 1.0), smooth_bump(1.0, 2.0)
    Fa = solve_halfplane(a, HGRID, 1.0, tol=1e-10)
    Fb = solve_halfplane(b, HGRID, 1.0, tol=1e-10)
    combo = BoundaryFunction("sum", lambda u: a(u) + b(u), 3.0, support_radius=9.0,
                             breakpoints=(-1.0, 1.0), length_scale=0.25)
    Fc = solve_halfplane(combo, HGRID, 1.0, tol=1e-10)
    np.testing.assert_allclose(Fc.values, Fa.values + Fb.values, atol=1e-9)


def test_translation_equivariance():
    shift = 0.5
    g0 = GridSpec(-1.0, 1.0, 5, 0.2, 2.0, 4)
    g1 = GridSpec(-1.0 + shift, 1.0 + shift, 5, 0.2, 2.0, 4)
    F0 = solve_strip(gaussian(0.0, 0.8), None, g0, 0.7, tol=1e-10)
    F1 = solve_strip(gaussian(shift, 0.8), None, g1, 0.7, tol=1e-10)
    np.testing.assert_allclose(F1.values, F0.values, atol=1e-9)


def test_mirror_symmetry_of_even_data():
    F = solve_strip(gaussian(0.0, 1.0), None, GRID, 2.0, tol=1e-10)
    np.testing.assert_allclose(F.values, F.values[:, ::-1], atol=1e-10)


def test_top_data_equals_flipped_bottom_problem():
    phi = gaussian(0.3, 0.5)
    g = GridSpec(-2.0, 2.0, 9, 0.0, math.pi, 9)
    top_only = solve_strip(constant(0.0), phi, g, 1.0, tol=1e-10)
    bottom_only = solve_strip(phi, None, g, 1.0, tol=1e-10)
    np.testing.assert_allclose(top_only.values, bottom_only.values[::-1], atol=1e-10)


@pytest.mark.parametrize("solver", ["strip", "halfplane"])
def test_general_constant_data_matches_mass(solver):
    if solver == "strip":
        F = solve_strip_general(constant(1.0), GRID, MIXED, tol=1e-9)
        exact = strip_general_mass(GRID.ys, MIXED)
    else:
        F = solve_halfplane_general(constant(1.0), HGRID, MIXED, tol=1e-9)
        exact = halfplane_general_mass(HGRID.ys, MIXED)
    np.testing.assert_allclose(F.values, np.tile(exact[:, None], (1, 9)), atol=1e-9)


def test_error_estimates_within_tolerance():
    F = solve_strip(step(), None, GRID, 0.5, tol=1e-8)
    assert np.all(F.err_estimates[1:-1] <= 1e-8)


def test_convolve_kernel_point():
    v = convolve_kernel(KernelSpec("halfplane", 0.0), step(), 1.0, 1.0, 1e-10)
    assert v == pytest.approx(0.75, abs=1e-10)


def test_convolve_kernel_rejects_boundary_points():
    with pytest.raises(DomainError):
        convolve_kernel(KernelSpec("strip", 1.0), step(), 0.0, 0.0, 1e-8)


def test_kernel_spec_validation():
    with pytest.raises(DomainError):
        KernelSpec("disk", 1.0)
    with pytest.raises(DomainError):
        KernelSpec("strip", -1.0)


def test_noncompact_data_with_algebraic_kernel_is_reported():
    with pytest.raises(AccuracyError):
        FieldEvaluator(KernelSpec("halfplane", 0.0), cosine(1.0), 1e-10)(
            np.array([0.0]), np.array([1.0]))


def test_field_evaluator_matches_grid_solver():
    ev = FieldEvaluator(KernelSpec("strip", 1.0), gaussian(), 1e-10)
    F = solve_strip(gaussian(), None, GRID, 1.0, tol=1e-10)
    X, Y = np.meshgrid(GRID.xs, GRID.ys[1:-1])
    np.testing.assert_allclose(ev(X, Y), F.values[1:-1], atol=1e-10)


@settings(max_examples=12, deadline=None)
@given(st.floats(-3, 3), st.floats(0.05, 3.0), st.floats(0.0, 3.0))
def test_bounded_by_data(x, y, r):
    ev = FieldEvaluator(KernelSpec("strip", r), holder_cusp(0.5), 1e-9)
    v = ev(np.array([x]), np.array([y]))[0]
    assert -1e-9 <= v <= 1.0 + 1e-9
