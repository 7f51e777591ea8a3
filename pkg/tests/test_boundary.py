import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from skge.boundary import (REGISTRY, BoundaryFunction, constant, cosine, exp_step, gaussian,
                           holder_cusp, make_boundary, parse_boundary, smooth_bump, step)
from skge.errors import DomainError

SAMPLES = np.concatenate([np.linspace(-60, 60, 20001), np.linspace(-1.2, 1.2, 4001),
                          [0.0, 1e-12, -1e-12]])

ALL = [step(), exp_step(0.5), exp_step(3.0), gaussian(0.3, 0.7, -2.0), cosine(2.0),
       holder_cusp(0.5), holder_cusp(0.25), constant(-0.4), smooth_bump(1.5, 3.0)]


@pytest.mark.parametrize("phi", ALL, ids=lambda p: p.name)
def test_declared_properties_hold(phi):
    assert phi.check_invariants(SAMPLES) == []


@pytest.mark.parametrize("phi", ALL, ids=lambda p: p.name)
def test_vectorised(phi):
    u = np.linspace(-3, 3, 7)
    np.testing.assert_array_equal(phi(u), [phi(np.array([t]))[0] for t in u])


def test_check_invariants_detects_wrong_sup():
    bad = BoundaryFunction("bad", lambda u: 2.0 * np.ones_like(u), 1.0)
    assert "sup_bound" in bad.check_invariants(SAMPLES)


def test_check_invariants_detects_wrong_holder():
    bad = BoundaryFunction("bad", np.sqrt, 1.0, holder_exponent=1.0, holder_constant=1.0)
    assert "holder" in bad.check_invariants(np.linspace(0, 1, 1001))


def test_step_values():
    np.testing.assert_array_equal(step()(np.array([-1.0, 0.0, 2.0])), [0.0, 1.0, 1.0])
    assert step().right_constant == 1.0 and step().left_constant == 0.0


def test_cusp_shape():
    phi = holder_cusp(0.5)
    assert phi(np.array([0.0]))[0] == 1.0
    assert phi(np.array([0.25]))[0] == pytest.approx(0.5)
    assert phi(np.array([2.0]))[0] == 0.0


def test_compactness_flags():
    assert not cosine(1.0).compact
    assert gaussian().compact and smooth_bump().compact


@pytest.mark.parametrize("factory, kw", [(gaussian, dict(sigma=0.0)), (exp_step, dict(eps=-1.0)),
                                         (holder_cusp, dict(lam=1.5)),
                                         (smooth_bump, dict(radius=0.0))])
def test_factory_validation(factory, kw):
    with pytest.raises(DomainError):
        factory(**kw)


def test_parse_boundary():
    phi = parse_boundary("gaussian:mu=1,sigma=0.5")
    assert phi.name == "gaussian"
    assert phi.params == {"mu": 1.0, "sigma": 0.5, "amplitude": 1.0}
    assert parse_boundary("step").name == "step"


@pytest.mark.parametrize("text", ["nope", "gaussian:mu", "gaussian:mu=x", "gaussian:bogus=1"])
def test_parse_boundary_errors(text):
    with pytest.raises(DomainError):
        parse_boundary(text)


def test_registry_builds_every_entry():
    for name in REGISTRY:
        assert make_boundary(name).name == name


@settings(max_examples=40, deadline=None)
@given(st.floats(-5, 5), st.floats(0.1, 3), st.floats(-4, 4))
def test_gaussian_bounds(mu, sigma, amp):
    phi = gaussian(mu, sigma, amp)
    u = np.linspace(mu - 12 * sigma, mu + 12 * sigma, 2001)
    assert phi.check_invariants(u) == []
    assert phi.deviation_bound >= np.abs(phi(u)).max()
