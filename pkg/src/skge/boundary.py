"""Boundary data for the Dirichlet solvers.

A :class:`BoundaryFunction` bundles a vectorised callable with the facts the
solvers need to integrate it safely: a bound on its size, its Holder
exponent, where it stops being smooth and what it equals far to the left and
right.  ``REGISTRY`` maps names to factories; :func:`make_boundary` builds
one from a name and keyword parameters, as the CLI does.
"""

from dataclasses import dataclass, field
import math
from typing import Callable, Tuple

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class BoundaryFunction:
    """Bounded boundary data ``phi(u)``.

    Attributes
    ----------
    func : callable
        Vectorised ``phi``.
    sup_bound : float
        Upper bound on ``|phi|``.
    holder_exponent, holder_constant : float
        ``|phi(u) - phi(v)| <= C |u - v|^lambda`` away from ``breakpoints``
        where ``phi`` jumps (exponent 0 means only boundedness is claimed).
    left_constant, right_constant : float
        ``phi`` equals these for ``u < -support_radius`` and
        ``u > support_radius`` respectively (up to below 1e-17 relative,
        for rapidly decaying data).  ``support_radius = inf`` means no such
        claim; the constants are then only used to centre the integrand.
    breakpoints : tuple of float
        Abscissae of jumps or kinks; quadrature panels are split there.
    length_scale : float
        Shortest length on which ``phi`` varies; caps quadrature panel widths.
    """

    name: str
    func: Callable
    sup_bound: float
    holder_exponent: float = 1.0
    holder_constant: float = 1.0
    left_constant: float = 0.0
    right_constant: float = 0.0
    support_radius: float = math.inf
    breakpoints: Tuple[float, ...] = ()
    length_scale: float = math.inf
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (self.sup_bound >= 0 and math.isfinite(self.sup_bound)):
            raise DomainError("sup_bound must be finite and non-negative")
        if not 0.0 <= self.holder_exponent <= 1.0:
            raise DomainError("holder_exponent must lie in [0, 1]")
        if self.support_radius < 0:
            raise DomainError("support_radius must be non-negative")

    def __call__(self, u):
        return self.func(np.asarray(u, dtype=float))

    @property
    def compact(self):
        return math.isfinite(self.support_radius)

    @property
    def deviation_bound(self):
        """Bound on ``|phi - c|`` for either tail constant ``c``."""
        return self.sup_bound + max(abs(self.left_constant), abs(self.right_constant))

    def check_invariants(self, samples):
        """Return the list of declared properties violated on ``samples``."""
        u = np.sort(np.asarray(samples, dtype=float))
        v = self(u)
        problems = []
        if np.any(np.abs(v) > self.sup_bound * (1 + 1e-12) + 1e-300):
            problems.append("sup_bound")
        if self.compact:
            R = self.support_radius
            if np.any(np.abs(v[u < -R] - self.left_constant) > 1e-15 * max(1.0, self.sup_bound)):
                problems.append("left_constant")
            if np.any(np.abs(v[u > R] - self.right_constant) > 1e-15 * max(1.0, self.sup_bound)):
                problems.append("right_constant")
        if self.holder_exponent > 0 and u.size > 1:
            a, b = u[:-1], u[1:]
            bp = np.asarray(self.breakpoints, dtype=float)
            crosses = np.zeros(a.size, dtype=bool)
            for p in bp:
                crosses |= (a < p) & (b > p)
            h = b - a
            ok = (h > 0) & ~crosses
            lhs = np.abs(v[1:] - v[:-1])[ok]
            rhs = self.holder_constant * h[ok] ** self.holder_exponent
            if np.any(lhs > rhs * (1 + 1e-9) + 1e-14):
                problems.append("holder")
        return problems


def step():
    """Heaviside step ``Theta(u)`` (value 1 at ``u = 0``)."""
    return BoundaryFunction("step", lambda u: np.where(u >= 0, 1.0, 0.0), 1.0,
                            holder_exponent=0.0, holder_constant=0.0,
                            left_constant=0.0, right_constant=1.0, support_radius=0.0,
                            breakpoints=(0.0,))


def exp_step(eps=1.0):
    """``exp(-eps u) Theta(u)``."""
    if not eps > 0:
        raise DomainError("eps must be positive")

    def f(u):
        return np.where(u >= 0, np.exp(-eps * np.maximum(u, 0.0)), 0.0)
    return BoundaryFunction("exp_step", f, 1.0, holder_exponent=0.0, holder_constant=0.0,
                            support_radius=40.0 / eps, breakpoints=(0.0,),
                            length_scale=1.0 / eps,
                            params={"eps": eps})


def gaussian(mu=0.0, sigma=1.0, amplitude=1.0):
    """``amplitude * exp(-(u - mu)^2 / (2 sigma^2))``."""
    if not sigma > 0:
        raise DomainError("sigma must be positive")

    def f(u):
        return amplitude * np.exp(-0.5 * ((u - mu) / sigma) ** 2)
    # Lipschitz constant of the Gaussian: e^{-1/2} / sigma
    return BoundaryFunction("gaussian", f, abs(amplitude),
                            holder_constant=abs(amplitude) * math.exp(-0.5) / sigma,
                            support_radius=abs(mu) + 9.0 * sigma, length_scale=sigma,
                            params={"mu": mu, "sigma": sigma, "amplitude": amplitude})


def cosine(a=1.0):
    """``cos(a u)``; not compactly supported."""
    return BoundaryFunction("cosine", lambda u: np.cos(a * u), 1.0,
                            holder_constant=abs(a),
                            length_scale=1.0 / abs(a) if a else math.inf, params={"a": a})


def holder_cusp(lam=0.5):
    """Bump ``max(0, 1 - |u|^lam)`` with a Holder-``lam`` cusp at the origin."""
    if not 0 < lam <= 1:
        raise DomainError("lam must lie in (0, 1]")

    def f(u):
        return np.maximum(0.0, 1.0 - np.abs(u) ** lam)
    return BoundaryFunction("holder_cusp", f, 1.0, holder_exponent=lam,
                            holder_constant=1.0, support_radius=1.0,
                            breakpoints=(-1.0, 0.0, 1.0), length_scale=0.5, params={"lam": lam})


def constant(c=1.0):
    """Constant data ``c``."""
    return BoundaryFunction("constant", lambda u: np.full_like(u, c, dtype=float), abs(c),
                            holder_constant=0.0, left_constant=c, right_constant=c,
                            support_radius=0.0, params={"c": c})


def smooth_bump(radius=1.0, amplitude=1.0):
    """``amplitude * exp(1 - 1/(1 - (u/radius)^2))`` on ``|u| < radius``, zero outside."""
    if not radius > 0:
        raise DomainError("radius must be positive")

    def f(u):
        t = (u / radius) ** 2
        out = np.zeros_like(u, dtype=float)
        inside = t < 1.0
        out[inside] = amplitude * np.exp(1.0 - 1.0 / (1.0 - t[inside]))
        return out
    # max |phi'| of the bump is below 2.5 / radius
    return BoundaryFunction("smooth_bump", f, abs(amplitude),
                            holder_constant=2.5 * abs(amplitude) / radius,
                            support_radius=radius, breakpoints=(-radius, radius),
                            length_scale=0.25 * radius,
                            params={"radius": radius, "amplitude": amplitude})


REGISTRY = {
    "step": step,
    "exp_step": exp_step,
    "gaussian": gaussian,
    "cosine": cosine,
    "holder_cusp": holder_cusp,
    "constant": constant,
    "smooth_bump": smooth_bump,
}


def make_boundary(name, **params):
    """Build registered boundary data by name."""
    try:
        factory = REGISTRY[name]
    except KeyError:
        raise DomainError(f"unknown boundary function {name!r}; "
                          f"choose from {sorted(REGISTRY)}") from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {name!r}: {exc}") from None


def parse_boundary(text):
    """Parse ``"name"`` or ``"name:key=value,key=value"``."""
    name, _, rest = text.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise DomainError(f"expected key=value in {text!r}")
            try:
                params[key.strip()] = float(value)
            except ValueError:
                raise DomainError(f"non-numeric value in {text!r}") from None
    return make_boundary(name.strip(), **params)
