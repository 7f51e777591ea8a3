"""Field containers and comparison reports."""

from dataclasses import asdict, dataclass, field
import math

import numpy as np

from .errors import ShapeError


@dataclass
class FieldGrid:
    """Values on the tensor grid ``ys x xs`` (row ``i`` is height ``ys[i]``).

    ``failed`` marks cells whose evaluation missed its tolerance; the field
    is *partial* if any are set.
    """

    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray
    err_estimates: np.ndarray
    failed: np.ndarray = None

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.ys = np.asarray(self.ys, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        self.err_estimates = np.asarray(self.err_estimates, dtype=float)
        shape = (self.ys.size, self.xs.size)
        if self.failed is None:
            self.failed = np.zeros(shape, dtype=bool)
        if self.values.shape != shape or self.err_estimates.shape != shape \
                or self.failed.shape != shape:
            raise ShapeError(f"field arrays must have shape {shape}")
        if np.any(np.diff(self.xs) <= 0) or np.any(np.diff(self.ys) <= 0):
            raise ShapeError("grid coordinates must be strictly increasing")

    @property
    def partial(self):
        return bool(self.failed.any())

    @property
    def shape(self):
        return self.values.shape

    def same_grid(self, other):
        return (self.xs.shape == other.xs.shape and self.ys.shape == other.ys.shape
                and np.array_equal(self.xs, other.xs) and np.array_equal(self.ys, other.ys))

    def flipped(self, height):
        """Field reflected by ``y -> height - y`` (rows reversed)."""
        return FieldGrid(self.xs.copy(), height - self.ys[::-1], self.values[::-1].copy(),
                         self.err_estimates[::-1].copy(), self.failed[::-1].copy())


@dataclass
class OracleReport:
    """Deviation statistics between an evaluation and its oracle."""

    name: str
    max_abs: float
    mean_abs: float
    max_rel: float
    mean_rel: float
    tol: float
    passed: bool
    metadata: dict = field(default_factory=dict)

    @classmethod
    def from_values(cls, name, values, reference, tol, metadata=None, rel_floor=1e-300):
        a = np.asarray(values, dtype=float).ravel()
        b = np.asarray(reference, dtype=float).ravel()
        if a.shape != b.shape:
            raise ShapeError(f"cannot compare shapes {a.shape} and {b.shape}")
        dev = np.abs(a - b)
        if dev.size == 0:
            return cls(name, 0.0, 0.0, 0.0, 0.0, tol, True, dict(metadata or {}))
        rel = dev / np.maximum(np.abs(b), rel_floor)
        max_abs = float(np.max(dev))
        passed = bool(np.all(np.isfinite(dev)) and max_abs <= tol)
        return cls(name, max_abs, float(np.mean(dev)), float(np.max(rel)),
                   float(np.mean(rel)), float(tol), passed, dict(metadata or {}))

    def to_dict(self):
        d = asdict(self)
        return _jsonable(d)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: max_abs={self.max_abs:.3e} tol={self.tol:.1e}"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj
