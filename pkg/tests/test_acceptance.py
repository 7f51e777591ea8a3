"""The twelve acceptance criteria, each at its stated tolerance.

Every criterion prints one ``PASS``/``FAIL`` line (also collected in the
pytest terminal summary).  Run this file directly to get just those lines::

    python3 tests/test_acceptance.py
"""

import math
import time

import numpy as np
import pytest

from skge import suites


def _all(reports):
    return all(r.passed for r in reports)


def _worst(reports):
    return max(r.max_abs for r in reports)


def c01_representations():
    reps = suites.strip_representation_reports()
    n = reps[0].metadata["points"]
    return _all(reps), f"max pairwise deviation {_worst(reps):.2e} over {n} points (limit 1e-07)"


def c02_laplace_reduction():
    rep = suites.laplace_reduction_report()
    return rep.passed, f"max deviation {rep.max_abs:.2e} (limit 1e-09)"


def c03_halfplane():
    rep = suites.halfplane_representation_report()
    g = suites.gradshteyn_reports()
    ok = rep.passed and _all(g) and len(g) == 6
    return ok, (f"closed vs integral {rep.max_abs:.2e} over {rep.metadata['points']} points "
                f"(limit 1e-07); 6 identity triples worst {_worst(g):.2e} (limit 1e-08)")


def c04_mass():
    reps = suites.mass_suite()
    return _all(reps), "; ".join(f"{r.name} {r.max_abs:.2e}" for r in reps) + " (limit 1e-07)"


def c05_separable():
    reps = suites.separable_suite(tol=1e-7)
    ok = _all(reps) and not any(r.metadata["partial"] for r in reps)
    return ok, f"{len(reps)} fields on 41x21, worst {_worst(reps):.2e} (limit 1e-06)"


def c06_fd_convergence():
    reps = suites.fd_oracle_suite()
    parts = [f"{r.name[10:]} err {r.max_abs:.1e} order {r.metadata['min_order']:.2f}"
             for r in reps]
    return _all(reps), "; ".join(parts) + " (need order >= 1.8, err <= 5e-3)"


def c07_pde_residual():
    rows = suites.pde_residual_suite()
    ok = all(min(orders) >= 1.8 for _, _, orders in rows)
    parts = [f"{name} order {min(orders):.2f}" for name, _, orders in rows]
    return ok, "; ".join(parts) + " (need >= 1.8)"


def c08_boundary_recovery():
    rows = suites.boundary_recovery_suite()
    ok = all(p for *_, p in rows)
    worst = max(errs[-1] for _, errs, _, _ in rows)
    mono = all(m for _, _, m, _ in rows)
    return ok, (f"{len(rows)} cases, monotone={mono}, worst error at y=0.025 {worst:.4f} "
                f"(limit 0.02)")


def c09_mean_value():
    reps = suites.mean_value_suite(tol=1e-6)
    return _all(reps), f"{len(reps)} circles, worst deviation {_worst(reps):.2e} (limit 1e-06)"


def c10_max_principle():
    reps = suites.max_principle_reports()
    return _all(reps), f"{len(reps)} fields, worst excess {_worst(reps):.2e} (slack 1e-09)"


def c11_general_reduction():
    reps = suites.general_reduction_reports()
    return _all(reps), f"{len(reps)} kernel/field comparisons, worst {_worst(reps):.2e} (limit 1e-08)"


def c12_specfun():
    reps = suites.specfun_reports()
    return _all(reps), "; ".join(f"{r.name} {r.max_abs:.1e}/{r.tol:.0e}" for r in reps)


CRITERIA = [
    (1, "representation equivalence", c01_representations),
    (2, "Laplace reduction", c02_laplace_reduction),
    (3, "half-plane closed form and identity", c03_halfplane),
    (4, "mass identities", c04_mass),
    (5, "separable-solution exactness", c05_separable),
    (6, "FD oracle convergence", c06_fd_convergence),
    (7, "PDE residual", c07_pde_residual),
    (8, "boundary recovery", c08_boundary_recovery),
    (9, "screened mean value", c09_mean_value),
    (10, "maximum principle", c10_max_principle),
    (11, "general-operator reduction", c11_general_reduction),
    (12, "special functions", c12_specfun),
]


def _line(num, title, ok, detail, seconds):
    return f"{'PASS' if ok else 'FAIL'} criterion {num:2d} {title}: {detail} [{seconds:.1f}s]"


@pytest.mark.slow
@pytest.mark.parametrize("num, title, check", CRITERIA, ids=[f"c{n:02d}" for n, *_ in CRITERIA])
def test_criterion(num, title, check, record_criterion):
    t0 = time.perf_counter()
    ok, detail = check()
    record_criterion(_line(num, title, ok, detail, time.perf_counter() - t0))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for num, title, check in CRITERIA:
        t0 = time.perf_counter()
        ok, detail = check()
        failed += not ok
        print(_line(num, title, ok, detail, time.perf_counter() - t0), flush=True)
    raise SystemExit(1 if failed else 0)
