"""Green functions and Dirichlet solvers for the static Klein-Gordon
equation ``(Delta - r^2) V = 0`` on the strip ``0 < y < pi`` and on the upper
half-plane, together with a general constant-coefficient elliptic operator
and independent numerical oracles (finite differences, disk solutions).
"""

from .boundary import BoundaryFunction, make_boundary, parse_boundary
from .bvp_solver import (FieldEvaluator, GridSpec, KernelSpec, convolve_kernel,
                         solve_halfplane, solve_halfplane_general, solve_strip,
                         solve_strip_general)
from .disk_validator import DiskProblem, disk_solution, mean_value_check
from .errors import (AccuracyError, DomainError, EllipticityError, RangeError,
                     SeriesDivergenceError, ShapeError, SingularityError, SKGEError,
                     SolverError, StabilityError)
from .fd_oracle import FdProblem, assemble_and_solve, compare_fields
from .fields import FieldGrid, OracleReport
from .general_elliptic import (DerivedChangeOfVariables, EllipticCoefficients,
                               derive_change_of_variables, green_halfplane_general,
                               green_halfplane_general_closed, green_strip_general)
from .halfplane_kernel import (green_halfplane_closed, green_halfplane_integral,
                               identity_gradshteyn_3914)
from .specfun import (bessel_i, bessel_j0, bessel_j1, bessel_k, bessel_k0, bessel_k1)
from .strip_kernel import (green_strip, green_strip_integral, green_strip_laplace,
                           green_strip_series, green_strip_via_j1)

__version__ = "0.1.0"
