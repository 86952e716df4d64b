"""Q^k finite elements on rectangles with superconvergent nodal values.

Four discretizations of -div(A grad u) + c u = f are provided: exact
(high-order Gauss) quadrature, Gauss-Lobatto quadrature, and two schemes
that replace the coefficients by their Q^k interpolants.
"""

from .assembly import LinearSystem, Scheme, SchemeConfig, assemble
from .fields import Jet2, PiecewiseQk, ScalarField, eval_jet2, interpolate_Qk
from .mesh import BoundaryTag, Mesh, build_mesh
from .problems import ProblemSpec, get_problem, list_problems, problem_ids
from .projection import MTypeCoeffs, mtype_coeffs, mtype_project
from .quadrature import gauss_legendre_rule, gauss_lobatto_rule
from .report import ConvergenceReport, emit_table, error_on_Z0, parse_csv
from .solver import SolverError, solve
from .study import RunConfig, run_study, solve_problem

__all__ = [
    "BoundaryTag", "ConvergenceReport", "Jet2", "LinearSystem", "MTypeCoeffs", "Mesh",
    "PiecewiseQk", "ProblemSpec", "RunConfig", "ScalarField", "Scheme", "SchemeConfig",
    "SolverError", "assemble", "build_mesh", "emit_table", "error_on_Z0", "eval_jet2",
    "gauss_legendre_rule", "gauss_lobatto_rule", "get_problem", "interpolate_Qk",
    "list_problems", "mtype_coeffs", "mtype_project", "parse_csv", "problem_ids",
    "run_study", "solve", "solve_problem",
]
