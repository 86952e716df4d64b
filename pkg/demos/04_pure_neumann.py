"""
Pure Neumann problems: compatibility and gauge
==============================================

With flux data on the whole boundary and no zero-order term the stiffness
matrix annihilates constants.  The discrete load is compatible only up to a
quadrature error, so it is projected onto the range before deflated CG runs.
"""

import numpy as np

from lobattofem import SchemeConfig, assemble, build_mesh, get_problem, solve
from lobattofem.assembly import LinearSystem
from lobattofem.report import error_on_Z0, mean_matched
from lobattofem.solver import compatibility_defect, project_out_constants

problem = get_problem("poisson_table2").problem()

# The compatibility defect |1^T b| / |b| shrinks with the quadrature error.
for scheme in ("full", "lobatto", "interp-coeff"):
    defects = [compatibility_defect(assemble(build_mesh(problem.domain, n, 2 * n, 2), problem,
                                             SchemeConfig(scheme, 2)).rhs) for n in (4, 8, 16, 32)]
    print(f"{scheme:>13}: " + "  ".join(f"{d:.1e}" for d in defects))

mesh = build_mesh(problem.domain, 16, 32, 2)
system = assemble(mesh, problem, SchemeConfig("lobatto", 2))
system = LinearSystem(mesh, system.matrix, project_out_constants(system.rhs), constant_nullspace=True)
x, report = solve(system)
print(f"\ndeflated CG: {report.iterations} iterations, residual {report.final_relative_residual:.1e}")
print(f"mean of the solution: {x.mean():.1e}")

# The zero-mean solution differs from u by a constant; shift it to the grid mean of u.
print("error before the shift: l2=%.2e" % error_on_Z0(x, problem.u, mesh)[0])
print("error after the shift:  l2=%.2e" % error_on_Z0(mean_matched(x, problem.u, mesh), problem.u, mesh)[0])
