"""
The M-type projection as a superconvergence oracle
==================================================

The nodal error of the finite element solution is compared, in the analysis,
with the M-type projection u_p of the exact solution.  u_p is itself a
piecewise Q^k function whose grid values are O(h^(k+2)) accurate.
"""

import numpy as np

from lobattofem import build_mesh, error_on_Z0, interpolate_Qk, mtype_project
from lobattofem.problems import U_EXACT, poisson_coefficient
from lobattofem.quadrature import gauss_legendre_rule

domain = (0.0, 1.0, 0.0, 2.0)

for k, sizes in ((2, (4, 8, 16, 32, 64)), (3, (4, 8, 16, 32))):
    errors = [error_on_Z0(mtype_project(U_EXACT, build_mesh(domain, n, 2 * n, k)), U_EXACT)[0]
              for n in sizes]
    orders = np.log2(np.array(errors[:-1]) / errors[1:])
    print(f"k={k}  |u - u_p| on the grid: " + "  ".join(f"{e:.2e}" for e in errors))
    print(f"      orders: " + "  ".join(f"{o:.2f}" for o in orders) + f"   (expected {k + 2})")

# The interpolant of a smooth coefficient converges at order k+1 away from the nodes.
# The Table-1 coefficient has large derivatives near y = 2, so coarse meshes lag behind.
a = poisson_coefficient()
for k in (2, 3):
    g = gauss_legendre_rule(2 * k + 2).nodes
    S, T = np.meshgrid(g, g)
    errors = []
    for n in (4, 8, 16, 32, 64, 128):
        mesh = build_mesh(domain, n, 2 * n, k)
        x = (mesh.cell_centers[:, :1] + mesh.hx * S.ravel()).ravel()
        y = (mesh.cell_centers[:, 1:] + mesh.hy * T.ravel()).ravel()
        errors.append(np.max(np.abs(interpolate_Qk(a, mesh)(x, y) - a(x, y))))
    orders = np.log2(np.array(errors[:-1]) / errors[1:])
    print(f"k={k}  max |a - a_I| orders: " + "  ".join(f"{o:.2f}" for o in orders))
