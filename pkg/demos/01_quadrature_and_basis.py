"""
Quadrature rules and the nodal Q^k basis
========================================

Everything in the solver is built from two 1D ingredients: Gauss-Legendre
and Gauss-Lobatto rules, and the Lagrange basis on the Lobatto nodes.
"""

import numpy as np

from lobattofem import gauss_legendre_rule, gauss_lobatto_rule
from lobattofem.polynomials import LagrangeBasis1D, mtype_value

# The (k+1)-point Lobatto rule contains the endpoints.  It is exact to degree 2k-1.
for n in (3, 4, 5):
    rule = gauss_lobatto_rule(n)
    print(f"Lobatto n={n}: nodes {np.round(rule.nodes, 6)} weights {np.round(rule.weights, 6)}")

# Check exactness on monomials: the first failing degree is 2n-2.
rule = gauss_lobatto_rule(3)
for d in range(6):
    exact = 2.0 / (d + 1) if d % 2 == 0 else 0.0
    print(f"  t^{d}: quadrature {rule.integrate(lambda t: t ** d):+.6f}  exact {exact:+.6f}")

# Gauss rules of the same size go two degrees further.
print("Gauss n=3 integrates t^4:", gauss_legendre_rule(3).integrate(lambda t: t ** 4), "vs", 2 / 5)

# The interior Lobatto nodes are the roots of the M-type polynomial M_{k+1}.
k = 4
nodes = gauss_lobatto_rule(k + 1).nodes
print("M_5 at the 5 Lobatto nodes:", np.abs(mtype_value(k + 1, nodes)).max())

# The nodal basis is a Kronecker delta at the nodes and a partition of unity elsewhere.
basis = LagrangeBasis1D.from_nodes(nodes)
values, derivs = basis.tabulate(np.linspace(-1, 1, 7))
print("partition of unity:", np.allclose(values.sum(axis=1), 1.0),
      "| derivatives sum to zero:", np.allclose(derivs.sum(axis=1), 0.0))
