"""Global systems for the four Q^k schemes.

=================  ===========================================================
variant            bilinear form / load
=================  ===========================================================
``full``           exact coefficients, (k+3)-point Gauss per axis for both
``lobatto``        (k+1)-point Gauss-Lobatto per axis for every integral
``interp-coeff``   Q^k-interpolated coefficients integrated exactly,
                   load by (k+1)-point Gauss-Lobatto
``interp-coeff-fi`` Q^k-interpolated coefficients integrated exactly,
                   load (f_I, v) integrated exactly
=================  ===========================================================
"""

from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .polynomials import LagrangeBasis1D
from .problems import DIRICHLET, NEUMANN
from .quadrature import gauss_legendre_rule, gauss_lobatto_rule


class Scheme(Enum):
    FULL = "full"
    LOBATTO = "lobatto"
    INTERP_COEFF = "interp-coeff"
    INTERP_COEFF_FI = "interp-coeff-fi"

    @property
    def interpolates_coefficients(self):
        return self in (Scheme.INTERP_COEFF, Scheme.INTERP_COEFF_FI)


@dataclass(frozen=True)
class SchemeConfig:
    variant: Scheme
    k: int

    def __post_init__(self):
        object.__setattr__(self, "variant", Scheme(self.variant))
        if self.k < 2:
            raise ValueError(f"k must be at least 2, got {self.k}")

    def stiffness_rule(self):
        k = self.k
        if self.variant is Scheme.FULL:
            return gauss_legendre_rule(k + 3)
        if self.variant is Scheme.LOBATTO:
            return gauss_lobatto_rule(k + 1)
        # a_I dphi dphi has degree <= 3k per axis
        return gauss_legendre_rule(max(k + 2, -(-(3 * k + 1) // 2)))


@dataclass(frozen=True, eq=False)
class LinearSystem:
    mesh: object
    matrix: sp.csr_matrix
    rhs: np.ndarray
    constrained: np.ndarray = None
    constrained_values: np.ndarray = None
    constant_nullspace: bool = False


@lru_cache(maxsize=None)
def _tables(k, rule_kind, n):
    """Reference basis values and derivatives at a tensor rule, s fastest.

    Returns (weights, B, Ds, Dt) with B[q, i] = phi_i(s_q, t_q).
    """
    rule = gauss_legendre_rule(n) if rule_kind == "gauss" else gauss_lobatto_rule(n)
    basis = LagrangeBasis1D.from_nodes(gauss_lobatto_rule(k + 1).nodes)
    L, dL = basis.tabulate(rule.nodes)
    # q = (qt, qs), i = (b, a)
    B = np.einsum("sa,tb->tsba", L, L).reshape(n * n, -1)
    Ds = np.einsum("sa,tb->tsba", dL, L).reshape(n * n, -1)
    Dt = np.einsum("sa,tb->tsba", L, dL).reshape(n * n, -1)
    w = np.outer(rule.weights, rule.weights).ravel()
    for arr in (B, Ds, Dt, w):
        arr.setflags(write=False)
    return rule.nodes, w, B, Ds, Dt


def _rule_key(rule):
    return ("gauss" if rule.kind.value == "GaussLegendre" else "lobatto", len(rule))


def _cell_points(centers, hx, hy, nodes):
    s, t = np.meshgrid(nodes, nodes, indexing="xy")
    x = centers[:, 0:1] + hx * s.ravel()[None, :]
    y = centers[:, 1:2] + hy * t.ravel()[None, :]
    return x, y


def _coefficient_at_quadrature(field, centers, hx, hy, k, scheme, rule):
    """Field values at every cell's quadrature points, shape (n_cells, n_q)."""
    kind, n = _rule_key(rule)
    nodes, _, B, _, _ = _tables(k, kind, n)
    if scheme.interpolates_coefficients:
        lob = gauss_lobatto_rule(k + 1).nodes
        xn, yn = _cell_points(centers, hx, hy, lob)
        return field(xn, yn) @ B.T
    x, y = _cell_points(centers, hx, hy, nodes)
    return np.asarray(field(x, y), dtype=float)


def _element_matrices(centers, hx, hy, problem, config):
    k, scheme = config.k, config.variant
    rule = config.stiffness_rule()
    _, w, B, Ds, Dt = _tables(k, *_rule_key(rule))
    Dx, Dy = Ds / hx, Dt / hy
    nb = B.shape[1]
    jw = hx * hy * w

    def coef(field):
        return _coefficient_at_quadrature(field, centers, hx, hy, k, scheme, rule) * jw

    def pair(P, Q):
        return np.einsum("qi,qj->qij", P, Q).reshape(len(w), nb * nb)

    K = coef(problem.a11) @ pair(Dx, Dx) + coef(problem.a22) @ pair(Dy, Dy)
    if not problem.a12.is_zero:
        K += coef(problem.a12) @ pair(Dx, Dy)
    if not problem.a21.is_zero:
        K += coef(problem.a21) @ pair(Dy, Dx)
    if not problem.c.is_zero:
        K += coef(problem.c) @ pair(B, B)
    return K.reshape(-1, nb, nb)


def element_matrix(cell, problem, config):
    """Dense (k+1)^2 x (k+1)^2 element matrix, test index first."""
    centers = np.array([cell.center], dtype=float)
    return _element_matrices(centers, cell.half_widths[0], cell.half_widths[1], problem, config)[0]


def element_matrices(mesh, problem, config):
    return _element_matrices(mesh.cell_centers, mesh.hx, mesh.hy, problem, config)


def element_loads(mesh, problem, config):
    k, scheme = config.k, config.variant
    centers, hx, hy = mesh.cell_centers, mesh.hx, mesh.hy
    jac = hx * hy
    if scheme is Scheme.FULL:
        nodes, w, B, _, _ = _tables(k, "gauss", k + 3)
        x, y = _cell_points(centers, hx, hy, nodes)
        return (problem.f(x, y) * (jac * w)) @ B
    lob = gauss_lobatto_rule(k + 1)
    x, y = _cell_points(centers, hx, hy, lob.nodes)
    fn = np.asarray(problem.f(x, y), dtype=float)
    if scheme is Scheme.INTERP_COEFF_FI:
        # (f_I, phi_i): degree 2k per axis, exact with k+1 Gauss points
        _, w, B, _, _ = _tables(k, "gauss", k + 1)
        mass = (B.T * (jac * w)) @ B
        return fn @ mass
    # Lagrange basis is a Kronecker delta at the Lobatto nodes
    return fn * (jac * np.outer(lob.weights, lob.weights).ravel())


def _scatter_matrix(mesh, Ke):
    table = mesh.cell_dof_table
    nb = table.shape[1]
    rows = np.repeat(table, nb, axis=1).ravel()
    cols = np.tile(table, (1, nb)).ravel()
    n = mesh.n_points
    A = sp.coo_matrix((Ke.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    A.sum_duplicates()
    A.sort_indices()
    return A


def _scatter_vector(mesh, Fe):
    return np.bincount(mesh.cell_dof_table.ravel(), weights=Fe.ravel(),
                       minlength=mesh.n_points)


def assemble_matrix(mesh, problem, config):
    return _scatter_matrix(mesh, element_matrices(mesh, problem, config))


def rhs_vector(mesh, problem, config):
    return _scatter_vector(mesh, element_loads(mesh, problem, config))


def _check_config(mesh, problem, config):
    if config.k != mesh.k:
        raise ValueError(f"scheme degree k={config.k} does not match mesh degree {mesh.k}")
    problem.validate()


def assemble(mesh, problem, config):
    """Assemble matrix and load, then impose the problem's boundary condition."""
    _check_config(mesh, problem, config)
    system = LinearSystem(mesh, assemble_matrix(mesh, problem, config),
                          rhs_vector(mesh, problem, config))
    if problem.bc == DIRICHLET:
        return apply_dirichlet(system, problem.u)
    if problem.bc == NEUMANN:
        return apply_neumann(system, problem, config)
    raise ValueError(f"unknown boundary condition {problem.bc!r}")


def apply_dirichlet(system, g):
    """Impose u = g at boundary grid points by symmetric elimination."""
    mesh = system.mesh
    bd = mesh.boundary_dofs
    pts = mesh.points[bd]
    values = np.asarray(g(pts[:, 0], pts[:, 1]), dtype=float)
    A = system.matrix
    rhs = system.rhs - A[:, bd] @ values
    keep = np.ones(mesh.n_points)
    keep[bd] = 0.0
    D = sp.diags(keep)
    A = (D @ A @ D + sp.diags(1.0 - keep)).tocsr()
    A.eliminate_zeros()
    A.sort_indices()
    rhs[bd] = values
    return replace(system, matrix=A, rhs=rhs, constrained=bd, constrained_values=values,
                   constant_nullspace=False)


# side name -> (fixed axis, at upper end, outward normal)
_SIDES = {
    "left": (0, False, (-1.0, 0.0)),
    "right": (0, True, (1.0, 0.0)),
    "bottom": (1, False, (0.0, -1.0)),
    "top": (1, True, (0.0, 1.0)),
}


def neumann_load(mesh, problem, config):
    """Boundary integrals of the conormal flux (A grad u) . n against each basis function.

    The line rule follows the bilinear form: Gauss for ``full``, Gauss-Lobatto
    for ``lobatto``, and for the interpolated-coefficient schemes the edge
    trace of A_I is integrated with the same Gauss rule as the stiffness.
    """
    k, scheme = config.k, config.variant
    n = k + 1
    if scheme is Scheme.LOBATTO:
        rule = gauss_lobatto_rule(k + 1)
    else:
        rule = config.stiffness_rule()
    L, _ = mesh.basis.tabulate(rule.nodes)
    lob = gauss_lobatto_rule(k + 1).nodes
    load = np.zeros(mesh.n_points)
    table = mesh.cell_dof_table.reshape(mesh.ny, mesh.nx, n, n)
    centers_grid = mesh.cell_centers.reshape(mesh.ny, mesh.nx, 2)
    names = ("a11", "a12", "a21", "a22")
    for fixed_axis, upper, (nx_, ny_) in _SIDES.values():
        if fixed_axis == 0:
            col = mesh.nx - 1 if upper else 0
            dofs = table[:, col, :, -1 if upper else 0]  # (ny, n) along t
            centers = centers_grid[:, col]
            edge = mesh.domain[1] if upper else mesh.domain[0]

            def along(nodes, centers=centers, edge=edge):
                y = centers[:, 1:2] + mesh.hy * nodes[None, :]
                return np.full_like(y, edge), y
            length = mesh.hy
        else:
            row = mesh.ny - 1 if upper else 0
            dofs = table[row, :, -1 if upper else 0, :]  # (nx, n) along s
            centers = centers_grid[row]
            edge = mesh.domain[3] if upper else mesh.domain[2]

            def along(nodes, centers=centers, edge=edge):
                x = centers[:, 0:1] + mesh.hx * nodes[None, :]
                return x, np.full_like(x, edge)
            length = mesh.hx
        x, y = along(rule.nodes)
        if scheme.interpolates_coefficients:
            # the trace of a Q^k interpolant is the 1D interpolant of the trace
            xn, yn = along(lob)
            A = {name: np.asarray(getattr(problem, name)(xn, yn), dtype=float) @ L.T
                 for name in names}
        else:
            A = {name: getattr(problem, name)(x, y) for name in names}
        g = problem.u.jet(x, y)
        flux = (nx_ * (A["a11"] * g.gx + A["a12"] * g.gy)
                + ny_ * (A["a21"] * g.gx + A["a22"] * g.gy))
        contrib = (flux * (length * rule.weights)) @ L
        np.add.at(load, dofs.ravel(), contrib.ravel())
    return load


def apply_neumann(system, problem, config):
    rhs = system.rhs + neumann_load(system.mesh, problem, config)
    return replace(system, rhs=rhs, constrained=None, constrained_values=None,
                   constant_nullspace=problem.c.is_zero)
