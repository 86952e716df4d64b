"""Per-cell M-type (point-line-plane) projection onto Q^k.

On the reference cell [-1, 1]^2 a smooth f is expanded as

    f(s, t) = sum_{i, j} b_{i,j} M_i(s) M_j(t)

and the Q^k projection keeps the terms with i, j <= k.  The corner
coefficients come from the four corner values, the edge coefficients from
tangential derivatives along the edges, and the interior ones from the mixed
derivative f_st, all tested against Legendre polynomials.
"""

from dataclasses import dataclass

import numpy as np

from .fields import PiecewiseQk
from .polynomials import legendre_value, mtype_value
from .quadrature import gauss_legendre_rule, gauss_lobatto_rule

CONTINUITY_TOL = 1e-10


@dataclass(frozen=True)
class MTypeCoeffs:
    """b[i, j] multiplies M_i(s) M_j(t) in reference-frame units."""

    b: np.ndarray

    @property
    def k(self):
        return self.b.shape[0] - 1

    def __call__(self, s, t):
        s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        Ms = np.stack([mtype_value(i, s) for i in range(self.k + 1)], axis=-1)
        Mt = np.stack([mtype_value(j, t) for j in range(self.k + 1)], axis=-1)
        return np.einsum("...i,ij,...j->...", Ms, self.b, Mt)


def _legendre_table(k, nodes):
    """Row j - 2 holds (2j - 1)/4 * l_{j-1} at the nodes, for j = 2..k."""
    return np.array([(2 * j - 1) / 4.0 * legendre_value(j - 1, nodes)[0]
                     for j in range(2, k + 1)]).reshape(-1, len(nodes))


def _coefficients(field, centers, hx, hy, k):
    """Coefficient arrays of shape (n_cells, k+1, k+1) for cells with the given centers."""
    centers = np.asarray(centers, dtype=float)
    cx, cy = centers[:, 0:1], centers[:, 1:2]
    nc = len(centers)
    b = np.zeros((nc, k + 1, k + 1))

    corner = [field(cx + hx * s, cy + hy * t)[:, 0] for s, t in ((-1, -1), (1, -1), (-1, 1), (1, 1))]
    fmm, fpm, fmp, fpp = corner
    b[:, 0, 0] = (fmm + fpm + fmp + fpp) / 4.0
    b[:, 1, 0] = (fpm + fpp - fmm - fmp) / 4.0
    b[:, 0, 1] = (fmp + fpp - fmm - fpm) / 4.0
    b[:, 1, 1] = (fpp + fmm - fpm - fmp) / 4.0
    if k < 2:
        return b

    rule = gauss_legendre_rule(k + 4)
    q, w = rule.nodes, rule.weights
    P = _legendre_table(k, q) * w  # (k-1, n_q), weights folded in

    # vertical edges s = +-1: f_t = hy * f_y
    xs = {sign: np.broadcast_to(cx + sign * hx, (nc, len(q))) for sign in (-1, 1)}
    yq = cy + hy * q
    ft = {sign: hy * field.jet(xs[sign], yq).gy for sign in (-1, 1)}
    b[:, 0, 2:] = (ft[1] + ft[-1]) @ P.T
    b[:, 1, 2:] = (ft[1] - ft[-1]) @ P.T

    # horizontal edges t = +-1: f_s = hx * f_x
    ys = {sign: np.broadcast_to(cy + sign * hy, (nc, len(q))) for sign in (-1, 1)}
    xq = cx + hx * q
    fs = {sign: hx * field.jet(xq, ys[sign]).gx for sign in (-1, 1)}
    b[:, 2:, 0] = (fs[1] + fs[-1]) @ P.T
    b[:, 2:, 1] = (fs[1] - fs[-1]) @ P.T

    # interior: f_st = hx * hy * f_xy, tensor Gauss points with s fastest
    S, T = np.meshgrid(q, q, indexing="xy")
    fst = hx * hy * field.jet(cx + hx * S.ravel(), cy + hy * T.ravel()).hxy
    fst = fst.reshape(nc, len(q), len(q))  # [cell, t, s]
    # each P row carries (2j - 1)/4, the interior weight is (2i - 1)(2j - 1)/4
    b[:, 2:, 2:] = 4.0 * np.einsum("cts,is,jt->cij", fst, P, P)
    return b


def mtype_coeffs(field, cell, k):
    """M-type coefficients of ``field`` on one cell."""
    hx, hy = cell.half_widths
    return MTypeCoeffs(_coefficients(field, [cell.center], hx, hy, k)[0])


def _nodal_values(b, k):
    """Values at the (k+1)^2 Lobatto nodes, s fastest."""
    lob = gauss_lobatto_rule(k + 1).nodes
    M = np.stack([mtype_value(i, lob) for i in range(k + 1)], axis=1)  # M[a, i] = M_i(s_a)
    # V[b, a] = sum_ij M_j(t_b) b_ij M_i(s_a)
    return np.einsum("ai,cij,bj->cba", M, b, M).reshape(len(b), -1)


def mtype_project(field, mesh, k=None):
    """Piecewise Q^k M-type projection of ``field`` as grid values.

    Cells are projected independently; values on shared edges must agree,
    otherwise an AssertionError is raised.
    """
    k = mesh.k if k is None else k
    if k != mesh.k:
        raise ValueError(f"projection degree {k} does not match mesh degree {mesh.k}")
    b = _coefficients(field, mesh.cell_centers, mesh.hx, mesh.hy, k)
    local = _nodal_values(b, k)
    table = mesh.cell_dof_table
    values = np.zeros(mesh.n_points)
    values[table.ravel()] = local.ravel()
    mismatch = np.max(np.abs(values[table] - local))
    scale = max(1.0, float(np.max(np.abs(local))))
    assert mismatch <= CONTINUITY_TOL * scale, (
        f"M-type projection discontinuous across cell edges ({mismatch:.2e})")
    return PiecewiseQk(mesh, values)
