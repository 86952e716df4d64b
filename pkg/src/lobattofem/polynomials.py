"""Legendre polynomials, M-type polynomials and barycentric Lagrange bases."""

from dataclasses import dataclass

import numpy as np


def legendre_value(j, t):
    """Return (l_j(t), l_j'(t)) via the three-term recurrence.

    The derivative uses l'_{m+1} = l'_{m-1} + (2m + 1) l_m.
    """
    t = np.asarray(t, dtype=float)
    if j < 0:
        raise ValueError("Legendre degree must be non-negative")
    p_prev, p = np.zeros_like(t), np.ones_like(t)
    dp_prev, dp = np.zeros_like(t), np.zeros_like(t)
    for m in range(j):
        p_next = ((2 * m + 1) * t * p - m * p_prev) / (m + 1)
        dp_next = dp_prev + (2 * m + 1) * p
        p_prev, p = p, p_next
        dp_prev, dp = dp, dp_next
    return p, dp


def mtype_value(j, t):
    """M-type polynomial M_j(t): M_0 = 1, M_1 = t and M_{j+1} = (l_{j+1} - l_{j-1}) / (2j + 1).

    M_{j+1} is the antiderivative of l_j vanishing at t = -1.
    """
    t = np.asarray(t, dtype=float)
    if j < 0:
        raise ValueError("M-type degree must be non-negative")
    if j == 0:
        return np.ones_like(t)
    if j == 1:
        return t.copy()
    hi, _ = legendre_value(j, t)
    lo, _ = legendre_value(j - 2, t)
    return (hi - lo) / (2 * j - 1)


@dataclass(frozen=True, eq=False)
class LagrangeBasis1D:
    """Nodal basis on distinct nodes, evaluated with the second barycentric formula."""

    nodes: np.ndarray
    barycentric_weights: np.ndarray

    @classmethod
    def from_nodes(cls, nodes):
        nodes = np.array(nodes, dtype=float)
        diff = nodes[:, None] - nodes[None, :]
        np.fill_diagonal(diff, 1.0)
        if np.any(diff == 0.0):
            raise ValueError("Lagrange nodes must be distinct")
        w = 1.0 / np.prod(diff, axis=1)
        nodes.setflags(write=False)
        w.setflags(write=False)
        return cls(nodes, w)

    def __len__(self):
        return len(self.nodes)

    @property
    def differentiation_matrix(self):
        """D[j, i] = L_i'(x_j)."""
        x, w = self.nodes, self.barycentric_weights
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, 1.0)
        D = (w[None, :] / w[:, None]) / diff
        np.fill_diagonal(D, 0.0)
        np.fill_diagonal(D, -D.sum(axis=1))
        return D

    def tabulate(self, t):
        """Basis values and derivatives at points t; arrays of shape (len(t), n)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        x, w = self.nodes, self.barycentric_weights
        diff = t[:, None] - x[None, :]
        hit = diff == 0.0
        rows = hit.any(axis=1)
        diff[hit] = 1.0
        terms = w[None, :] / diff
        values = terms / terms.sum(axis=1, keepdims=True)
        values[rows] = hit[rows].astype(float)
        # L_i' has degree n - 2, so it is reproduced by its own nodal interpolant
        derivs = values @ self.differentiation_matrix
        return values, derivs


def lagrange_eval(basis, i, t):
    """Value and derivative of basis function i at a scalar t."""
    values, derivs = basis.tabulate([t])
    return values[0, i], derivs[0, i]
