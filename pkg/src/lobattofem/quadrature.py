"""Gauss-Legendre and Gauss-Lobatto rules on [-1, 1] and their tensor products."""

from dataclasses import dataclass
from enum import Enum

import numpy as np

NEWTON_TOL = 1e-15
NEWTON_MAXITER = 100


class RuleKind(Enum):
    GAUSS_LEGENDRE = "GaussLegendre"
    GAUSS_LOBATTO = "GaussLobatto"


class QuadratureConstructionError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Rule1D:
    nodes: np.ndarray
    weights: np.ndarray
    kind: RuleKind
    exact_degree: int

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self):
        return len(self.nodes)

    def integrate(self, f, a=-1.0, b=1.0):
        """Integrate a vectorised callable over [a, b]."""
        half = 0.5 * (b - a)
        x = 0.5 * (a + b) + half * self.nodes
        return half * np.dot(self.weights, f(x))


@dataclass(frozen=True, eq=False)
class Rule2D:
    rule_x: Rule1D
    rule_y: Rule1D

    @property
    def points(self):
        """Reference (s, t) pairs, s varying fastest; shape (n_x * n_y, 2)."""
        s, t = np.meshgrid(self.rule_x.nodes, self.rule_y.nodes, indexing="xy")
        return np.column_stack([s.ravel(), t.ravel()])

    @property
    def weights(self):
        return np.outer(self.rule_y.weights, self.rule_x.weights).ravel()

    def __len__(self):
        return len(self.rule_x) * len(self.rule_y)


def tensor_rule(rule_x, rule_y=None):
    return Rule2D(rule_x, rule_x if rule_y is None else rule_y)


def _legendre_pair(n, x):
    """Return P_n(x) and P_{n-1}(x) by the three-term recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    if n == 0:
        return p_prev, np.zeros_like(x)
    for m in range(1, n):
        p_prev, p = p, ((2 * m + 1) * x * p - m * p_prev) / (m + 1)
    return p, p_prev


def _symmetrize(x, w):
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    if len(x) % 2 == 1:
        x[len(x) // 2] = 0.0
    return x, w


def gauss_legendre_rule(n):
    """n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.

    Nodes are the roots of P_n, found by Newton iteration started from the
    Chebyshev-Gauss nodes.
    """
    if n < 1:
        raise ValueError(f"Gauss-Legendre rule needs n >= 1, got {n}")
    x = -np.cos(np.pi * (np.arange(n) + 0.5) / n)
    for _ in range(NEWTON_MAXITER):
        p, p_prev = _legendre_pair(n, x)
        dp = n * (x * p - p_prev) / (x * x - 1.0)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < NEWTON_TOL:
            break
    else:
        raise QuadratureConstructionError(
            f"Gauss-Legendre Newton iteration did not converge for n={n}")
    p, p_prev = _legendre_pair(n, x)
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    x, w = _symmetrize(x, w)
    return Rule1D(x, w, RuleKind.GAUSS_LEGENDRE, 2 * n - 1)


def gauss_lobatto_rule(n):
    """n-point Gauss-Lobatto rule: endpoints plus the roots of P'_{n-1}.

    Exact for polynomials of degree 2n-3.
    """
    if n < 2:
        raise ValueError(f"Gauss-Lobatto rule needs n >= 2, got {n}")
    N = n - 1
    x = -np.cos(np.pi * np.arange(n) / N)
    if n > 2:
        # Newton on (1 - x^2) P'_N; the endpoints are fixed points
        for _ in range(NEWTON_MAXITER):
            p, p_prev = _legendre_pair(N, x)
            dx = (x * p - p_prev) / (n * p)
            x = x - dx
            if np.max(np.abs(dx)) < NEWTON_TOL:
                break
        else:
            raise QuadratureConstructionError(
                f"Gauss-Lobatto Newton iteration did not converge for n={n}")
    x[0], x[-1] = -1.0, 1.0
    p, _ = _legendre_pair(N, x)
    w = 2.0 / (N * n * p * p)
    x, w = _symmetrize(x, w)
    return Rule1D(x, w, RuleKind.GAUSS_LOBATTO, 2 * n - 3)


def integrate_cell(f, cell, rule):
    """Integrate a vectorised f(x, y) over a rectangular cell with a tensor rule."""
    st = rule.points
    x = cell.center[0] + cell.half_widths[0] * st[:, 0]
    y = cell.center[1] + cell.half_widths[1] * st[:, 1]
    jac = cell.half_widths[0] * cell.half_widths[1]
    return jac * np.dot(rule.weights, np.broadcast_to(f(x, y), x.shape))
