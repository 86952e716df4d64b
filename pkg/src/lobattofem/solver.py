"""Jacobi-preconditioned conjugate gradients, with constant-nullspace deflation."""

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-12
COMPATIBILITY_TOL = 1e-8


@dataclass
class SolveReport:
    iterations: int
    final_relative_residual: float
    deflated: bool = False
    converged: bool = True


class SolverError(RuntimeError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class IncompatibleRHSError(SolverError):
    pass


def _pcg(A, b, inv_diag, tol, max_iter, project=None):
    """Preconditioned CG from a zero initial guess.

    ``project`` (if given) is applied to the right-hand side and to every
    preconditioned residual, keeping the iteration in its range.
    """
    proj = project if project is not None else (lambda v: v)
    b = proj(b)
    bnorm = np.linalg.norm(b)
    x = np.zeros_like(b)
    if bnorm == 0.0:
        return x, 0, 0.0
    r = b.copy()
    z = proj(inv_diag * r)
    p = z.copy()
    rz = r @ z
    it = 0
    res = 1.0
    pAp = 1.0
    # a few restarts from the true residual guard against drift in r
    for _ in range(5):
        while it < max_iter:
            Ap = A @ p
            pAp = p @ Ap
            if not pAp > 0.0:
                # breakdown: the search direction has vanished at machine precision
                break
            alpha = rz / pAp
            x += alpha * p
            r -= alpha * Ap
            res = np.linalg.norm(r) / bnorm
            it += 1
            if res <= tol:
                break
            z = proj(inv_diag * r)
            rz_new = r @ z
            p = z + (rz_new / rz) * p
            rz = rz_new
        r = b - A @ x
        if project is not None:
            r = proj(r)
        res = np.linalg.norm(r) / bnorm
        if res <= tol or it >= max_iter or not pAp > 0.0:
            break
        z = proj(inv_diag * r)
        p = z.copy()
        rz = r @ z
    return x, it, res


def solve_spd(system, tol=DEFAULT_TOL, max_iter=None):
    """Solve a symmetric positive definite system; raise SolverError on failure."""
    A, b = system.matrix, np.asarray(system.rhs, dtype=float)
    n = len(b)
    max_iter = 10 * n if max_iter is None else max_iter
    inv_diag = 1.0 / A.diagonal()
    x, it, res = _pcg(A, b, inv_diag, tol, max_iter)
    report = SolveReport(it, res, deflated=False, converged=res <= tol)
    if not report.converged:
        raise SolverError(f"CG did not reach tol {tol:.1e} in {it} iterations "
                          f"(residual {res:.2e})", report)
    if system.constrained is not None:
        x[system.constrained] = system.constrained_values
    return x, report


def compatibility_defect(b):
    """|1^T b| / ||b||, zero for a right-hand side orthogonal to constants."""
    norm = np.linalg.norm(b)
    return 0.0 if norm == 0.0 else abs(b.sum()) / norm


def project_out_constants(b):
    return b - b.mean()


def solve_neumann_singular(system, tol=DEFAULT_TOL, max_iter=None):
    """Solve A x = b with A symmetric semidefinite and kernel = constants.

    Returns the solution with zero mean.  The right-hand side must already be
    compatible (orthogonal to constants).
    """
    A, b = system.matrix, np.asarray(system.rhs, dtype=float)
    defect = compatibility_defect(b)
    if defect > COMPATIBILITY_TOL:
        raise IncompatibleRHSError(
            f"right-hand side is not orthogonal to constants (defect {defect:.2e})")
    n = len(b)
    max_iter = 10 * n if max_iter is None else max_iter
    inv_diag = 1.0 / A.diagonal()
    x, it, res = _pcg(A, b, inv_diag, tol, max_iter, project=project_out_constants)
    x = project_out_constants(x)
    report = SolveReport(it, res, deflated=True, converged=res <= tol)
    if not report.converged:
        raise SolverError(f"deflated CG did not reach tol {tol:.1e} in {it} iterations "
                          f"(residual {res:.2e})", report)
    return x, report


def solve(system, tol=DEFAULT_TOL, max_iter=None):
    if system.constant_nullspace:
        return solve_neumann_singular(system, tol, max_iter)
    return solve_spd(system, tol, max_iter)
