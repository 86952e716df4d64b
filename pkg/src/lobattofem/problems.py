"""Elliptic test problems and the registry of the reference experiments.

Every problem is stored in the canonical form

    -div(A grad u) + b . grad u + c u = f

with a symmetric positive definite A.  The experiments are stated as
``div(a grad u) = f`` and ``div(A grad u) + c u = f``; since f is always
manufactured from the exact u, only the operator matters and it is
registered with a positive definite A and c >= 0.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .fields import ScalarField, cos, manufactured_rhs, sin

DIRICHLET = "dirichlet"
NEUMANN = "neumann"
BOUNDARY_CONDITIONS = (DIRICHLET, NEUMANN)


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    a11: ScalarField
    a12: ScalarField
    a21: ScalarField
    a22: ScalarField
    c: ScalarField
    u: ScalarField = None
    f: ScalarField = None
    bc: str = DIRICHLET
    domain: tuple = (0.0, 1.0, 0.0, 2.0)
    b1: ScalarField = field(default_factory=ScalarField.zero)
    b2: ScalarField = field(default_factory=ScalarField.zero)

    def __post_init__(self):
        if self.bc not in BOUNDARY_CONDITIONS:
            raise ValueError(f"unknown boundary condition {self.bc!r}")
        if self.f is None:
            if self.u is None:
                raise ValueError("need either an exact solution or a right-hand side")
            object.__setattr__(self, "f", manufactured_rhs(self))

    @classmethod
    def scalar(cls, a, c=None, **kwargs):
        """Isotropic coefficient a I."""
        zero = ScalarField.zero()
        return cls(a, zero, zero, a, c if c is not None else zero, **kwargs)

    @property
    def is_isotropic_diagonal(self):
        return self.a12.is_zero and self.a21.is_zero

    @property
    def has_reaction(self):
        return not self.c.is_zero

    def validate(self):
        if not (self.b1.is_zero and self.b2.is_zero):
            raise ValueError("advection terms are not supported; b must be zero")
        if self.a12 is not self.a21:
            x = np.linspace(*self.domain[:2], 7)
            y = np.linspace(*self.domain[2:], 7)
            X, Y = np.meshgrid(x, y)
            if not np.allclose(self.a12(X, Y), self.a21(X, Y), rtol=1e-14, atol=1e-14):
                raise ValueError("the coefficient tensor must be symmetric (a12 == a21)")
        return self

    def with_bc(self, bc):
        return replace(self, bc=bc)


def check_manufactured_rhs(problem, n_points=5, step=1e-5, rtol=1e-5, seed=0):
    """Compare f against central differences of the flux at random points.

    Returns the largest relative discrepancy; raises if above ``rtol``.
    """
    rng = np.random.default_rng(seed)
    x_lo, x_hi, y_lo, y_hi = problem.domain
    x = rng.uniform(x_lo + 0.1 * (x_hi - x_lo), x_hi - 0.1 * (x_hi - x_lo), n_points)
    y = rng.uniform(y_lo + 0.1 * (y_hi - y_lo), y_hi - 0.1 * (y_hi - y_lo), n_points)

    def flux(px, py):
        g = problem.u.jet(px, py)
        return (problem.a11(px, py) * g.gx + problem.a12(px, py) * g.gy,
                problem.a21(px, py) * g.gx + problem.a22(px, py) * g.gy)

    div = ((flux(x + step, y)[0] - flux(x - step, y)[0])
           + (flux(x, y + step)[1] - flux(x, y - step)[1])) / (2 * step)
    g = problem.u.jet(x, y)
    f_fd = -div + problem.b1(x, y) * g.gx + problem.b2(x, y) * g.gy + problem.c(x, y) * g.v
    f = problem.f(x, y)
    err = np.max(np.abs(f - f_fd) / np.maximum(1.0, np.abs(f)))
    if err > rtol:
        raise ValueError(f"manufactured right-hand side fails the difference check ({err:.2e})")
    return err


# --- reference fields -------------------------------------------------------

def _u_exact(x, y):
    return 0.1 * (sin(np.pi * x) + x ** 3) * (sin(np.pi * y) + y ** 3) + cos(x ** 4 + y ** 3)


U_EXACT = ScalarField(_u_exact, "0.1(sin(pi x)+x^3)(sin(pi y)+y^3)+cos(x^4+y^3)")


def poisson_coefficient(eps=0.1):
    return ScalarField(lambda x, y: 1.0 + eps * x ** 3 * y ** 5 + cos(x ** 3 * y ** 2 + 1.0),
                       f"1+{eps}x^3y^5+cos(x^3y^2+1)")


A11_MIXED = ScalarField(lambda x, y: 10.0 + 30.0 * y ** 5 + x * cos(y) + y, "10+30y^5+x cos(y)+y")
A12_MIXED = ScalarField(
    lambda x, y: 2.0 + 0.5 * (sin(np.pi * x) + x ** 3) * (sin(np.pi * y) + y ** 3) + cos(x ** 4 + y ** 3),
    "2+0.5(sin(pi x)+x^3)(sin(pi y)+y^3)+cos(x^4+y^3)")
A22_MIXED = ScalarField(lambda x, y: 10.0 + x ** 5, "10+x^5")
C_MIXED = ScalarField(lambda x, y: 1.0 + x ** 4 * y ** 3, "1+x^4y^3")


@dataclass(frozen=True)
class ProblemRegistryEntry:
    id: str
    build: object
    default_bc: str
    citation: str

    def problem(self, bc=None, **params):
        return self.build(bc or self.default_bc, **params).validate()


def _poisson(bc, eps=0.1):
    return ProblemSpec.scalar(poisson_coefficient(eps), u=U_EXACT, bc=bc)


def _mixed(bc, **_):
    return ProblemSpec(A11_MIXED, A12_MIXED, A12_MIXED, A22_MIXED, C_MIXED, u=U_EXACT, bc=bc)


def _robust(bc, eps=0.001):
    return _poisson(bc, eps=eps)


_REGISTRY = {}


def register(entry, check=True):
    if check:
        for bc in BOUNDARY_CONDITIONS:
            p = entry.build(bc)
            if p.u is not None:
                check_manufactured_rhs(p)
    _REGISTRY[entry.id] = entry
    return entry


def get_problem(problem_id):
    try:
        return _REGISTRY[problem_id]
    except KeyError:
        raise KeyError(f"unknown problem {problem_id!r}; known: {sorted(_REGISTRY)}") from None


def problem_ids():
    return sorted(_REGISTRY)


def list_problems():
    return "\n".join(f"{pid}\t{_REGISTRY[pid].default_bc}\t{_REGISTRY[pid].citation}"
                     for pid in problem_ids())


register(ProblemRegistryEntry(
    "poisson_table1", _poisson, DIRICHLET,
    "reference experiment 1: div(a grad u) = f, a = 1+0.1x^3y^5+cos(x^3y^2+1), Dirichlet"))
register(ProblemRegistryEntry(
    "poisson_table2", _poisson, NEUMANN,
    "reference experiment 2: same Poisson problem with Neumann boundary conditions"))
register(ProblemRegistryEntry(
    "elliptic_mixed_tables34", _mixed, NEUMANN,
    "reference experiments 3-4: full tensor a, c = 1+x^4y^3; Neumann -> 3, Dirichlet -> 4"))
register(ProblemRegistryEntry(
    "poisson_eps_table5", _robust, DIRICHLET,
    "reference experiment 5: a = 1+eps x^3y^5+cos(x^3y^2+1), eps = 0.001 by default, Dirichlet"))
