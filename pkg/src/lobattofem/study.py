"""Mesh-refinement studies: build, assemble, solve and measure on each mesh."""

import logging
from dataclasses import dataclass, field

from .assembly import Scheme, SchemeConfig, assemble
from .mesh import build_mesh
from .problems import NEUMANN, get_problem
from .report import ConvergenceReport, emit_table, error_on_Z0, mean_matched
from .solver import DEFAULT_TOL, SolverError, compatibility_defect, project_out_constants, solve

log = logging.getLogger(__name__)

DEFAULT_MESHES = ((2, 4), (4, 8), (8, 16), (16, 32), (32, 64))


@dataclass
class RunConfig:
    problem: str = "poisson_table1"
    scheme: Scheme = Scheme.INTERP_COEFF
    bc: str = None
    k: int = 2
    meshes: tuple = DEFAULT_MESHES
    tol: float = DEFAULT_TOL
    out: str = None
    format: str = "csv"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.scheme = Scheme(self.scheme)
        self.meshes = tuple(tuple(int(v) for v in m) for m in self.meshes)
        if self.k < 2:
            raise ValueError(f"k must be at least 2, got {self.k}")
        if not self.meshes:
            raise ValueError("empty mesh sequence")
        if self.format not in ("csv", "markdown"):
            raise ValueError(f"unknown format {self.format!r}")


class StudyError(RuntimeError):
    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


def solve_problem(problem, nx, ny, k, scheme, tol=DEFAULT_TOL):
    """Discrete nodal solution on an nx-by-ny mesh; returns (mesh, values, solve report).

    Pure-Neumann systems get their load projected onto the range of the
    operator.  For every Neumann problem with a known exact solution the
    returned values are shifted to the exact solution's grid mean.
    """
    mesh = build_mesh(problem.domain, nx, ny, k)
    config = SchemeConfig(Scheme(scheme), k)
    system = assemble(mesh, problem, config)
    if system.constant_nullspace:
        defect = compatibility_defect(system.rhs)
        log.debug("%dx%d: discrete compatibility defect %.2e", nx, ny, defect)
        system = type(system)(system.mesh, system.matrix, project_out_constants(system.rhs),
                              constant_nullspace=True)
    values, report = solve(system, tol=tol)
    if problem.bc == NEUMANN and problem.u is not None:
        values = mean_matched(values, problem.u, mesh)
    return mesh, values, report


def run_study(config):
    """Run the refinement study described by ``config`` and return its report."""
    entry = get_problem(config.problem)
    problem = entry.problem(config.bc, **config.params)
    report = ConvergenceReport(metadata={
        "problem": config.problem, "scheme": config.scheme.value,
        "bc": problem.bc, "k": config.k})
    for nx, ny in config.meshes:
        try:
            mesh, values, solve_report = solve_problem(
                problem, nx, ny, config.k, config.scheme, config.tol)
        except SolverError as exc:
            raise StudyError(f"solver failed on mesh {nx}x{ny}: {exc}", report) from exc
        l2, linf = error_on_Z0(values, problem.u, mesh)
        log.info("%dx%d: l2=%.3e linf=%.3e (%d CG iterations)",
                 nx, ny, l2, linf, solve_report.iterations)
        report.add(nx, ny, l2, linf)
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(emit_table(report, config.format))
    return report
