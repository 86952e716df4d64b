"""Discrete error norms on the Lobatto grid and convergence tables."""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

ERROR_FLOOR = 1e-12
CSV_HEADER = ("mesh", "l2_error", "l2_order", "linf_error", "linf_order")


def error_on_Z0(u_h, u_exact, mesh=None):
    """Discrete l2 and max errors over all grid points.

    ``u_h`` is a PiecewiseQk or an array of grid values.  The l2 norm is
    scaled by the product of the average grid spacings.
    """
    mesh = mesh if mesh is not None else u_h.mesh
    values = getattr(u_h, "values", u_h)
    pts = mesh.points
    err = np.asarray(values) - u_exact(pts[:, 0], pts[:, 1])
    dx, dy = mesh.fd_spacing
    return math.sqrt(dx * dy * float(err @ err)), float(np.max(np.abs(err)))


def mean_matched(values, u_exact, mesh):
    """Shift grid values by the constant matching the mean of u_exact over the grid."""
    pts = mesh.points
    return values + (np.mean(u_exact(pts[:, 0], pts[:, 1])) - np.mean(values))


def convergence_orders(errors, ratio=2.0):
    """log_ratio(e_{i-1} / e_i) for successive errors."""
    errors = np.asarray(errors, dtype=float)
    if len(errors) < 2:
        raise ValueError("need at least two errors")
    if np.any(errors <= 0.0):
        raise ValueError("errors must be positive")
    return list(np.log(errors[:-1] / errors[1:]) / np.log(ratio))


def fitted_order(h, errors):
    """Least-squares slope of log(error) against log(h)."""
    return float(np.polyfit(np.log(h), np.log(errors), 1)[0])


@dataclass
class ConvergenceRow:
    nx: int
    ny: int
    l2_error: float
    linf_error: float
    l2_order: float = None
    linf_order: float = None

    @property
    def label(self):
        return f"{self.nx}x{self.ny}"


@dataclass
class ConvergenceReport:
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, nx, ny, l2_error, linf_error):
        row = ConvergenceRow(nx, ny, l2_error, linf_error)
        if self.rows:
            prev = self.rows[-1]
            if nx == 2 * prev.nx and ny == 2 * prev.ny:
                row.l2_order = _order(prev.l2_error, l2_error)
                row.linf_order = _order(prev.linf_error, linf_error)
        self.rows.append(row)
        return row

    @property
    def l2_errors(self):
        return [r.l2_error for r in self.rows]

    @property
    def linf_errors(self):
        return [r.linf_error for r in self.rows]


def _order(prev, cur):
    if prev < ERROR_FLOOR or cur < ERROR_FLOOR:
        return None
    return math.log2(prev / cur)


def format_error(value):
    """Three significant digits in E notation: 9.22E-6."""
    if value == 0.0:
        return "0.00E0"
    mantissa, exponent = f"{value:.2E}".split("E")
    return f"{mantissa}E{int(exponent)}"


def format_order(value):
    return "" if value is None else f"{value:.2f}"


def emit_table(report, fmt="csv"):
    lines = [(r.label, format_error(r.l2_error), format_order(r.l2_order),
              format_error(r.linf_error), format_order(r.linf_order)) for r in report.rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(lines)
        return buf.getvalue()
    if fmt == "markdown":
        out = []
        if report.metadata:
            out.append(" ".join(f"{k}={v}" for k, v in report.metadata.items()))
            out.append("")
        out.append("| Mesh | l2 error | order | linf error | order |")
        out.append("|---|---|---|---|---|")
        for label, l2, l2o, li, lio in lines:
            out.append(f"| {label} | {l2} | {l2o or '-'} | {li} | {lio or '-'} |")
        return "\n".join(out) + "\n"
    raise ValueError(f"unknown table format {fmt!r}")


def parse_csv(text):
    """Read back a table written by :func:`emit_table` in csv format."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError("unexpected csv header")
    report = ConvergenceReport()
    for rec in reader:
        nx, ny = map(int, rec["mesh"].split("x"))
        row = ConvergenceRow(nx, ny, float(rec["l2_error"]), float(rec["linf_error"]),
                             float(rec["l2_order"]) if rec["l2_order"] else None,
                             float(rec["linf_order"]) if rec["linf_order"] else None)
        report.rows.append(row)
    return report
