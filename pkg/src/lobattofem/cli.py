"""Command-line driver for convergence studies.

    python3 -m lobattofem --problem poisson_table1 --scheme interp-coeff --format markdown

Options may also come from a plain ``key = value`` file passed with
``--config``; flags given on the command line take precedence.
"""

import argparse
import logging
import sys

from .assembly import Scheme
from .problems import BOUNDARY_CONDITIONS, list_problems, problem_ids
from .report import emit_table
from .solver import DEFAULT_TOL
from .study import DEFAULT_MESHES, RunConfig, StudyError, run_study

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 1, 2

_KEYS = ("problem", "scheme", "bc", "k", "meshes", "tol", "out", "format", "eps")


def parse_meshes(text):
    """'2x4,4x8' -> ((2, 4), (4, 8))."""
    meshes = []
    for item in text.split(","):
        item = item.strip().lower()
        if not item:
            continue
        try:
            nx, ny = (int(v) for v in item.split("x"))
        except ValueError:
            raise ValueError(f"bad mesh {item!r}; expected NXxNY such as 4x8") from None
        if nx < 1 or ny < 1:
            raise ValueError(f"bad mesh {item!r}; sizes must be positive")
        meshes.append((nx, ny))
    if not meshes:
        raise ValueError("empty mesh list")
    return tuple(meshes)


def read_config_file(path):
    """Parse ``key = value`` lines; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def build_parser():
    p = argparse.ArgumentParser(
        prog="lobattofem",
        description="Superconvergence studies for Q^k finite elements on rectangles.")
    p.add_argument("--problem", help="registered problem id (see --list-problems)")
    p.add_argument("--scheme", choices=[s.value for s in Scheme])
    p.add_argument("--bc", choices=BOUNDARY_CONDITIONS,
                   help="boundary condition (default: the problem's own)")
    p.add_argument("--k", type=int, help="polynomial degree, at least 2")
    p.add_argument("--meshes", help="comma-separated NXxNY list, e.g. 2x4,4x8,8x16")
    p.add_argument("--tol", type=float, help="relative CG tolerance")
    p.add_argument("--out", help="write the table to this file as well")
    p.add_argument("--format", choices=("csv", "markdown"))
    p.add_argument("--eps", type=float, help="coefficient parameter of poisson_eps_table5")
    p.add_argument("--config", help="key = value file; command-line flags override it")
    p.add_argument("--list-problems", action="store_true", help="print the registry and exit")
    p.add_argument("-v", "--verbose", action="store_true", help="log per-mesh progress")
    return p


def config_from_args(args):
    """Merge the config file (if any) with explicit flags into a RunConfig."""
    merged = read_config_file(args.config) if args.config else {}
    for key in _KEYS:
        value = getattr(args, key)
        if value is not None:
            merged[key] = value

    problem = merged.get("problem", "poisson_table1")
    if problem not in problem_ids():
        raise ValueError(f"unknown problem {problem!r}; known: {', '.join(problem_ids())}")
    scheme = Scheme(merged.get("scheme", Scheme.INTERP_COEFF.value))
    bc = merged.get("bc")
    if bc is not None and bc not in BOUNDARY_CONDITIONS:
        raise ValueError(f"unknown boundary condition {bc!r}")
    meshes = merged.get("meshes", DEFAULT_MESHES)
    if isinstance(meshes, str):
        meshes = parse_meshes(meshes)
    params = {}
    if "eps" in merged:
        params["eps"] = float(merged["eps"])
    return RunConfig(problem=problem, scheme=scheme, bc=bc, k=int(merged.get("k", 2)),
                     meshes=meshes, tol=float(merged.get("tol", DEFAULT_TOL)),
                     out=merged.get("out"), format=merged.get("format", "csv"), params=params)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    if args.list_problems:
        print(list_problems())
        return EXIT_OK
    try:
        config = config_from_args(args)
    except (ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = run_study(config)
    except StudyError as exc:
        if exc.report.rows:
            sys.stdout.write(emit_table(exc.report, config.format))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except TypeError as exc:
        # unexpected parameter for this problem, e.g. --eps on a fixed problem
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    sys.stdout.write(emit_table(report, config.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
