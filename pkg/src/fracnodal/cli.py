"""Batch command-line front end.

Subcommands: assemble, validate, solve-ground, solve-nodal, multistart,
degree-check.  Configuration comes from an optional flat key=value file
plus repeatable --set overrides; outputs are deterministic JSON/CSV files
in the output directory.

Exit codes: 0 success, 2 configuration error, 3 solver non-convergence,
4 violated coefficient hypothesis.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import pipeline
from .config import build_config
from .degree import Rectangle
from .errors import (
    ConfigError,
    HypothesisViolationError,
    NonConvergenceError,
    ParameterError,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NONCONVERGENCE = 3
EXIT_HYPOTHESIS = 4


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value configuration file")
    parser.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
        help="override one configuration entry (repeatable)",
    )
    parser.add_argument("--output-dir", help="directory for result files (default: config)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracnodal",
        description="Least-energy sign-changing solutions of a nonlocal field equation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("assemble", help="assemble the forms and emit diagnostics")
    _add_common(p)
    p.add_argument("--export-matrix", action="store_true", help="also write i,j,value CSVs")

    for name, help_text in (
        ("validate", "audit the coefficient pair and nonlinearity"),
        ("solve-ground", "minimize over the Nehari set from a one-signed seed"),
        ("solve-nodal", "minimize over the nodal set from a sign-changing seed"),
        ("multistart", "run a family of seeds and deduplicate the critical points"),
    ):
        _add_common(sub.add_parser(name, help=help_text))

    p = sub.add_parser("degree-check", help="winding certificate for a stored solution")
    _add_common(p)
    p.add_argument("--solution", required=True, help="solution CSV (columns x,u)")
    p.add_argument(
        "--rect", default="0.5,1.5,0.5,1.5", metavar="T_LO,T_HI,S_LO,S_HI",
        help="certificate rectangle (default unit box)",
    )
    return parser


def _outdir(args, config) -> str:
    out = args.output_dir if args.output_dir else config.output_dir
    os.makedirs(out, exist_ok=True)
    return out


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = build_config(args.config, args.overrides)
        outdir = _outdir(args, config)
        if args.command == "assemble":
            result = pipeline.run_assemble(config, outdir, export_matrix=args.export_matrix)
            print(f"assembled n={result['n']} alpha={result['alpha']}: " +
                  ", ".join(result["files"]))
        elif args.command == "validate":
            result = pipeline.run_validate(config, outdir)
            print(result["table"])
            print(", ".join(result["files"]))
        elif args.command == "solve-ground":
            result = pipeline.run_solve_ground(config, outdir)
            print(f"ground energy {result['energy']:.10g} "
                  f"residual {result['residual']:.3e}: " + ", ".join(result["files"]))
        elif args.command == "solve-nodal":
            result = pipeline.run_solve_nodal(config, outdir)
            print(f"nodal energy {result['energy']:.10g} "
                  f"residual {result['residual']:.3e} "
                  f"degree {result['degree_certificate']}: " + ", ".join(result["files"]))
        elif args.command == "multistart":
            result = pipeline.run_multistart(config, outdir)
            energies = ", ".join(f"{r['energy']:.10g}" for r in result["runs"])
            print(f"{result['n_distinct']} distinct critical points: {energies}")
            print(", ".join(result["files"]))
        elif args.command == "degree-check":
            try:
                bounds = tuple(float(v) for v in args.rect.split(","))
                rect = Rectangle(*bounds)
            except (ValueError, TypeError) as exc:
                raise ConfigError("rect", f"cannot parse '{args.rect}': {exc}") from exc
            result = pipeline.run_degree_check(config, args.solution, rect, outdir)
            print(f"degree certificate {result['degree_certificate']}: " +
                  ", ".join(result["files"]))
        else:  # pragma: no cover - argparse enforces the choices
            raise ConfigError("command", args.command)
    except (ConfigError, ParameterError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HypothesisViolationError as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except NonConvergenceError as exc:
        print(f"solver did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
