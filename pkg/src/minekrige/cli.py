"""Command-line interface: ``minekrige {estimate,krige,gls,surface}``.

Exit status 0 on success, 2 for usage or input errors, 3 when the kriging
system is singular.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from typing import List, Optional, Sequence

from . import kernels
from .core import CorrelogramModel, GridSpec, InputError, SingularMatrix
from .io import builtin_table1, read_samples_path, write_report, write_surface_csv
from .kriging import estimate_at, estimate_gls
from .search import grid_search, objective_surface

log = logging.getLogger("minekrige")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SINGULAR = 3
MAX_SURFACE_NODES = 10**8

# options whose values may legitimately start with '-'
_VALUE_OPTS = ("--target", "--grid-east", "--grid-north")


def _glue_negative_values(argv: Sequence[str]) -> List[str]:
    out: List[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _parse_target(text: str):
    parts = text.split(",")
    try:
        east, north = (float(p) for p in parts)
    except ValueError:
        raise InputError(f"target must be 'east,north', got {text!r}") from None
    return east, north


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("input")
    src.add_argument("input", nargs="?", help="CSV file with header east,north,thick")
    src.add_argument("--builtin-table1", action="store_true", help="use the built-in 75-point coal seam dataset")
    cg = common.add_argument_group("correlogram")
    cg.add_argument("--range", dest="practical_range", type=float, default=30.0)
    cg.add_argument("--sill", type=float, default=1.0)
    cg.add_argument("--shape", type=float, default=2.0)
    common.add_argument("-o", "--output", help="write the result here instead of standard output")
    common.add_argument("-v", "--verbose", action="store_true")

    gridded = argparse.ArgumentParser(add_help=False)
    gridded.add_argument("--grid-east", default="-50:50:0.1", metavar="MIN:MAX:STEP")
    gridded.add_argument("--grid-north", default="-50:50:0.1", metavar="MIN:MAX:STEP")
    gridded.add_argument("--workers", type=int, default=0, help="threads; 0 = one per CPU, 1 = sequential")
    gridded.add_argument("--backend", choices=kernels.available_backends(), help="grid kernel backend")

    reporting = argparse.ArgumentParser(add_help=False)
    reporting.add_argument("--weights", action="store_true", help="include the weight vector in the report")

    parser = argparse.ArgumentParser(prog="minekrige", description="Kriging mean/variance estimates for a sampled deposit.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("estimate", parents=[common, gridded, reporting], help="grid search for the best node")
    p = sub.add_parser("krige", parents=[common, reporting], help="estimates at one target")
    p.add_argument("--target", required=True, metavar="EAST,NORTH")
    sub.add_parser("gls", parents=[common, reporting], help="estimates from the least-squares weights")
    sub.add_parser("surface", parents=[common, gridded], help="objective surface as CSV")
    return parser


def _load(args):
    if bool(args.input) == bool(args.builtin_table1):
        raise _Usage("give exactly one of an input file or --builtin-table1")
    if args.builtin_table1:
        return builtin_table1(), "builtin:table1"
    try:
        return read_samples_path(args.input), args.input
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc.strerror or exc}") from None


class _Usage(Exception):
    pass


def _emit(data: bytes, path: Optional[str]) -> None:
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _metadata(args, model, n, source, grid=None, started=None):
    meta = {
        "command": args.command,
        "source": source,
        "sample_count": n,
        "correlogram": {
            "family": model.family,
            "sill": model.sill,
            "practical_range": model.practical_range,
            "shape_exponent": model.shape_exponent,
        },
    }
    if grid is not None:
        east, north = grid.as_strings()
        meta["grid"] = {"east": east, "north": north, "nodes": grid.size}
    if started is not None:
        meta["wall_time_s"] = time.perf_counter() - started
    return meta


def run(args) -> int:
    started = time.perf_counter()
    samples, source = _load(args)
    model = CorrelogramModel(sill=args.sill, practical_range=args.practical_range, shape_exponent=args.shape)

    if args.command in ("estimate", "surface"):
        grid = GridSpec.from_strings(args.grid_east, args.grid_north)
        if args.workers < 0:
            raise InputError("--workers must be >= 0")
        if args.command == "surface":
            if grid.size > MAX_SURFACE_NODES:
                raise InputError(f"grid has {grid.size} nodes; surface export is limited to {MAX_SURFACE_NODES}")
            surface = objective_surface(samples, model, grid, workers=args.workers, backend=args.backend)
            if args.output:
                with open(args.output, "wb") as fh:
                    write_surface_csv(surface, fh)
            else:
                write_surface_csv(surface, sys.stdout.buffer)
                sys.stdout.flush()
            return EXIT_OK
        report, _ = grid_search(samples, model, grid, workers=args.workers, backend=args.backend)
        meta = _metadata(args, model, samples.n, source, grid, started)
    elif args.command == "krige":
        report = estimate_at(samples, model, _parse_target(args.target))
        meta = _metadata(args, model, samples.n, source, started=started)
    else:
        report = estimate_gls(samples, model)
        meta = _metadata(args, model, samples.n, source, started=started)

    _emit(write_report(report, meta, include_weights=args.weights), args.output)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(_glue_negative_values(argv))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return run(args)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"minekrige: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SingularMatrix as exc:
        print(f"minekrige: singular kriging system: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (InputError, OSError) as exc:
        print(f"minekrige: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
