"""Command-line benchmark harness.

Subcommands: gen, compare, percentiles, fold-study, estimate. All outputs
are deterministic given the flags and seed; CSVs carry a '# schema=1'
header line. Exit codes: 0 ok, 2 bad arguments, 3 numerical failure, 4 I/O.
"""

from __future__ import annotations

import argparse
import glob
import json
import sys
from pathlib import Path

import numpy as np

from . import bench
from .errors import (
    ImaginaryResidueError,
    InvalidKError,
    NonHermitianError,
    NotIntegerError,
    NotMultipleError,
    NumericalFailureError,
    SchemaError,
    SpectrumError,
)

EXIT_OK = 0
EXIT_BAD_ARGS = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shiftrules", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate random instance files")
    gen.add_argument("--dim", type=int, required=True)
    gen.add_argument("--count", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True, help="output directory")
    gen.set_defaults(func=_cmd_gen)

    comp = sub.add_parser("compare", help="derivative-method comparison sweep for one instance")
    comp.add_argument("instance", help="instance JSON file")
    comp.add_argument("--eps", type=float, required=True)
    comp.add_argument("--xmin", type=float, default=0.0)
    comp.add_argument("--xmax", type=float, default=13.0)
    comp.add_argument("--points", type=int, default=300)
    comp.add_argument("--out", required=True, help="output CSV")
    comp.set_defaults(func=_cmd_compare)

    perc = sub.add_parser("percentiles", help="relative-error-difference percentiles across instances")
    perc.add_argument("instances", help="glob of instance JSON files")
    perc.add_argument("--eps", type=float, required=True)
    perc.add_argument("--xmin", type=float, default=0.0)
    perc.add_argument("--xmax", type=float, default=13.0)
    perc.add_argument("--points", type=int, default=300)
    perc.add_argument("--out", required=True, help="output CSV")
    perc.set_defaults(func=_cmd_percentiles)

    fold = sub.add_parser("fold-study", help="folded-rule error versus the wrap point c")
    fold.add_argument("instance", help="instance JSON file")
    fold.add_argument("--p", type=float, required=True)
    fold.add_argument("--c", type=float, nargs="+", required=True, help="one or more wrap points")
    fold.add_argument("--points", type=int, default=21)
    fold.add_argument("--out", required=True, help="output CSV")
    fold.set_defaults(func=_cmd_fold_study)

    est = sub.add_parser("estimate", help="shot-based derivative estimate at one point")
    est.add_argument("instance", help="instance JSON file")
    est.add_argument("--rule", choices=("nyquist", "folded", "aspsr"), required=True)
    est.add_argument("--x", type=float, required=True)
    est.add_argument("--shots", type=int, required=True)
    est.add_argument("--seed", type=int, required=True)
    est.add_argument("--eps", type=float, default=1e-3)
    est.add_argument("--p", type=float)
    est.add_argument("--c", type=float)
    est.add_argument("--out", required=True, help="output JSON")
    est.set_defaults(func=_cmd_estimate)
    return parser


def _cmd_gen(args: argparse.Namespace) -> int:
    paths = bench.generate_instances(args.dim, args.count, args.seed, args.out)
    print(f"wrote {len(paths)} instance files to {args.out}")
    return EXIT_OK


def _grid(args: argparse.Namespace) -> np.ndarray:
    if args.points < 2:
        raise ValueError(f"need at least 2 grid points, got {args.points}")
    return np.linspace(args.xmin, args.xmax, args.points)


def _cmd_compare(args: argparse.Namespace) -> int:
    model = bench.load_instance(args.instance)
    cols = bench.compare_columns(model, args.eps, _grid(args))
    bench.write_csv(args.out, cols)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_percentiles(args: argparse.Namespace) -> int:
    paths = sorted(glob.glob(args.instances))
    if len(paths) < 2:
        raise FileNotFoundError(f"need at least 2 instance files, glob {args.instances!r} matched {len(paths)}")
    models = [bench.load_instance(p) for p in paths]
    cols = bench.percentile_columns(models, args.eps, _grid(args))
    bench.write_csv(args.out, cols)
    print(f"wrote {args.out} ({len(models)} instances)")
    return EXIT_OK


def _cmd_fold_study(args: argparse.Namespace) -> int:
    model = bench.load_instance(args.instance)
    cols = bench.fold_study_columns(model, args.p, list(args.c), points=args.points)
    bench.write_csv(args.out, cols)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_estimate(args: argparse.Namespace) -> int:
    model = bench.load_instance(args.instance)
    report = bench.estimate_report(
        model, args.rule, args.x, args.shots, args.seed, eps=args.eps, p=args.p, c=args.c
    )
    Path(args.out).write_text(json.dumps(report.to_dict()) + "\n", encoding="utf-8")
    print(f"wrote {args.out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NonHermitianError, NumericalFailureError, ImaginaryResidueError, SpectrumError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InvalidKError, NotIntegerError, NotMultipleError, ValueError) as exc:
        print(f"bad arguments: {exc}", file=sys.stderr)
        return EXIT_BAD_ARGS


if __name__ == "__main__":
    sys.exit(main())
