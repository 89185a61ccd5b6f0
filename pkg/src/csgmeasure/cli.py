"""Command-line interface: ``csg {compute,sweep,mds,baselines,synth}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical error.
The worker thread count comes from ``$CSG_THREADS`` (default: CPU count);
results do not depend on it.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .baselines import MEASURES, baseline_scores
from .dataset import csv_text, generate_blobs, load, save, swap_labels
from .density import DensityParams
from .exceptions import DataError, NumericalError
from .mds import class_map_csv, classical_mds
from .reduction import parse_ratios, sweep
from .report import dumps, load_report, report_to_json, spectrum_csv
from .similarity import SimilarityParams
from .spectral import csg_pipeline

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _add_input(p, required=True):
    p.add_argument("--input", required=required, metavar="PATH",
                   help="dataset file (CSV 'label,f0,...' or CSGE binary)")
    p.add_argument("--format", choices=("csv", "bin"), default=None,
                   help="input format (default: detected from the file's magic bytes)")


def _add_csg_params(p):
    p.add_argument("--m-samples", type=_positive_int, default=100, metavar="M",
                   help="Monte-Carlo samples per class (default: 100; results are stable "
                        "for M >= 50)")
    p.add_argument("--k-neighbors", type=_positive_int, default=3, metavar="k",
                   help="neighbours in the k-NN density estimate (default: 3; results "
                        "are stable for k between 1 and 11)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")


def _params(args) -> SimilarityParams:
    return SimilarityParams(args.m_samples, args.seed, DensityParams(args.k_neighbors))


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_compute(args) -> int:
    ds = load(args.input, args.format)
    report = csg_pipeline(ds, _params(args))
    _write(report_to_json(report), args.output)
    if args.spectrum_csv:
        _write(spectrum_csv(report.eigenvalues), args.spectrum_csv)
    return 0


def cmd_sweep(args) -> int:
    try:
        ratios = parse_ratios(args.ratios)
    except DataError as exc:
        raise UsageError(str(exc)) from None
    ds = load(args.input, args.format)
    result = sweep(ds, ratios, _params(args), repeats=args.repeats, seed=args.seed)
    if args.csv:
        _write(result.to_csv(), args.csv)
    if args.output or not args.csv:
        _write(dumps(result.to_dict()), args.output)
    return 0


def cmd_mds(args) -> int:
    if bool(args.report) == bool(args.input):
        raise UsageError("give exactly one of --report or --input")
    if args.report:
        try:
            report = load_report(args.report)
        except OSError as exc:
            raise DataError(str(exc)) from None
        W, names = report.W, report.class_names
    else:
        report = csg_pipeline(load(args.input, args.format), _params(args))
        W, names = report.W, report.class_names
    if W.ndim != 2 or W.shape != (len(names), len(names)):
        raise DataError(f"W has shape {W.shape}, expected ({len(names)}, {len(names)})")
    _write(class_map_csv(classical_mds(W, names)), args.output)
    return 0


def cmd_baselines(args) -> int:
    measures = [m.strip().lower() for m in args.measures.split(",") if m.strip()]
    unknown = sorted(set(measures) - set(MEASURES))
    if unknown or not measures:
        raise UsageError(f"unknown measures {unknown}; choose from {','.join(MEASURES)}")
    ds = load(args.input, args.format)
    scores = baseline_scores(ds, measures)
    out = {
        "space": "embedding" if args.on_embedding else "raw",
        "N": ds.N, "d": ds.d, "K": ds.K,
        "scores": scores.to_dict(),
        "tool_version": __version__,
    }
    _write(dumps(out), args.output)
    return 0


def cmd_synth(args) -> int:
    if args.swap_classes == 1 or args.swap_classes < 0 or args.swap_classes > args.classes:
        raise UsageError("--swap-classes must be 0 or between 2 and --classes")
    if not (0.0 <= args.swap_frac <= 1.0):
        raise UsageError("--swap-frac must lie in [0, 1]")
    ds = generate_blobs(args.classes, args.per_class, args.dim, args.separation,
                        args.sigma, seed=args.seed)
    if args.swap_classes >= 2:
        ds = swap_labels(ds, range(args.swap_classes), args.swap_frac, seed=args.seed)
    if args.output in (None, "-"):
        sys.stdout.write(csv_text(ds))
    else:
        save(ds, args.output, args.format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="csg", description="Cumulative Spectral Gradient dataset complexity.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("compute", help="compute the CSG report of a dataset")
    _add_input(p)
    _add_csg_params(p)
    p.add_argument("--output", metavar="PATH", help="JSON report path (default: stdout)")
    p.add_argument("--spectrum-csv", metavar="PATH", help="also write index,eigenvalue CSV")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="CSG under per-class subsampling ratios")
    _add_input(p)
    _add_csg_params(p)
    p.add_argument("--ratios", default="1.0,0.8,0.6,0.4,0.2",
                   help="comma-separated ratios in (0, 1] (default: 1.0,0.8,0.6,0.4,0.2)")
    p.add_argument("--repeats", type=_positive_int, default=1,
                   help="subsamples per ratio (default: 1)")
    p.add_argument("--output", metavar="PATH", help="JSON result path (default: stdout)")
    p.add_argument("--csv", metavar="PATH",
                   help="write ratio,count_per_class,csg_mean,csg_std CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mds", help="2-D class map from a report (or a dataset)")
    p.add_argument("--report", metavar="PATH", help="JSON report written by 'csg compute'")
    _add_input(p, required=False)
    _add_csg_params(p)
    p.add_argument("--output", metavar="PATH", help="class,x,y CSV path (default: stdout)")
    p.set_defaults(func=cmd_mds)

    p = sub.add_parser("baselines", help="Ho-Basu measures F1, N1, N2, N3, T2")
    _add_input(p)
    p.add_argument("--measures", default=",".join(MEASURES),
                   help=f"comma-separated subset of {','.join(MEASURES)} (default: all)")
    p.add_argument("--on-embedding", action="store_true",
                   help="mark the input as an embedding rather than raw features; the "
                        "measures themselves are computed identically")
    p.add_argument("--output", metavar="PATH", help="JSON path (default: stdout)")
    p.set_defaults(func=cmd_baselines)

    p = sub.add_parser("synth", help="Gaussian blob dataset with optional label swapping")
    p.add_argument("--classes", type=_positive_int, default=10)
    p.add_argument("--per-class", type=_positive_int, default=500)
    p.add_argument("--dim", type=_positive_int, default=2)
    p.add_argument("--separation", type=float, default=6.0,
                   help="anchor radius in units of sigma (default: 6)")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--swap-classes", type=int, default=0,
                   help="swap labels among the first t classes (0: no swapping)")
    p.add_argument("--swap-frac", type=float, default=0.5,
                   help="fraction of each swapped class that is relabeled (default: 0.5)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "bin"), default=None,
                   help="output format (default: from extension, .bin/.csge is binary)")
    p.add_argument("--output", metavar="PATH", help="dataset path (default: CSV on stdout)")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help, --version and argparse usage errors
        return exc.code
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"csg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"csg: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DataError as exc:
        print(f"csg: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"csg: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
